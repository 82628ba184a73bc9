#include "bcg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace bcg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream per (seed, trial, lane). Lane 0 draws the trial's
// vertex set, lane 1 everything after it; splitting the lanes is what lets
// the curvature and simplicial estimators share vertex sets exactly.
Rng sub_rng(std::uint64_t seed, int trial, int lane) {
  const auto t = static_cast<std::uint64_t>(trial);
  const auto l = static_cast<std::uint64_t>(lane);
  return Rng(mix64(mix64(seed + 0x632be59bd9b4e019ULL * (t + 1)) ^ (l + 1)));
}

std::vector<Atom> sample_vertex_set(const Region& region, std::uint64_t seed, int trial) {
  Rng rng = sub_rng(seed, trial, 0);
  const auto dim = static_cast<std::int64_t>(region.ambient_dim());
  const std::int64_t max_size = std::max<std::int64_t>(2, 2 * dim);
  const std::int64_t size = 2 + rng.uniform_int(std::max<std::int64_t>(1, max_size - 1));
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(size));
  for (std::int64_t i = 0; i < size; ++i) atoms.push_back(sample_vertex(region, rng));
  return atoms;
}

}  // namespace

BoundReport make_report(std::string name, double lhs, double rhs, double tol) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.satisfied = lhs <= rhs + tol;
  r.slack = rhs - lhs;
  return r;
}

std::string json_line(const BoundReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["satisfied"] = r.satisfied;
  j["slack"] = r.slack;
  return j.dump();
}

double dual_gap(const Objective& obj, const Region& region, const Eigen::VectorXd& x) {
  const Eigen::VectorXd grad = obj.gradient(x);
  const Atom v = region.lmo(grad);
  return std::max(0.0, grad.dot(x - v.coords()));
}

Atom sample_vertex(const Region& region, Rng& rng) {
  Eigen::VectorXd cost(region.ambient_dim());
  for (Eigen::Index i = 0; i < cost.size(); ++i) cost[i] = rng.normal();
  return region.lmo(cost);
}

Eigen::VectorXd sample_point(const std::vector<Atom>& atoms, Rng& rng) {
  if (atoms.empty()) throw std::invalid_argument("sample_point: no atoms");
  Eigen::VectorXd w(static_cast<Eigen::Index>(atoms.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = -std::log(1.0 - rng.uniform01());
  const double total = w.sum();
  if (total > 0.0) {
    w /= total;
  } else {
    w.setConstant(1.0 / static_cast<double>(atoms.size()));
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(atoms.front().dim());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    x += w[static_cast<Eigen::Index>(i)] * atoms[i].coords();
  }
  return x;
}

double curvature_estimate(const Objective& obj, const Region& region, int samples,
                          std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("curvature_estimate: samples must be positive");
  double best = 0.0;
  for (int trial = 0; trial < samples; ++trial) {
    const std::vector<Atom> atoms = sample_vertex_set(region, seed, trial);
    Rng rng = sub_rng(seed, trial, 1);
    const Eigen::VectorXd x = sample_point(atoms, rng);
    const Eigen::VectorXd y = sample_point(atoms, rng);
    // gamma bounded away from 0 so the quotient does not amplify
    // cancellation in f(x + gamma d) - f(x).
    const double gamma = rng.uniform(0.1, 1.0);
    const Eigen::VectorXd dir = y - x;
    const double fx = obj.value(x);
    const double slope = obj.gradient(x).dot(dir);
    const double fstep = obj.value(x + gamma * dir);
    const double witness = 2.0 * (fstep - fx - gamma * slope) / (gamma * gamma);
    best = std::max(best, witness);
  }
  return best;
}

double simplicial_curvature_estimate(const QuadraticObjective& obj, const Region& region,
                                     int trials, std::uint64_t seed,
                                     std::vector<BoundReport>* reports) {
  if (trials <= 0) {
    throw std::invalid_argument("simplicial_curvature_estimate: trials must be positive");
  }
  const double L = obj.L();
  const double D = region.diameter();
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::vector<Atom> atoms = sample_vertex_set(region, seed, trial);
    const double lfs = restricted_smoothness(obj, atoms);
    best = std::max(best, lfs);
    if (reports != nullptr) {
      const double cap = L * D * D * static_cast<double>(atoms.size()) / 4.0;
      reports->push_back(
          make_report("restricted_smoothness_cap", lfs, cap, 1e-9 * (1.0 + std::abs(cap))));
    }
  }
  return best;
}

double simplex_strong_convexity_floor(double alpha, int k) {
  if (k < 2) throw std::invalid_argument("simplex_strong_convexity_floor: need k >= 2");
  return 4.0 * alpha / static_cast<double>(k);
}

BoundReport gradient_check(const Objective& obj, const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw std::invalid_argument("gradient_check: no points");
  double worst = 0.0;
  for (const Eigen::VectorXd& x : points) {
    const Eigen::VectorXd grad = obj.gradient(x);
    const double scale = 1.0 + grad.cwiseAbs().maxCoeff();
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      probe[i] = x[i] + h;
      const double fp = obj.value(probe);
      probe[i] = x[i] - h;
      const double fm = obj.value(probe);
      probe[i] = x[i];
      const double central = (fp - fm) / (2.0 * h);
      worst = std::max(worst, std::abs(central - grad[i]) / scale);
    }
  }
  return make_report("gradient_central_difference", worst, 1e-5, 0.0);
}

}  // namespace bcg
