#include "bcg/sigd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bcg {
namespace {

// sum_i w_i v_i; compensated once the support is large enough for naive
// accumulation to lose digits.
Eigen::VectorXd combination(const std::vector<Atom>& atoms, const Eigen::VectorXd& w) {
  const Eigen::Index n = atoms.empty() ? 0 : atoms.front().dim();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  if (atoms.size() <= 64) {
    for (std::size_t i = 0; i < atoms.size(); ++i)
      s += w[static_cast<Eigen::Index>(i)] * atoms[i].coords();
    return s;
  }
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd term(n), y(n), t(n);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    term = w[static_cast<Eigen::Index>(i)] * atoms[i].coords();
    y = term - comp;
    t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace

Eigen::VectorXd active_gradient(const Objective& f, const ActiveSet& set) {
  const Eigen::VectorXd grad = f.gradient(set.iterate());
  Eigen::VectorXd c(set.size());
  for (int i = 0; i < set.size(); ++i)
    c[i] = grad.dot(set.atoms()[static_cast<std::size_t>(i)].coords());
  return c;
}

Eigen::VectorXd project_direction(const Eigen::VectorXd& c) {
  if (c.size() < 1) throw std::invalid_argument("project_direction: empty input");
  return c.array() - c.mean();
}

double ratio_test(const Eigen::VectorXd& lambda, const Eigen::VectorXd& d) {
  double eta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d[i] > 0.0) eta = std::min(eta, lambda[i] / d[i]);
  if (!std::isfinite(eta))
    throw std::invalid_argument("ratio_test: direction has no positive entry");
  return eta;
}

SigdResult sigd_step(const Objective& f, ActiveSet& set, const SigdConfig& cfg) {
  if (set.size() == 0) throw std::invalid_argument("sigd_step: empty active set");
  const Eigen::VectorXd x = set.iterate();
  const double fx = f.value(x);
  SigdResult res;
  res.evals = 1;

  const Eigen::VectorXd c = active_gradient(f, set);
  const Eigen::VectorXd d = project_direction(c);
  if (d.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + c.lpNorm<Eigen::Infinity>())) {
    // The gradient cannot tell the atoms apart; collapse to the first one.
    set.reset_to(set.atoms().front());
    res.step = StepKind::Drop;
    res.progress = fx - f.value(set.iterate());
    ++res.evals;
    return res;
  }

  const Eigen::VectorXd lambda = set.weights();
  const double eta = ratio_test(lambda, d);
  const Eigen::VectorXd shifted = lambda - eta * d;

  // Candidate drop: prune the entries the ratio test zeroed, renormalize,
  // and evaluate f at the exact rebuilt point. Testing the realized point
  // (rather than the pre-renormalization one) keeps vanilla drops
  // non-increasing by construction.
  std::vector<Atom> kept;
  std::vector<double> kept_w;
  kept.reserve(static_cast<std::size_t>(set.size()));
  for (int i = 0; i < set.size(); ++i) {
    if (shifted[i] > kDropTol) {
      kept.push_back(set.atoms()[static_cast<std::size_t>(i)]);
      kept_w.push_back(shifted[i]);
    }
  }
  if (kept.empty())
    throw std::runtime_error("sigd_step: ratio test removed every weight");

  double eps = 0.0;
  if (cfg.mode == DropMode::PromoteDrops)
    eps = std::min(std::max(cfg.last_progress, 0.0) / 2.0, cfg.promote_eps0);

  if (static_cast<int>(kept.size()) < set.size()) {
    Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
    w /= w.sum();
    Eigen::VectorXd y = combination(kept, w);
    const double fy = f.value(y);
    ++res.evals;
    if (fy <= fx + eps) {
      set.replace(std::move(kept), std::move(w), std::move(y));
      res.step = StepKind::Drop;
      res.progress = fx - fy;
      return res;
    }
  }

  // Descent: line search the segment from x to the boundary point
  // y = x - eta * sum_i d_i v_i. The refined search is within rounding of
  // exact, which the per-step progress bound needs.
  const Eigen::VectorXd dir = -eta * combination(set.atoms(), d);
  const auto phi = f.segment(x, dir);
  const SegmentSearchResult ls = refined_descent_search(phi, 1.0, cfg.line_search);
  res.evals += ls.evals;
  if (ls.gamma == 0.0) {
    res.step = StepKind::Descent;
    res.stalled = true;
    return res;
  }

  Eigen::VectorXd w = lambda - (ls.gamma * eta) * d;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] < 0.0) w[i] = 0.0;  // rounding guard at gamma near 1
  w /= w.sum();
  std::vector<Atom> atoms = set.atoms();
  set.replace(std::move(atoms), std::move(w), x + ls.gamma * dir);
  res.step = StepKind::Descent;
  res.progress = fx - ls.f_value;
  return res;
}

}  // namespace bcg
