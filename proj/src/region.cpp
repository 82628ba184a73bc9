#include "bcg/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bcg {
namespace {

// Exact min-cost perfect assignment (Hungarian algorithm with potentials,
// O(n^3)). Returns perm with perm[row] = col.
std::vector<std::int32_t> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<std::int32_t> perm(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0)
      perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] =
          static_cast<std::int32_t>(j - 1);
  return perm;
}

// Euclidean projection onto the probability simplex (sort-based).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  const Eigen::Index k = y.size();
  std::vector<double> u(y.data(), y.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double theta = 0.0;
  int rho = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    css += u[static_cast<std::size_t>(i)];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("Simplex: k must be >= 1");
}

Atom Simplex::vertex(int i) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k_);
  v[i] = 1.0;
  return Atom(AtomKey{AtomFamily::Coordinate, {static_cast<std::int32_t>(i)}},
              std::move(v));
}

Atom Simplex::lmo(const Eigen::VectorXd& c) const {
  if (c.size() != k_) throw std::invalid_argument("Simplex::lmo: bad dimension");
  int best = 0;
  for (int i = 1; i < k_; ++i)
    if (c[i] < c[best]) best = i;
  return vertex(best);
}

bool Simplex::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != k_) return false;
  if (x.minCoeff() < -tol) return false;
  return std::abs(x.sum() - 1.0) <= tol;
}

double Simplex::diameter() const { return k_ >= 2 ? std::sqrt(2.0) : 0.0; }

std::string Simplex::name() const { return "simplex(" + std::to_string(k_) + ")"; }

// ------------------------------------------------------------------- Cube

Cube::Cube(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Cube: n must be >= 1");
}

Atom Cube::lmo(const Eigen::VectorXd& c) const {
  if (c.size() != n_) throw std::invalid_argument("Cube::lmo: bad dimension");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
  std::vector<std::int32_t> ones;
  for (int i = 0; i < n_; ++i) {
    if (c[i] < 0.0) {
      v[i] = 1.0;
      ones.push_back(static_cast<std::int32_t>(i));
    }
  }
  return Atom(AtomKey{AtomFamily::CubeCorner, std::move(ones)}, std::move(v));
}

bool Cube::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != n_) return false;
  return x.minCoeff() >= -tol && x.maxCoeff() <= 1.0 + tol;
}

double Cube::diameter() const { return std::sqrt(static_cast<double>(n_)); }

std::string Cube::name() const { return "cube(" + std::to_string(n_) + ")"; }

// ----------------------------------------------------------------- L1Ball

L1Ball::L1Ball(int n, double tau) : n_(n), tau_(tau) {
  if (n < 1) throw std::invalid_argument("L1Ball: n must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("L1Ball: tau must be > 0");
}

Atom L1Ball::vertex(int i, int sign) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
  v[i] = sign > 0 ? tau_ : -tau_;
  return Atom(AtomKey{AtomFamily::SignedCoordinate,
                      {static_cast<std::int32_t>(i), static_cast<std::int32_t>(sign)}},
              std::move(v));
}

Atom L1Ball::lmo(const Eigen::VectorXd& c) const {
  if (c.size() != n_) throw std::invalid_argument("L1Ball::lmo: bad dimension");
  int best = 0;
  for (int i = 1; i < n_; ++i)
    if (std::abs(c[i]) > std::abs(c[best])) best = i;
  // sign(0) counts as +1, so a zero cost vector selects -tau e_0.
  const int vertex_sign = c[best] > 0.0 ? -1 : (c[best] < 0.0 ? 1 : -1);
  return vertex(best, vertex_sign);
}

bool L1Ball::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != n_) return false;
  return x.cwiseAbs().sum() <= tau_ + tol * std::max(1.0, tau_);
}

double L1Ball::diameter() const { return 2.0 * tau_; }

std::string L1Ball::name() const {
  return "l1ball(" + std::to_string(n_) + ",tau=" + std::to_string(tau_) + ")";
}

// --------------------------------------------------------------- Birkhoff

Birkhoff::Birkhoff(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Birkhoff: n must be >= 1");
}

Atom Birkhoff::vertex(const std::vector<std::int32_t>& perm) const {
  if (static_cast<int>(perm.size()) != n_)
    throw std::invalid_argument("Birkhoff::vertex: bad permutation size");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient_dim());
  for (int i = 0; i < n_; ++i) {
    const std::int32_t j = perm[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n_) throw std::invalid_argument("Birkhoff::vertex: bad column");
    v[static_cast<Eigen::Index>(i) * n_ + j] = 1.0;
  }
  return Atom(AtomKey{AtomFamily::Permutation, perm}, std::move(v));
}

Atom Birkhoff::lmo(const Eigen::VectorXd& c) const {
  if (c.size() != ambient_dim()) throw std::invalid_argument("Birkhoff::lmo: bad dimension");
  Eigen::MatrixXd cost(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) cost(i, j) = c[static_cast<Eigen::Index>(i) * n_ + j];
  return vertex(solve_assignment(cost));
}

bool Birkhoff::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != ambient_dim()) return false;
  if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    double col = 0.0;
    for (int j = 0; j < n_; ++j) {
      row += x[static_cast<Eigen::Index>(i) * n_ + j];
      col += x[static_cast<Eigen::Index>(j) * n_ + i];
    }
    if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
  }
  return true;
}

double Birkhoff::diameter() const {
  return n_ >= 2 ? std::sqrt(2.0 * n_) : 0.0;
}

std::string Birkhoff::name() const { return "birkhoff(" + std::to_string(n_) + ")"; }

// ----------------------------------------------------------- DagPathRegion

DagPathRegion::DagPathRegion(DagGraph graph) : graph_(std::move(graph)) {
  graph_.validate();
  topo_ = graph_.topological_order();
  out_ = graph_.out_arcs();
  // Longest source-sink path (arc count) for the diameter bound.
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> longest(static_cast<std::size_t>(graph_.nodes), ninf);
  longest[static_cast<std::size_t>(graph_.source)] = 0.0;
  for (int v : topo_) {
    if (longest[static_cast<std::size_t>(v)] == ninf) continue;
    for (int ai : out_[static_cast<std::size_t>(v)]) {
      const int w = graph_.arcs[static_cast<std::size_t>(ai)].to;
      longest[static_cast<std::size_t>(w)] =
          std::max(longest[static_cast<std::size_t>(w)],
                   longest[static_cast<std::size_t>(v)] + 1.0);
    }
  }
  max_path_arcs_ = static_cast<int>(longest[static_cast<std::size_t>(graph_.sink)]);
}

Atom DagPathRegion::path_atom(std::vector<std::int32_t> arc_indices) const {
  std::sort(arc_indices.begin(), arc_indices.end());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient_dim());
  for (std::int32_t ai : arc_indices) v[ai] = 1.0;
  return Atom(AtomKey{AtomFamily::ArcSet, std::move(arc_indices)}, std::move(v));
}

Atom DagPathRegion::lmo(const Eigen::VectorXd& c) const {
  if (c.size() != ambient_dim()) throw std::invalid_argument("DagPathRegion::lmo: bad dimension");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(graph_.nodes), inf);
  std::vector<int> parent(static_cast<std::size_t>(graph_.nodes), -1);
  dist[static_cast<std::size_t>(graph_.source)] = 0.0;
  for (int v : topo_) {
    if (dist[static_cast<std::size_t>(v)] == inf) continue;
    for (int ai : out_[static_cast<std::size_t>(v)]) {
      const int w = graph_.arcs[static_cast<std::size_t>(ai)].to;
      const double cand = dist[static_cast<std::size_t>(v)] + c[ai];
      // Strict improvement, or an equal-cost path through a lower arc index.
      if (cand < dist[static_cast<std::size_t>(w)] ||
          (cand == dist[static_cast<std::size_t>(w)] &&
           ai < parent[static_cast<std::size_t>(w)])) {
        dist[static_cast<std::size_t>(w)] = cand;
        parent[static_cast<std::size_t>(w)] = ai;
      }
    }
  }
  if (dist[static_cast<std::size_t>(graph_.sink)] == inf)
    throw std::runtime_error("DagPathRegion::lmo: sink unreachable");
  std::vector<std::int32_t> arcs;
  int v = graph_.sink;
  while (v != graph_.source) {
    const int ai = parent[static_cast<std::size_t>(v)];
    arcs.push_back(static_cast<std::int32_t>(ai));
    v = graph_.arcs[static_cast<std::size_t>(ai)].from;
  }
  return path_atom(std::move(arcs));
}

bool DagPathRegion::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != ambient_dim()) return false;
  if (x.minCoeff() < -tol || x.maxCoeff() > 1.0 + tol) return false;
  std::vector<double> net(static_cast<std::size_t>(graph_.nodes), 0.0);
  for (std::size_t ai = 0; ai < graph_.arcs.size(); ++ai) {
    net[static_cast<std::size_t>(graph_.arcs[ai].from)] += x[static_cast<Eigen::Index>(ai)];
    net[static_cast<std::size_t>(graph_.arcs[ai].to)] -= x[static_cast<Eigen::Index>(ai)];
  }
  for (int v = 0; v < graph_.nodes; ++v) {
    const double target = v == graph_.source ? 1.0 : (v == graph_.sink ? -1.0 : 0.0);
    if (std::abs(net[static_cast<std::size_t>(v)] - target) > tol) return false;
  }
  return true;
}

double DagPathRegion::diameter() const {
  return std::sqrt(2.0 * static_cast<double>(max_path_arcs_));
}

std::string DagPathRegion::name() const {
  return "dagpath(nodes=" + std::to_string(graph_.nodes) +
         ",arcs=" + std::to_string(graph_.arcs.size()) + ")";
}

// --------------------------------------------------------- ConvexHullRegion

ConvexHullRegion::ConvexHullRegion(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("ConvexHullRegion: no atoms");
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i].dim() != atoms_[0].dim())
      throw std::invalid_argument("ConvexHullRegion: dimension mismatch");
}

Atom ConvexHullRegion::lmo(const Eigen::VectorXd& c) const {
  int best = 0;
  double best_val = c.dot(atoms_[0].coords());
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    const double v = c.dot(atoms_[i].coords());
    if (v < best_val) {
      best = static_cast<int>(i);
      best_val = v;
    }
  }
  return atoms_[static_cast<std::size_t>(best)];
}

bool ConvexHullRegion::membership(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != ambient_dim()) return false;
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  const double target = tol * scale;
  // Atom hits are decidable without any fitting.
  for (const Atom& a : atoms_)
    if ((a.coords() - x).cwiseAbs().maxCoeff() <= target) return true;
  const auto k = static_cast<Eigen::Index>(atoms_.size());
  Eigen::MatrixXd V(x.size(), k);
  for (Eigen::Index i = 0; i < k; ++i) V.col(i) = atoms_[static_cast<std::size_t>(i)].coords();
  // Projected gradient on the weight simplex for min ||V w - x||^2, in Gram
  // form so each round costs k^2; stops as soon as the residual clears the
  // tolerance or stops improving.
  const Eigen::MatrixXd G = V.transpose() * V;
  const Eigen::VectorXd q = V.transpose() * x;
  const double xx = x.squaredNorm();
  const double lip = 2.0 * G.norm() + 1e-30;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::VectorXd Gw = G * w;
    const double r = std::sqrt(std::max(0.0, w.dot(Gw) - 2.0 * w.dot(q) + xx));
    if (r <= target) return true;
    if (r < best * (1.0 - 1e-12)) {
      best = r;
      stale = 0;
    } else if (++stale > 1000) {
      break;
    }
    w = project_simplex(w - (2.0 / lip) * (Gw - q));
  }
  return (V * w - x).cwiseAbs().maxCoeff() <= target;
}

double ConvexHullRegion::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      best = std::max(best, (atoms_[i].coords() - atoms_[j].coords()).norm());
  return best;
}

std::string ConvexHullRegion::name() const {
  return "hull(" + std::to_string(atoms_.size()) + ")";
}

}  // namespace bcg
