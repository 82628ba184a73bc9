#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcg/objective.hpp"
#include "bcg/region.hpp"
#include "bcg/rng.hpp"

namespace bcg {

// One checked inequality lhs <= rhs (+tolerance), ready for JSON-line
// output. The estimates feeding these are sampled lower bounds, not
// certified constants.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double slack = 0.0;  // rhs - lhs
};

BoundReport make_report(std::string name, double lhs, double rhs, double tol);
std::string json_line(const BoundReport& r);

// Exact dual gap <grad f(x), x - v> with v from one oracle call; clamped
// at zero. Upper-bounds the primal gap at any feasible x.
double dual_gap(const Objective& obj, const Region& region, const Eigen::VectorXd& x);

// Vertex drawn by minimizing a random Gaussian cost; any vertex with
// positive facial measure can appear.
Atom sample_vertex(const Region& region, Rng& rng);

// Random point of the atoms' convex hull (Dirichlet(1) weights).
Eigen::VectorXd sample_point(const std::vector<Atom>& atoms, Rng& rng);

// Sampled curvature: max over trials of
// 2 [f(x + g(y-x)) - f(x) - g <grad f(x), y-x>] / g^2 with x, y drawn from
// the hull of a per-trial vertex set and g in [0.1, 1]. A lower bound that
// grows with the trial count. Trial i's vertex set depends only on
// (region, seed, i), so equal seeds and counts give the simplicial
// estimator the same sets and the two-sided curvature comparison is
// exact rather than statistical.
double curvature_estimate(const Objective& obj, const Region& region, int samples,
                          std::uint64_t seed);

// Sampled simplicial curvature: max restricted smoothness over per-trial
// random vertex sets (|S| <= 2 * ambient dimension). When `reports` is
// given, each trial also records the smoothness cap L * D^2 * |S| / 4
// at 1e-9 relative tolerance.
double simplicial_curvature_estimate(const QuadraticObjective& obj, const Region& region,
                                     int trials, std::uint64_t seed,
                                     std::vector<BoundReport>* reports = nullptr);

// Geometric strong convexity floor 4 alpha / k of an alpha-strongly-convex
// function over the k-simplex.
double simplex_strong_convexity_floor(double alpha, int k);

// Central-difference gradient validation; lhs is the worst relative
// component error over all points, rhs the 1e-5 pass threshold.
BoundReport gradient_check(const Objective& obj, const std::vector<Eigen::VectorXd>& points);

}  // namespace bcg
