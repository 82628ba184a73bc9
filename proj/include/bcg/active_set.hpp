#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bcg/atom.hpp"

namespace bcg {

// Weights at or below this threshold are removed by prune() and by the
// simplex-descent drop rule.
inline constexpr double kDropTol = 1e-12;
// |sum(weights) - 1| stays within this bound.
inline constexpr double kWeightSumTol = 1e-12;
// The stored iterate matches sum(weights[i] * atom[i]) to this relative
// infinity-norm tolerance.
inline constexpr double kIterateRelTol = 1e-9;

struct LocalExtremes {
  int away_index = -1;    // argmax <grad, v> over the set
  int toward_index = -1;  // argmin <grad, v> over the set
  double away_value = 0.0;
  double toward_value = 0.0;
};

// Convex combination of atoms together with its iterate. Weights are
// nonnegative and sum to one; the iterate is kept consistent with the
// weights up to kIterateRelTol. Atoms are deduplicated by key.
class ActiveSet {
 public:
  explicit ActiveSet(const Atom& start);
  ActiveSet(std::vector<Atom> atoms, Eigen::VectorXd weights);

  int size() const { return static_cast<int>(atoms_.size()); }
  Eigen::Index dim() const { return iterate_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& iterate() const { return iterate_; }

  // Index of the atom with this key, or -1.
  int find(const AtomKey& key) const;

  // sum(weights[i] * atoms[i]), recomputed from scratch.
  Eigen::VectorXd recompute_iterate() const;

  // Remove every atom with weight <= tol and renormalize the rest. The
  // iterate is left untouched (the removed mass shifts it by at most
  // size * tol * max ||v||_inf, inside the consistency tolerance). Throws
  // if every weight is at or below tol.
  void prune(double tol = kDropTol);

  // Extreme inner products of a gradient over the set; ties resolved
  // toward the lowest index.
  LocalExtremes local_extremes(const Eigen::VectorXd& grad) const;

  // x <- (1 - gamma) x + gamma v, merging v into the set.
  void step_toward(const Atom& v, double gamma);

  // x <- x + gamma (v - atoms[away]); mass gamma moves from the away atom
  // to v. Caller guarantees gamma <= weights[away].
  void pairwise_shift(int away_index, const Atom& v, double gamma);

  // x <- x + gamma (x - atoms[away]); all weights scale by (1 + gamma) and
  // the away atom loses gamma. Caller guarantees feasibility.
  void away_shift(int away_index, double gamma);

  // Collapse to a single vertex.
  void reset_to(const Atom& v);

  // Replace contents wholesale (weights must already be normalized; the
  // iterate is trusted). Used by drop steps that rebuild the support.
  void replace(std::vector<Atom> atoms, Eigen::VectorXd weights,
               Eigen::VectorXd iterate);

  // Enforce class invariants; throws std::runtime_error on violation.
  void check_invariants() const;

 private:
  std::vector<Atom> atoms_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd iterate_;
};

// Contract-named free functions over the type above.
Eigen::VectorXd iterate_of(const ActiveSet& set);
ActiveSet prune(const ActiveSet& set, double tol = kDropTol);
LocalExtremes local_extremes(const Eigen::VectorXd& grad, const ActiveSet& set);

}  // namespace bcg
