#pragma once

#include "bcg/active_set.hpp"
#include "bcg/linesearch.hpp"
#include "bcg/objective.hpp"

namespace bcg {

enum class DropMode { Vanilla, PromoteDrops };

struct SigdConfig {
  DropMode mode = DropMode::Vanilla;
  // PromoteDrops accepts a drop when f rises by at most
  // min(max(last_progress, 0) / 2, promote_eps0).
  double promote_eps0 = 0.0;
  double last_progress = 0.0;
  LineSearchConfig line_search;
};

struct SigdResult {
  StepKind step = StepKind::Descent;  // Descent or Drop
  double progress = 0.0;              // f(x) - f(x'), >= 0 except promoted drops
  int evals = 0;                      // objective evaluations spent
  // True when the descent search could not resolve any decrease along the
  // projected-gradient segment; the set is left untouched and the caller
  // should fall back to the separation oracle.
  bool stalled = false;
};

// Inner products of the gradient at the current iterate with each atom.
Eigen::VectorXd active_gradient(const Objective& f, const ActiveSet& set);

// Orthogonal projection of c onto {z : sum z = 0}: c minus its mean.
Eigen::VectorXd project_direction(const Eigen::VectorXd& c);

// Largest eta with lambda - eta * d >= 0: min over d_i > 0 of lambda_i/d_i.
// Throws when no d_i is positive (the caller branches on d ~ 0 first).
double ratio_test(const Eigen::VectorXd& lambda, const Eigen::VectorXd& d);

// One simplex-descent step over the active set's weights: move the weights
// against the projected gradient to the boundary of the weight simplex;
// keep the boundary point when it does not increase f beyond the drop
// threshold (a Drop, shrinking the support), otherwise line search the
// segment (a Descent, support unchanged). Mutates the set in place. When
// the available decrease is below what the floating point resolution of f
// can express, the step reports stalled instead of moving.
SigdResult sigd_step(const Objective& f, ActiveSet& set, const SigdConfig& cfg);

}  // namespace bcg
