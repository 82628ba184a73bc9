#pragma once

#include <functional>

#include "bcg/types.hpp"

namespace bcg {

struct SegmentSearchResult {
  double gamma = 0.0;
  double f_value = 0.0;
  int evals = 0;
};

// Ternary minimization of phi over [a, b]. Runs up to cfg.ternary_budget
// interval reductions (factor 2/3 each), stopping early once the interval
// is below 1e-12 relative width. Every evaluated point, endpoints included,
// is a candidate, so the result never exceeds min(phi(a), phi(b)).
SegmentSearchResult ternary_search(const std::function<double(double)>& phi, double a, double b,
                                   const LineSearchConfig& cfg);

// Geometric backtracking from gamma_max: returns the first
// gamma_max * shrink^j with phi(gamma) < phi(0). Throws std::runtime_error
// when the budget is exhausted without simple decrease.
SegmentSearchResult backtracking_search(const std::function<double(double)>& phi,
                                        double gamma_max, const LineSearchConfig& cfg);

// Descent-quality search on [0, gamma_max]: geometric scan to bracket the
// minimizer, then ternary refinement inside the bracket. Within rounding
// of an exact line search for convex phi, and never worse than phi(0);
// returns gamma 0 when no evaluated point improves on phi(0).
SegmentSearchResult refined_descent_search(const std::function<double(double)>& phi,
                                           double gamma_max, const LineSearchConfig& cfg);

}  // namespace bcg
