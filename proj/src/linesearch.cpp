#include "bcg/linesearch.hpp"

#include <cmath>
#include <stdexcept>

namespace bcg {
namespace {

void take(SegmentSearchResult& best, double gamma, double value) {
  if (value < best.f_value) {
    best.gamma = gamma;
    best.f_value = value;
  }
}

}  // namespace

SegmentSearchResult ternary_search(const std::function<double(double)>& phi, double a, double b,
                                   const LineSearchConfig& cfg) {
  if (!(a <= b)) throw std::invalid_argument("ternary_search: need a <= b");
  SegmentSearchResult best{a, phi(a), 1};
  if (a == b) return best;
  ++best.evals;
  take(best, b, phi(b));
  for (int it = 0; it < cfg.ternary_budget; ++it) {
    if (b - a <= 1e-12 * (1.0 + std::abs(a) + std::abs(b))) break;
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    const double f1 = phi(m1);
    const double f2 = phi(m2);
    best.evals += 2;
    take(best, m1, f1);
    take(best, m2, f2);
    if (f1 <= f2)
      b = m2;
    else
      a = m1;
  }
  return best;
}

SegmentSearchResult backtracking_search(const std::function<double(double)>& phi,
                                        double gamma_max, const LineSearchConfig& cfg) {
  if (!(gamma_max > 0)) throw std::invalid_argument("backtracking_search: need gamma_max > 0");
  const double f0 = phi(0.0);
  double gamma = gamma_max;
  for (int j = 0; j < cfg.backtrack_budget; ++j) {
    const double f = phi(gamma);
    if (f < f0) return {gamma, f, j + 2};
    gamma *= cfg.backtrack_shrink;
  }
  throw std::runtime_error("backtracking_search: no decrease within budget");
}

SegmentSearchResult refined_descent_search(const std::function<double(double)>& phi,
                                           double gamma_max, const LineSearchConfig& cfg) {
  if (!(gamma_max > 0))
    throw std::invalid_argument("refined_descent_search: need gamma_max > 0");
  const double f0 = phi(0.0);
  SegmentSearchResult best{0.0, f0, 1};

  // Scan gamma_max * shrink^j until the values turn back up past a point
  // that already improves on phi(0); that brackets the minimizer of a
  // unimodal phi between the neighbors of the best grid point.
  double lo = 0.0, hi = 0.0;
  double g = gamma_max;
  double prev_g = gamma_max, prev_f = 0.0;
  bool have_prev = false, bracketed = false;
  for (int j = 0; j < cfg.backtrack_budget; ++j) {
    const double f = phi(g);
    ++best.evals;
    take(best, g, f);
    if (have_prev && f >= prev_f && prev_f < f0) {
      lo = g;
      hi = std::min(prev_g / cfg.backtrack_shrink, gamma_max);
      bracketed = true;
      break;
    }
    have_prev = true;
    prev_g = g;
    prev_f = f;
    g *= cfg.backtrack_shrink;
  }
  if (!bracketed) {
    if (best.gamma == 0.0) return best;  // nothing beat phi(0)
    lo = best.gamma * cfg.backtrack_shrink;
    hi = std::min(best.gamma / cfg.backtrack_shrink, gamma_max);
  }

  const SegmentSearchResult refined = ternary_search(phi, lo, hi, cfg);
  best.evals += refined.evals;
  take(best, refined.gamma, refined.f_value);
  return best;
}

}  // namespace bcg
