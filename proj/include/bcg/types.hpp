#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bcg {

enum class StepKind { FrankWolfe, GapStep, Descent, Drop };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::FrankWolfe:
      return "FrankWolfe";
    case StepKind::GapStep:
      return "GapStep";
    case StepKind::Descent:
      return "Descent";
    case StepKind::Drop:
      return "Drop";
  }
  return "?";
}

enum class Termination { PhiBelowEps, MaxIter, TimeLimit };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::PhiBelowEps:
      return "PhiBelowEps";
    case Termination::MaxIter:
      return "MaxIter";
    case Termination::TimeLimit:
      return "TimeLimit";
  }
  return "?";
}

// One row of a solver trace. `phi` is the driving gap estimate after the
// iteration's update; solvers that track no estimate store the exact dual
// gap they computed for step selection instead. `dual_gap` is only filled
// when the run was asked to recompute the true gap every iteration.
struct IterationRecord {
  long iter = 0;
  double elapsed = 0.0;  // seconds since run start, monotonic clock
  double f_value = 0.0;
  double phi = 0.0;
  std::optional<double> dual_gap;
  StepKind step = StepKind::FrankWolfe;
  int active_size = 0;
  std::uint64_t lmo_calls = 0;
  std::uint64_t cache_hits = 0;
};

struct LineSearchConfig {
  int ternary_budget = 64;
  double backtrack_shrink = 0.7;
  int backtrack_budget = 100;
};

struct SolverConfig {
  double K = 1.0;    // weak-separation accuracy multiplier, >= 1
  double eps = 1e-8; // additive primal target
  long max_iter = 100000;
  double time_limit = 0.0;  // seconds; 0 disables the check
  LineSearchConfig line_search;
  // Sparsification: when set, drop steps may accept a bounded f increase
  // (threshold min(max(last progress, 0)/2, eps0)).
  std::optional<double> drop_promotion_eps0;
  bool pairwise_blend = false;  // blended pairwise direction instead of FW
  bool fixed_steps = false;     // agnostic step sizes instead of line search
  bool exact_gap = false;       // recompute the true dual gap every iteration
  std::uint64_t seed = 0;
  std::optional<std::size_t> cache_cap;  // vertex cache size cap; off = unbounded

  void validate() const {
    if (!(K >= 1.0)) throw std::invalid_argument("SolverConfig: K must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("SolverConfig: eps must be > 0");
    if (max_iter <= 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
    if (line_search.ternary_budget <= 0 || line_search.backtrack_budget <= 0)
      throw std::invalid_argument("SolverConfig: line search budgets must be positive");
    if (!(line_search.backtrack_shrink > 0.0 && line_search.backtrack_shrink < 1.0))
      throw std::invalid_argument("SolverConfig: backtrack shrink must be in (0,1)");
    if (drop_promotion_eps0 && !(*drop_promotion_eps0 >= 0.0))
      throw std::invalid_argument("SolverConfig: promotion threshold must be >= 0");
    if (time_limit < 0.0)
      throw std::invalid_argument("SolverConfig: time limit must be >= 0");
  }
};

}  // namespace bcg
