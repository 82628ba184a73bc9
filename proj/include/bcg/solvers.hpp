#pragma once

#include <optional>
#include <vector>

#include "bcg/active_set.hpp"
#include "bcg/objective.hpp"
#include "bcg/region.hpp"
#include "bcg/types.hpp"

namespace bcg {

struct RunResult {
  explicit RunResult(ActiveSet set) : final_set(std::move(set)) {}

  ActiveSet final_set;
  std::vector<IterationRecord> trace;
  Termination termination = Termination::MaxIter;
  double phi_final = 0.0;
  double f_final = 0.0;
  double f_initial = 0.0;
  double phi_initial = 0.0;
  // Exact dual gap at the final iterate, recomputed once at exit with a
  // diagnostic oracle call (not counted in lmo_calls).
  double dual_gap_final = 0.0;
  std::uint64_t lmo_calls = 0;
  std::uint64_t cache_hits = 0;
};

// Blended conditional gradients from a single vertex. Per iteration: take a
// simplex-descent step over the active set whenever the local gap
// max_{u,v in S} <grad, u - v> reaches the gap estimate phi; otherwise ask
// the weak-separation oracle, stepping toward an improving vertex on
// success and halving (or tightening to the certified gap) phi on failure.
// Terminates once phi <= eps/2, which certifies f - f* <= eps.
RunResult solve_bcg(const Objective& obj, const Region& region, const Atom& start,
                    const SolverConfig& cfg);

// Same solver from a warm active set. When stop_dual_gap is set, the exact
// dual gap over `region` is recomputed each iteration (diagnostic call, not
// counted) and the run stops as soon as it reaches the target.
RunResult solve_bcg_from(const Objective& obj, const Region& region, ActiveSet set,
                         const SolverConfig& cfg,
                         std::optional<double> stop_dual_gap = std::nullopt);

// Stand-alone simplex gradient descent on the k-simplex, started at the
// first coordinate vertex. Maintains the iterate as a dense simplex vector;
// the active set is its support. Terminates on exact dual gap <= eps. With
// cfg.fixed_steps, descent blends x with the boundary point at weight
// 1/smoothness and Frank-Wolfe steps use gamma = 2/(t+2).
RunResult solve_standalone_sigd(const Objective& obj, int k, const SolverConfig& cfg);

enum class BaselineVariant { VanillaFW, AwayFW, PairwiseFW, LazyPairwiseFW };

const char* baseline_name(BaselineVariant v);

// Reference conditional-gradient solvers sharing the trace format. The
// first three recompute the exact dual gap every iteration (it doubles as
// the phi column); the lazy variant runs weak separation with the same
// phi-halving discipline as solve_bcg.
RunResult solve_baseline(BaselineVariant variant, const Objective& obj, const Region& region,
                         const Atom& start, const SolverConfig& cfg);

// Sparsification pass: re-runs the solver over the convex hull of
// run.final_set (oracle = exhaustive scan) from that set's first atom,
// stopping once the hull dual gap reaches the run's recorded final gap.
// The result's f exceeds run.f_final by at most that gap, and its support
// is a subset of the input support. Singletons are returned unchanged.
RunResult post_optimize(const Objective& obj, const RunResult& run, const SolverConfig& cfg);

}  // namespace bcg
