#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcg/diagnostics.hpp"
#include "bcg/instances.hpp"
#include "bcg/solvers.hpp"

namespace bcg {

// Algorithms addressable from the command line.
enum class AlgoKind { Bcg, LazyPairwiseFw, PairwiseFw, AwayFw, VanillaFw, StandaloneSigd };

// Short token used in flags and file names: bcg, lpcg, pcg, acg, cg, sigd.
const char* algo_token(AlgoKind kind);
std::optional<AlgoKind> parse_algo(const std::string& token);

// Family token of an instance spec: lasso, signal, birkhoff, dagpath, simplex.
std::string family_token(const InstanceSpec& spec);
// Default-parameter spec for a family token; nullopt for unknown tokens.
std::optional<InstanceSpec> default_instance(const std::string& family);

struct ExperimentSpec {
  InstanceSpec instance;
  std::uint64_t instance_seed = 0;
  std::vector<AlgoKind> algos;
  SolverConfig config;
  bool post_opt = false;
  std::string out_dir;
};

struct AlgoRun {
  AlgoKind algo;
  RunResult result;
  std::optional<RunResult> post;
};

struct ExperimentResult {
  std::vector<AlgoRun> runs;
  // Invariant violations found by validate_run; non-empty means exit code 2.
  std::vector<std::string> violations;
};

// Runs every requested algorithm on one generated instance and writes, per
// algorithm, <token>.csv and <token>_summary.json (plus <token>_post.csv
// when post-optimization is on), and one plot.gp for all of them. Every
// output is byte-deterministic except the elapsed_s CSV column.
ExperimentResult run_experiment(const ExperimentSpec& spec);

RunResult run_algo(AlgoKind algo, const Instance& inst, const SolverConfig& cfg);

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& os);
nlohmann::json summarize(const AlgoRun& run);

// Audits a finished run against the trace invariants the solver contracts
// promise (step budgets, active-set growth rules, gap-estimate discipline,
// objective monotonicity without drop promotion). Returns nullopt when
// clean, otherwise the first violation. `check_termination` is off for
// post-optimization reruns whose stopping rule is the sparsifier's.
std::optional<std::string> validate_run(AlgoKind algo, const SolverConfig& cfg,
                                        const RunResult& run, bool check_termination = true);

struct VerifyOutcome {
  std::vector<BoundReport> reports;
  bool ok = false;
};

// Bound-check battery over small instances of every family: gradient
// checks, restricted-smoothness caps, the two-sided curvature comparison,
// and gap-dominates-primal tests. Reports stream to `os` as JSON lines.
VerifyOutcome run_verify(std::uint64_t seed, int trials, std::ostream& os);

struct SparsityRow {
  std::string family;
  std::uint64_t seed = 0;
  int size_plain = 0;
  int size_promoted = 0;
  int size_post = 0;
  double f_plain = 0.0;
  double f_promoted = 0.0;
  double f_post = 0.0;
};

// Final support sizes of plain BCG, BCG with promoted drops, and promoted
// BCG followed by post-optimization, one row per seed.
std::vector<SparsityRow> sparsity_table(const InstanceSpec& spec,
                                        const std::vector<std::uint64_t>& seeds,
                                        const SolverConfig& config, double promote_eps0);
void print_sparsity_table(const std::vector<SparsityRow>& rows, std::ostream& os);

}  // namespace bcg
