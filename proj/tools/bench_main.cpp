#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bcg/bench.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& csv) {
  std::vector<std::string> parts;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blended conditional gradients benchmark driver"};
  app.require_subcommand(1);
  const std::vector<std::string> families = {"lasso", "signal", "birkhoff", "dagpath", "simplex"};

  // run
  auto* run_cmd = app.add_subcommand("run", "Run algorithms on a generated instance");
  std::string family;
  std::string algos_csv = "bcg";
  std::string out_dir;
  std::uint64_t seed = 0;
  double K = 1.0;
  double eps = 1e-8;
  long max_iter = 100000;
  double time_limit = 0.0;
  double promote_eps0 = 0.0;
  bool exact_gap = false;
  bool pairwise_blend = false;
  bool post_opt = false;
  bool fixed_steps = false;
  run_cmd->add_option("--family", family, "Instance family")
      ->required()
      ->check(CLI::IsMember(families));
  run_cmd->add_option("--algo", algos_csv, "Comma-separated list: bcg,lpcg,pcg,acg,cg,sigd");
  run_cmd->add_option("--seed", seed, "Instance seed");
  run_cmd->add_option("--K", K, "Weak-separation accuracy multiplier");
  run_cmd->add_option("--eps", eps, "Primal gap target");
  run_cmd->add_option("--max-iter", max_iter, "Iteration budget");
  run_cmd->add_option("--time-limit", time_limit, "Wall-clock budget in seconds, 0 disables");
  run_cmd->add_flag("--exact-gap", exact_gap, "Recompute the true dual gap every iteration");
  run_cmd->add_flag("--pairwise-blend", pairwise_blend, "Blended pairwise steps");
  auto* promote_opt = run_cmd->add_option("--promote-drops", promote_eps0,
                                          "Enable drop promotion with this threshold");
  run_cmd->add_flag("--post-opt", post_opt, "Post-optimize over the final active set");
  run_cmd->add_flag("--fixed-steps", fixed_steps, "Agnostic step sizes instead of line search");
  run_cmd->add_option("--out", out_dir, "Output directory")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the bound-check battery");
  std::uint64_t verify_seed = 0;
  int verify_trials = 8;
  verify_cmd->add_option("--seed", verify_seed, "Sampling seed");
  verify_cmd->add_option("--trials", verify_trials, "Trials per estimator")
      ->check(CLI::PositiveNumber);

  // sparsity-table
  auto* table_cmd = app.add_subcommand("sparsity-table",
                                       "Final support sizes with and without sparsification");
  std::string table_family = "lasso";
  int table_seeds = 5;
  std::uint64_t table_seed0 = 0;
  double table_eps = 1e-8;
  long table_max_iter = 100000;
  double table_promote = 1e-4;
  table_cmd->add_option("--family", table_family, "Instance family")
      ->check(CLI::IsMember(families));
  table_cmd->add_option("--seeds", table_seeds, "Number of seeds, starting at --seed")
      ->check(CLI::PositiveNumber);
  table_cmd->add_option("--seed", table_seed0, "First instance seed");
  table_cmd->add_option("--eps", table_eps, "Primal gap target");
  table_cmd->add_option("--max-iter", table_max_iter, "Iteration budget");
  table_cmd->add_option("--promote-drops", table_promote, "Drop promotion threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      bcg::ExperimentSpec spec;
      spec.instance = *bcg::default_instance(family);
      spec.instance_seed = seed;
      for (const std::string& token : split_commas(algos_csv)) {
        const auto algo = bcg::parse_algo(token);
        if (!algo) {
          std::cerr << "error: unknown algorithm '" << token << "'\n";
          return 1;
        }
        spec.algos.push_back(*algo);
      }
      spec.config.K = K;
      spec.config.eps = eps;
      spec.config.max_iter = max_iter;
      spec.config.time_limit = time_limit;
      spec.config.exact_gap = exact_gap;
      spec.config.pairwise_blend = pairwise_blend;
      spec.config.fixed_steps = fixed_steps;
      spec.config.seed = seed;
      if (promote_opt->count() > 0) spec.config.drop_promotion_eps0 = promote_eps0;
      spec.post_opt = post_opt;
      spec.out_dir = out_dir;

      const bcg::ExperimentResult result = bcg::run_experiment(spec);
      for (const bcg::AlgoRun& run : result.runs) {
        const bcg::RunResult& r = run.result;
        std::cout << bcg::algo_token(run.algo) << ": " << bcg::termination_name(r.termination)
                  << " after " << r.trace.size() << " iterations, f " << r.f_final
                  << ", active set " << r.final_set.size() << ", lmo calls " << r.lmo_calls
                  << ", cache hits " << r.cache_hits << '\n';
        if (run.post) {
          std::cout << bcg::algo_token(run.algo) << " post: f " << run.post->f_final
                    << ", active set " << run.post->final_set.size() << '\n';
        }
      }
      if (!result.violations.empty()) {
        for (const std::string& v : result.violations) {
          std::cerr << "invariant violation: " << v << '\n';
        }
        return 2;
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      const bcg::VerifyOutcome outcome = bcg::run_verify(verify_seed, verify_trials, std::cout);
      std::cout << (outcome.ok ? "all bounds satisfied" : "BOUND VIOLATIONS FOUND") << " ("
                << outcome.reports.size() << " checks)\n";
      return outcome.ok ? 0 : 2;
    }

    if (table_cmd->parsed()) {
      const auto spec = bcg::default_instance(table_family);
      if (!spec) {
        std::cerr << "error: unknown family '" << table_family << "'\n";
        return 1;
      }
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < table_seeds; ++i) {
        seeds.push_back(table_seed0 + static_cast<std::uint64_t>(i));
      }
      bcg::SolverConfig config;
      config.eps = table_eps;
      config.max_iter = table_max_iter;
      const auto rows = bcg::sparsity_table(*spec, seeds, config, table_promote);
      bcg::print_sparsity_table(rows, std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
