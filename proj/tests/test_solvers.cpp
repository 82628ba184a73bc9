#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "bcg/bench.hpp"
#include "bcg/instances.hpp"
#include "bcg/solvers.hpp"

namespace {

// Strongly convex quadratic over a small simplex with the minimizer outside.
struct SmallProblem {
  bcg::Instance inst;
  bcg::oracles::SimplexQpResult qp;
};

SmallProblem small_simplex_problem(std::uint64_t seed) {
  SmallProblem p{bcg::generate(bcg::SimplexQuadraticSpec{8, 0.01}, seed), {}};
  p.qp = bcg::oracles::simplex_qp_enumerate(*p.inst.objective);
  return p;
}

}  // namespace

TEST_CASE("the blended solver reaches the exact simplex optimum") {
  const SmallProblem p = small_simplex_problem(1);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-10;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);

  CHECK(run.termination == bcg::Termination::PhiBelowEps);
  CHECK(run.phi_final <= cfg.eps / 2.0);
  CHECK(run.f_final - p.qp.f_value <= cfg.eps);
  CHECK(run.f_final >= p.qp.f_value - 1e-12);
  CHECK(run.dual_gap_final >= 0.0);
  CHECK(bcg::validate_run(bcg::AlgoKind::Bcg, cfg, run) == std::nullopt);
  run.final_set.check_invariants();
}

TEST_CASE("gap steps leave the iterate untouched") {
  const SmallProblem p = small_simplex_problem(2);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-9;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
  bool saw_gap_step = false;
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    if (run.trace[i].step == bcg::StepKind::GapStep) {
      saw_gap_step = true;
      CHECK(run.trace[i].f_value == run.trace[i - 1].f_value);
      CHECK(run.trace[i].active_size == run.trace[i - 1].active_size);
      CHECK(run.trace[i].phi < run.trace[i - 1].phi);
    }
  }
  CHECK(saw_gap_step);
}

TEST_CASE("the pairwise blend and fixed-step variants still converge") {
  const SmallProblem p = small_simplex_problem(3);
  for (const bool blend : {false, true}) {
    bcg::SolverConfig cfg;
    cfg.eps = 1e-8;
    cfg.pairwise_blend = blend;
    const bcg::RunResult run =
        bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
    CHECK(run.termination == bcg::Termination::PhiBelowEps);
    CHECK(run.f_final - p.qp.f_value <= cfg.eps);
    CHECK(bcg::validate_run(bcg::AlgoKind::Bcg, cfg, run) == std::nullopt);
  }
}

TEST_CASE("a start atom outside the region is rejected") {
  const SmallProblem p = small_simplex_problem(4);
  const bcg::Atom bogus(bcg::AtomKey{bcg::AtomFamily::Generic, {0}},
                        Eigen::VectorXd::Constant(8, 0.25));
  bcg::SolverConfig cfg;
  CHECK_THROWS(bcg::solve_bcg(*p.inst.objective, *p.inst.region, bogus, cfg));
}

TEST_CASE("iteration and time budgets terminate runs early") {
  const SmallProblem p = small_simplex_problem(5);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-14;
  cfg.max_iter = 3;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
  CHECK(run.termination == bcg::Termination::MaxIter);
  CHECK(run.trace.size() == 3);

  bcg::SolverConfig timed;
  timed.eps = 1e-14;
  timed.time_limit = 1e-9;
  const bcg::RunResult fast =
      bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, timed);
  CHECK(fast.termination == bcg::Termination::TimeLimit);
}

TEST_CASE("exact gap mode fills the gap column and certifies gap steps") {
  const SmallProblem p = small_simplex_problem(6);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-8;
  cfg.exact_gap = true;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
  for (const auto& rec : run.trace) {
    REQUIRE(rec.dual_gap.has_value());
    CHECK(*rec.dual_gap >= 0.0);
    if (rec.step == bcg::StepKind::GapStep) {
      CHECK(*rec.dual_gap <= 2.0 * rec.phi * (1.0 + 1e-12) + 1e-18);
    }
  }
}

TEST_CASE("active-set baselines match the exact optimum on a strongly convex simplex") {
  const SmallProblem p = small_simplex_problem(7);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-7;
  cfg.max_iter = 50000;
  for (const bcg::BaselineVariant variant :
       {bcg::BaselineVariant::AwayFW, bcg::BaselineVariant::PairwiseFW,
        bcg::BaselineVariant::LazyPairwiseFW}) {
    const bcg::RunResult run =
        bcg::solve_baseline(variant, *p.inst.objective, *p.inst.region, p.inst.start, cfg);
    CAPTURE(bcg::baseline_name(variant));
    CHECK(run.termination == bcg::Termination::PhiBelowEps);
    CHECK(run.f_final - p.qp.f_value <= 1e-6);
    run.final_set.check_invariants();
  }
}

TEST_CASE("vanilla conditional gradients makes sublinear progress") {
  const SmallProblem p = small_simplex_problem(7);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-12;
  cfg.max_iter = 20000;
  const bcg::RunResult run = bcg::solve_baseline(bcg::BaselineVariant::VanillaFW,
                                                 *p.inst.objective, *p.inst.region, p.inst.start,
                                                 cfg);
  CHECK(run.f_final - p.qp.f_value <= 0.05);
  CHECK(run.f_final >= p.qp.f_value - 1e-12);
  run.final_set.check_invariants();
}

TEST_CASE("non-lazified baselines record the exact gap as their estimate") {
  const SmallProblem p = small_simplex_problem(8);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-6;
  const bcg::RunResult run = bcg::solve_baseline(bcg::BaselineVariant::AwayFW, *p.inst.objective,
                                                 *p.inst.region, p.inst.start, cfg);
  CHECK(bcg::validate_run(bcg::AlgoKind::AwayFw, cfg, run) == std::nullopt);
  // The recorded gap at each row is the true gap at that row's iterate, so
  // termination happens exactly when it crosses eps.
  CHECK(run.phi_final <= cfg.eps);
  CHECK(run.dual_gap_final <= cfg.eps);
  for (const auto& rec : run.trace) CHECK(rec.step != bcg::StepKind::GapStep);
}

TEST_CASE("the lazified pairwise baseline keeps the gap-estimate discipline") {
  const SmallProblem p = small_simplex_problem(9);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-8;
  const bcg::RunResult run = bcg::solve_baseline(
      bcg::BaselineVariant::LazyPairwiseFW, *p.inst.objective, *p.inst.region, p.inst.start, cfg);
  CHECK(run.termination == bcg::Termination::PhiBelowEps);
  CHECK(run.phi_final <= cfg.eps / 2.0);
  CHECK(run.f_final - p.qp.f_value <= cfg.eps);
  CHECK(bcg::validate_run(bcg::AlgoKind::LazyPairwiseFw, cfg, run) == std::nullopt);
}

TEST_CASE("blended runs match a projected-gradient reference on simplices and cubes") {
  bcg::Rng rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 5;
    Eigen::MatrixXd A(n + 2, n);
    for (int i = 0; i < n + 2; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    }
    Eigen::VectorXd b(n + 2);
    for (int i = 0; i < n + 2; ++i) b[i] = rng.normal();
    const bcg::QuadraticObjective f(A, b);

    const bcg::Simplex simplex(n);
    bcg::SolverConfig cfg;
    cfg.eps = 1e-9;
    const bcg::RunResult run = bcg::solve_bcg(f, simplex, simplex.vertex(0), cfg);
    const auto pgd = bcg::oracles::projected_gradient(
        f, [](const Eigen::VectorXd& v) { return bcg::oracles::project_simplex(v); },
        Eigen::VectorXd::Constant(n, 1.0 / n), 1.0 / f.L(), 2000000, 1e-14);
    CHECK(std::abs(run.f_final - pgd.f_value) <= 1e-6);

    const bcg::Cube cube(2);
    Eigen::MatrixXd C(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) C(i, j) = rng.normal();
    }
    Eigen::VectorXd d(3);
    for (int i = 0; i < 3; ++i) d[i] = rng.normal();
    const bcg::QuadraticObjective g(C, d);
    const bcg::RunResult cube_run = bcg::solve_bcg(g, cube, cube.lmo(Eigen::VectorXd::Zero(2)), cfg);
    const auto cube_pgd = bcg::oracles::projected_gradient(
        g, [](const Eigen::VectorXd& v) { return bcg::oracles::project_box(v, 0.0, 1.0); },
        Eigen::VectorXd::Constant(2, 0.5), 1.0 / g.L(), 2000000, 1e-14);
    CHECK(std::abs(cube_run.f_final - cube_pgd.f_value) <= 1e-6);
  }
}

TEST_CASE("the standalone simplex solver reaches the exact optimum") {
  const SmallProblem p = small_simplex_problem(10);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-9;
  const bcg::RunResult run = bcg::solve_standalone_sigd(*p.inst.objective, 8, cfg);
  CHECK(run.termination == bcg::Termination::PhiBelowEps);
  CHECK(run.dual_gap_final <= cfg.eps);
  CHECK(run.f_final - p.qp.f_value <= cfg.eps);
  // One oracle-equivalent gradient scan per iteration.
  for (const auto& rec : run.trace) CHECK(rec.lmo_calls == static_cast<std::uint64_t>(rec.iter));
  CHECK(bcg::validate_run(bcg::AlgoKind::StandaloneSigd, cfg, run) == std::nullopt);
}

TEST_CASE("the standalone solver accepts fixed step sizes") {
  const SmallProblem p = small_simplex_problem(11);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-6;
  cfg.fixed_steps = true;
  cfg.max_iter = 200000;
  const bcg::RunResult run = bcg::solve_standalone_sigd(*p.inst.objective, 8, cfg);
  // The harmonic step schedule closes the gap at a 1/t rate with a large
  // constant, so only a coarse tolerance is meaningful here.
  CHECK(run.f_final - p.qp.f_value <= 1e-2);
}

TEST_CASE("post optimization sparsifies without losing more than the gap") {
  const SmallProblem p = small_simplex_problem(12);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-6;
  cfg.drop_promotion_eps0 = 1e-7;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
  const bcg::RunResult post = bcg::post_optimize(*p.inst.objective, run, cfg);
  CHECK(post.final_set.size() <= run.final_set.size());
  CHECK(post.f_final <= run.f_final + run.dual_gap_final + 1e-9 * (1.0 + std::abs(run.f_final)));
  post.final_set.check_invariants();

  // A single-atom support is already as sparse as it gets.
  bcg::RunResult single(bcg::ActiveSet(p.inst.start));
  single.f_final = p.inst.objective->value(p.inst.start.coords());
  single.dual_gap_final = 1.0;
  const bcg::RunResult same = bcg::post_optimize(*p.inst.objective, single, cfg);
  CHECK(same.final_set.size() == 1);
}

TEST_CASE("drop promotion keeps supports at least as small") {
  const SmallProblem p = small_simplex_problem(13);
  bcg::SolverConfig plain;
  plain.eps = 1e-8;
  const bcg::RunResult a = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, plain);
  bcg::SolverConfig promo = plain;
  promo.drop_promotion_eps0 = 1e-9;
  const bcg::RunResult b = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, promo);
  // Promotion may only help sparsity and costs at most eps0 per drop in f.
  CHECK(b.f_final - p.qp.f_value <= 1e-6);
  CHECK(bcg::validate_run(bcg::AlgoKind::Bcg, promo, b) == std::nullopt);
}

TEST_CASE("vertex caches can be capped without breaking runs") {
  const SmallProblem p = small_simplex_problem(14);
  bcg::SolverConfig cfg;
  cfg.eps = 1e-8;
  cfg.cache_cap = 2;
  const bcg::RunResult run = bcg::solve_bcg(*p.inst.objective, *p.inst.region, p.inst.start, cfg);
  CHECK(run.termination == bcg::Termination::PhiBelowEps);
  CHECK(run.f_final - p.qp.f_value <= cfg.eps);
}
