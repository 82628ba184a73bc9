#include "bcg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bcg {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

void finish_out(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

constexpr AlgoKind kAllAlgos[] = {AlgoKind::Bcg,      AlgoKind::LazyPairwiseFw,
                                  AlgoKind::PairwiseFw, AlgoKind::AwayFw,
                                  AlgoKind::VanillaFw,  AlgoKind::StandaloneSigd};

}  // namespace

const char* algo_token(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::Bcg:
      return "bcg";
    case AlgoKind::LazyPairwiseFw:
      return "lpcg";
    case AlgoKind::PairwiseFw:
      return "pcg";
    case AlgoKind::AwayFw:
      return "acg";
    case AlgoKind::VanillaFw:
      return "cg";
    case AlgoKind::StandaloneSigd:
      return "sigd";
  }
  return "?";
}

std::optional<AlgoKind> parse_algo(const std::string& token) {
  for (AlgoKind kind : kAllAlgos) {
    if (token == algo_token(kind)) return kind;
  }
  return std::nullopt;
}

std::string family_token(const InstanceSpec& spec) {
  if (std::holds_alternative<LassoSpec>(spec)) return "lasso";
  if (std::holds_alternative<SignalRecoverySpec>(spec)) return "signal";
  if (const auto* s = std::get_if<StructuredRegressionSpec>(&spec)) {
    return s->kind == StructuredRegressionSpec::Kind::Birkhoff ? "birkhoff" : "dagpath";
  }
  return "simplex";
}

std::optional<InstanceSpec> default_instance(const std::string& family) {
  if (family == "lasso") return InstanceSpec(LassoSpec{});
  if (family == "signal") return InstanceSpec(SignalRecoverySpec{});
  if (family == "birkhoff") {
    StructuredRegressionSpec s;
    s.kind = StructuredRegressionSpec::Kind::Birkhoff;
    return InstanceSpec(s);
  }
  if (family == "dagpath") {
    StructuredRegressionSpec s;
    s.kind = StructuredRegressionSpec::Kind::DagPath;
    return InstanceSpec(s);
  }
  if (family == "simplex") return InstanceSpec(SimplexQuadraticSpec{});
  return std::nullopt;
}

RunResult run_algo(AlgoKind algo, const Instance& inst, const SolverConfig& cfg) {
  switch (algo) {
    case AlgoKind::Bcg:
      return solve_bcg(*inst.objective, *inst.region, inst.start, cfg);
    case AlgoKind::LazyPairwiseFw:
      return solve_baseline(BaselineVariant::LazyPairwiseFW, *inst.objective, *inst.region,
                            inst.start, cfg);
    case AlgoKind::PairwiseFw:
      return solve_baseline(BaselineVariant::PairwiseFW, *inst.objective, *inst.region, inst.start,
                            cfg);
    case AlgoKind::AwayFw:
      return solve_baseline(BaselineVariant::AwayFW, *inst.objective, *inst.region, inst.start,
                            cfg);
    case AlgoKind::VanillaFw:
      return solve_baseline(BaselineVariant::VanillaFW, *inst.objective, *inst.region, inst.start,
                            cfg);
    case AlgoKind::StandaloneSigd: {
      if (dynamic_cast<const Simplex*>(inst.region.get()) == nullptr) {
        throw std::invalid_argument("sigd runs on the probability simplex family only");
      }
      return solve_standalone_sigd(*inst.objective, static_cast<int>(inst.region->ambient_dim()),
                                   cfg);
    }
  }
  throw std::logic_error("run_algo: unhandled algorithm");
}

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& os) {
  os << "iter,elapsed_s,f_value,phi,dual_gap,step_type,active_size,lmo_calls,cache_hits\n";
  for (const IterationRecord& r : trace) {
    os << r.iter << ',' << fmt17(r.elapsed) << ',' << fmt17(r.f_value) << ',' << fmt17(r.phi)
       << ',';
    if (r.dual_gap) os << fmt17(*r.dual_gap);
    os << ',' << step_kind_name(r.step) << ',' << r.active_size << ',' << r.lmo_calls << ','
       << r.cache_hits << '\n';
  }
}

nlohmann::json summarize(const AlgoRun& run) {
  const RunResult& r = run.result;
  nlohmann::json j;
  j["algo"] = algo_token(run.algo);
  j["termination"] = termination_name(r.termination);
  j["iterations"] = r.trace.size();
  j["f_initial"] = r.f_initial;
  j["f_final"] = r.f_final;
  j["phi_initial"] = r.phi_initial;
  j["phi_final"] = r.phi_final;
  j["dual_gap_final"] = r.dual_gap_final;
  j["final_active_size"] = r.final_set.size();
  j["lmo_calls"] = r.lmo_calls;
  j["cache_hits"] = r.cache_hits;
  nlohmann::json steps;
  for (StepKind k :
       {StepKind::FrankWolfe, StepKind::GapStep, StepKind::Descent, StepKind::Drop}) {
    steps[step_kind_name(k)] = 0;
  }
  for (const IterationRecord& rec : r.trace) {
    const char* name = step_kind_name(rec.step);
    steps[name] = steps[name].get<long>() + 1;
  }
  j["steps"] = steps;
  if (run.post) {
    nlohmann::json p;
    p["termination"] = termination_name(run.post->termination);
    p["iterations"] = run.post->trace.size();
    p["f_final"] = run.post->f_final;
    p["dual_gap_final"] = run.post->dual_gap_final;
    p["final_active_size"] = run.post->final_set.size();
    p["lmo_calls"] = run.post->lmo_calls;
    p["cache_hits"] = run.post->cache_hits;
    j["post"] = p;
  }
  return j;
}

std::optional<std::string> validate_run(AlgoKind algo, const SolverConfig& cfg,
                                        const RunResult& run, bool check_termination) {
  const bool lazified = algo == AlgoKind::Bcg || algo == AlgoKind::LazyPairwiseFw;
  const bool strict_descent = !cfg.drop_promotion_eps0.has_value();
  auto fail = [](long iter, const std::string& what) {
    std::ostringstream os;
    os << "iteration " << iter << ": " << what;
    return std::optional<std::string>(os.str());
  };

  double prev_f = run.f_initial;
  double prev_phi = run.phi_initial;
  long prev_iter = 0;
  std::uint64_t prev_lmo = 0;
  std::uint64_t prev_hits = 0;
  int prev_size = 1;  // every solver starts from a single atom
  long fw_rows = 0;
  long drop_rows = 0;

  for (const IterationRecord& rec : run.trace) {
    if (rec.iter != prev_iter + 1) return fail(rec.iter, "iteration numbers not consecutive");
    prev_iter = rec.iter;
    if (!std::isfinite(rec.f_value)) return fail(rec.iter, "objective value not finite");
    if (rec.active_size < 1) return fail(rec.iter, "empty active set");
    if (rec.lmo_calls < prev_lmo || rec.cache_hits < prev_hits) {
      return fail(rec.iter, "oracle counters decreased");
    }
    prev_lmo = rec.lmo_calls;
    prev_hits = rec.cache_hits;

    if (strict_descent && rec.f_value > prev_f + 1e-12 * (1.0 + std::abs(prev_f))) {
      return fail(rec.iter, "objective increased without drop promotion");
    }
    prev_f = rec.f_value;

    if (lazified) {
      if (rec.phi > prev_phi) return fail(rec.iter, "gap estimate increased");
      if (rec.step == StepKind::GapStep) {
        if (!(rec.phi < prev_phi)) return fail(rec.iter, "gap step kept the gap estimate");
        if (rec.dual_gap &&
            *rec.dual_gap > 2.0 * rec.phi * (1.0 + 1e-9) + 1e-15) {
          return fail(rec.iter, "dual gap above twice the estimate after a gap step");
        }
      }
      prev_phi = rec.phi;
    } else {
      if (rec.step == StepKind::GapStep) return fail(rec.iter, "gap step in a non-lazified run");
      if (rec.phi < 0.0) return fail(rec.iter, "negative gap column");
    }

    const int delta = rec.active_size - prev_size;
    if (delta > 1) return fail(rec.iter, "active set grew by more than one atom");
    if (delta > 0 && rec.step != StepKind::FrankWolfe) {
      return fail(rec.iter, "active set grew outside a Frank-Wolfe step");
    }
    prev_size = rec.active_size;

    if (rec.step == StepKind::FrankWolfe) ++fw_rows;
    if (rec.step == StepKind::Drop) ++drop_rows;
  }

  // Drop steps remove at least one previously added atom, and only
  // Frank-Wolfe steps add atoms, so the drop count stays within the
  // Frank-Wolfe count plus the initial atom. (Pairwise variants add an
  // atom inside their drop steps, so the bound is theirs alone.)
  if ((algo == AlgoKind::Bcg || algo == AlgoKind::StandaloneSigd) && drop_rows > fw_rows + 1) {
    return fail(prev_iter, "more drop steps than Frank-Wolfe steps plus one");
  }

  if (!std::isfinite(run.dual_gap_final) || run.dual_gap_final < 0.0) {
    return fail(prev_iter, "final dual gap not a nonnegative finite value");
  }
  if (check_termination && run.termination == Termination::PhiBelowEps) {
    if (lazified && run.phi_final > cfg.eps / 2.0) {
      return fail(prev_iter, "stopped with gap estimate above eps/2");
    }
    if (!lazified && run.phi_final > cfg.eps) {
      return fail(prev_iter, "stopped with dual gap above eps");
    }
  }
  return std::nullopt;
}

namespace {

void write_plot_script(const std::vector<AlgoKind>& algos, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  os << "# Convergence plot; run `gnuplot plot.gp` in this directory.\n"
     << "# The CSV columns hold raw values; the log scaling happens here.\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 1280,960\n"
     << "set output 'progress.png'\n"
     << "set multiplot layout 2,1\n"
     << "set logscale y 2\n"
     << "set xlabel 'iteration'\n";
  auto emit_plot = [&](int column, const char* label) {
    os << "set ylabel '" << label << "'\n";
    os << "plot";
    for (std::size_t i = 0; i < algos.size(); ++i) {
      if (i > 0) os << ",";
      os << " \\\n  '" << algo_token(algos[i]) << ".csv' using 1:" << column
         << " with lines title '" << algo_token(algos[i]) << "'";
    }
    os << "\n";
  };
  emit_plot(3, "objective value");
  emit_plot(4, "gap estimate");
  os << "unset multiplot\n";
  finish_out(os, path);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.algos.empty()) throw std::invalid_argument("run_experiment: no algorithms requested");
  spec.config.validate();
  const Instance inst = generate(spec.instance, spec.instance_seed);

  namespace fs = std::filesystem;
  const fs::path out_dir(spec.out_dir);
  fs::create_directories(out_dir);

  ExperimentResult out;
  for (AlgoKind algo : spec.algos) {
    AlgoRun run{algo, run_algo(algo, inst, spec.config), std::nullopt};
    if (auto bad = validate_run(algo, spec.config, run.result)) {
      out.violations.push_back(std::string(algo_token(algo)) + ": " + *bad);
    }
    if (spec.post_opt) {
      run.post = post_optimize(*inst.objective, run.result, spec.config);
      if (auto bad = validate_run(AlgoKind::Bcg, spec.config, *run.post, false)) {
        out.violations.push_back(std::string(algo_token(algo)) + " post: " + *bad);
      }
    }

    const std::string token = algo_token(algo);
    {
      const fs::path p = out_dir / (token + ".csv");
      std::ofstream os = open_out(p);
      write_trace_csv(run.result.trace, os);
      finish_out(os, p);
    }
    if (run.post) {
      const fs::path p = out_dir / (token + "_post.csv");
      std::ofstream os = open_out(p);
      write_trace_csv(run.post->trace, os);
      finish_out(os, p);
    }
    {
      const fs::path p = out_dir / (token + "_summary.json");
      std::ofstream os = open_out(p);
      os << summarize(run).dump(2) << '\n';
      finish_out(os, p);
    }
    out.runs.push_back(std::move(run));
  }
  write_plot_script(spec.algos, out_dir / "plot.gp");
  return out;
}

namespace {

std::vector<Eigen::VectorXd> hull_points(const Region& region, std::uint64_t seed, int count) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(mix64(seed + 0x7f4a7c15ULL * static_cast<std::uint64_t>(i + 1)));
    std::vector<Atom> atoms;
    for (int j = 0; j < 4; ++j) atoms.push_back(sample_vertex(region, rng));
    pts.push_back(sample_point(atoms, rng));
  }
  return pts;
}

BoundReport with_prefix(const std::string& family, BoundReport r) {
  r.name = family + "." + r.name;
  return r;
}

}  // namespace

VerifyOutcome run_verify(std::uint64_t seed, int trials, std::ostream& os) {
  if (trials <= 0) throw std::invalid_argument("run_verify: trials must be positive");

  std::vector<std::pair<std::string, InstanceSpec>> battery;
  battery.emplace_back("lasso", LassoSpec{60, 80, 8, 5.0});
  battery.emplace_back("signal", SignalRecoverySpec{50, 100, 0.2, 0.05, 0.0});
  {
    StructuredRegressionSpec s;
    s.kind = StructuredRegressionSpec::Kind::Birkhoff;
    s.birkhoff_n = 5;
    battery.emplace_back("birkhoff", s);
  }
  {
    StructuredRegressionSpec s;
    s.kind = StructuredRegressionSpec::Kind::DagPath;
    s.dag_layers = 3;
    s.dag_width = 3;
    s.dag_skips = 2;
    battery.emplace_back("dagpath", s);
  }
  battery.emplace_back("simplex", SimplexQuadraticSpec{12, 0.002});

  VerifyOutcome out;
  out.ok = true;
  auto emit = [&](BoundReport r) {
    os << json_line(r) << '\n';
    out.ok = out.ok && r.satisfied;
    out.reports.push_back(std::move(r));
  };

  for (const auto& [family, spec] : battery) {
    const Instance inst = generate(spec, seed);
    const QuadraticObjective& obj = *inst.objective;
    const Region& region = *inst.region;

    const std::vector<Eigen::VectorXd> points = hull_points(region, seed, 3);
    emit(with_prefix(family, gradient_check(obj, points)));

    std::vector<BoundReport> caps;
    const double simplicial = simplicial_curvature_estimate(obj, region, trials, seed, &caps);
    for (BoundReport& cap : caps) emit(with_prefix(family, std::move(cap)));

    const double sampled = curvature_estimate(obj, region, trials, seed);
    emit(make_report(family + ".curvature_vs_twice_simplicial", sampled, 2.0 * simplicial,
                     1e-6 * (1.0 + 2.0 * std::abs(simplicial))));

    SolverConfig cfg;
    cfg.eps = 1e-8;
    cfg.max_iter = 5000;
    const RunResult ref = solve_bcg(obj, region, inst.start, cfg);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double gap = dual_gap(obj, region, points[i]);
      const double primal = obj.value(points[i]) - ref.f_final;
      emit(make_report(family + ".gap_dominates_primal_" + std::to_string(i), primal, gap,
                       1e-9 * (1.0 + std::abs(gap))));
    }

    if (const auto* simplex = dynamic_cast<const Simplex*>(&region)) {
      std::vector<Atom> vertices;
      for (int i = 0; i < static_cast<int>(simplex->ambient_dim()); ++i) {
        vertices.push_back(simplex->vertex(i));
      }
      Rng rng(mix64(seed ^ 0x51a0b5c6d7e8f901ULL));
      double worst = std::numeric_limits<double>::infinity();
      for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXd x = sample_point(vertices, rng);
        const Eigen::VectorXd y = sample_point(vertices, rng);
        const double nrm2 = (y - x).squaredNorm();
        if (nrm2 < 1e-20) continue;
        const double witness =
            2.0 * (obj.value(y) - obj.value(x) - obj.gradient(x).dot(y - x)) / nrm2;
        worst = std::min(worst, witness);
      }
      emit(make_report(family + ".pointwise_strong_convexity", obj.alpha(), worst,
                       1e-9 * (1.0 + std::abs(worst))));
    }
  }
  return out;
}

std::vector<SparsityRow> sparsity_table(const InstanceSpec& spec,
                                        const std::vector<std::uint64_t>& seeds,
                                        const SolverConfig& config, double promote_eps0) {
  if (!(promote_eps0 >= 0.0)) {
    throw std::invalid_argument("sparsity_table: promotion threshold must be >= 0");
  }
  std::vector<SparsityRow> rows;
  rows.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const Instance inst = generate(spec, seed);
    SolverConfig plain = config;
    plain.drop_promotion_eps0.reset();
    SolverConfig promoted = config;
    promoted.drop_promotion_eps0 = promote_eps0;

    const RunResult a = solve_bcg(*inst.objective, *inst.region, inst.start, plain);
    const RunResult b = solve_bcg(*inst.objective, *inst.region, inst.start, promoted);
    const RunResult c = post_optimize(*inst.objective, b, promoted);

    SparsityRow row;
    row.family = family_token(spec);
    row.seed = seed;
    row.size_plain = a.final_set.size();
    row.size_promoted = b.final_set.size();
    row.size_post = c.final_set.size();
    row.f_plain = a.f_final;
    row.f_promoted = b.f_final;
    row.f_post = c.f_final;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

double pct_change(double f, double base) {
  return 100.0 * (f - base) / std::max(std::abs(base), 1e-300);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void print_sparsity_table(const std::vector<SparsityRow>& rows, std::ostream& os) {
  if (rows.empty()) {
    os << "(no rows)\n";
    return;
  }
  os << std::left << std::setw(10) << "family" << std::right << std::setw(8) << "seed"
     << std::setw(12) << "size" << std::setw(12) << "size" << std::setw(12) << "size"
     << std::setw(14) << "f change %" << std::setw(14) << "f change %" << '\n';
  os << std::left << std::setw(10) << "" << std::right << std::setw(8) << "" << std::setw(12)
     << "plain" << std::setw(12) << "promoted" << std::setw(12) << "post" << std::setw(14)
     << "promoted" << std::setw(14) << "post" << '\n';
  std::vector<double> sp, sq, sr, pq, pr;
  for (const SparsityRow& row : rows) {
    const double dq = pct_change(row.f_promoted, row.f_plain);
    const double dr = pct_change(row.f_post, row.f_plain);
    os << std::left << std::setw(10) << row.family << std::right << std::setw(8) << row.seed
       << std::setw(12) << row.size_plain << std::setw(12) << row.size_promoted << std::setw(12)
       << row.size_post << std::setw(14) << std::setprecision(4) << dq << std::setw(14)
       << std::setprecision(4) << dr << '\n';
    sp.push_back(row.size_plain);
    sq.push_back(row.size_promoted);
    sr.push_back(row.size_post);
    pq.push_back(dq);
    pr.push_back(dr);
  }
  os << std::left << std::setw(10) << "median" << std::right << std::setw(8) << "" << std::setw(12)
     << median(sp) << std::setw(12) << median(sq) << std::setw(12) << median(sr) << std::setw(14)
     << std::setprecision(4) << median(pq) << std::setw(14) << std::setprecision(4) << median(pr)
     << '\n';
}

}  // namespace bcg
