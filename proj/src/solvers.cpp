#include "bcg/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bcg/linesearch.hpp"
#include "bcg/sigd.hpp"
#include "bcg/weak_separation.hpp"

namespace bcg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Exact dual gap; bypasses all counters (diagnostic use only).
double gap_at(const Region& region, const Eigen::VectorXd& grad, const Eigen::VectorXd& x) {
  const Atom v = region.lmo(grad);
  return std::max(0.0, grad.dot(x - v.coords()));
}

void finish(RunResult& res, const Objective& obj, const Region& region, double phi,
            Termination term) {
  res.termination = term;
  res.phi_final = phi;
  res.f_final = obj.value(res.final_set.iterate());
  res.dual_gap_final =
      gap_at(region, obj.gradient(res.final_set.iterate()), res.final_set.iterate());
  res.final_set.check_invariants();
}

SigdConfig sigd_config(const SolverConfig& cfg, double last_progress) {
  SigdConfig s;
  s.mode = cfg.drop_promotion_eps0 ? DropMode::PromoteDrops : DropMode::Vanilla;
  s.promote_eps0 = cfg.drop_promotion_eps0.value_or(0.0);
  s.last_progress = last_progress;
  s.line_search = cfg.line_search;
  return s;
}

double promotion_slack(const SolverConfig& cfg, double last_progress) {
  if (!cfg.drop_promotion_eps0) return 0.0;
  return std::min(std::max(last_progress, 0.0) / 2.0, *cfg.drop_promotion_eps0);
}

RunResult run_bcg(const Objective& obj, const Region& region, ActiveSet set,
                  const SolverConfig& cfg, std::optional<double> stop_dual_gap) {
  cfg.validate();
  if (obj.dim() != region.ambient_dim() || set.dim() != region.ambient_dim())
    throw std::invalid_argument("bcg: dimension mismatch");
  if (!region.membership(set.iterate(), 1e-7))
    throw std::invalid_argument("bcg: start point not in the region");
  const auto t0 = Clock::now();

  VertexCache cache(cfg.cache_cap);
  for (const Atom& a : set.atoms()) cache.insert(a);

  double phi = 0.0;
  {
    const Eigen::VectorXd grad = obj.gradient(set.iterate());
    ++cache.lmo_calls;
    const Atom v0 = region.lmo(grad);
    cache.insert(v0);
    phi = std::max(0.0, grad.dot(set.iterate() - v0.coords())) / 2.0;
  }

  RunResult res(std::move(set));
  ActiveSet& s = res.final_set;
  res.f_initial = obj.value(s.iterate());
  res.phi_initial = phi;
  double last_progress = 0.0;
  Termination term = Termination::MaxIter;

  while (true) {
    if (phi <= cfg.eps / 2.0) {
      term = Termination::PhiBelowEps;
      break;
    }
    if (static_cast<long>(res.trace.size()) >= cfg.max_iter) {
      term = Termination::MaxIter;
      break;
    }
    if (cfg.time_limit > 0.0 && seconds_since(t0) > cfg.time_limit) {
      term = Termination::TimeLimit;
      break;
    }
    Eigen::VectorXd grad = obj.gradient(s.iterate());
    if (stop_dual_gap && gap_at(region, grad, s.iterate()) <= *stop_dual_gap) {
      term = Termination::PhiBelowEps;
      break;
    }

    const LocalExtremes ext = s.local_extremes(grad);
    StepKind kind;
    bool separate = true;
    if (ext.away_value - ext.toward_value >= phi) {
      const SigdResult r = sigd_step(obj, s, sigd_config(cfg, last_progress));
      if (r.stalled) {
        // The active-set gap is numerically spent; ask the oracle instead.
      } else {
        last_progress = r.progress;
        kind = r.step;
        separate = false;
      }
    }
    if (separate) {
      const SeparationOutcome out =
          weak_separation(region, cache, s.atoms(), grad, s.iterate(), phi, cfg.K);
      if (out.kind == SeparationKind::Negative) {
        phi = std::min(phi / 2.0, out.true_gap);
        kind = StepKind::GapStep;
      } else {
        const Atom& v = *out.atom;
        const double fx = obj.value(s.iterate());
        SegmentSearchResult ls{0.0, fx, 0};
        if (cfg.pairwise_blend) {
          const int away = ext.away_index;
          const double gmax = s.weights()[away];
          const Eigen::VectorXd dir =
              v.coords() - s.atoms()[static_cast<std::size_t>(away)].coords();
          const auto seg = obj.segment(s.iterate(), dir);
          ls = ternary_search(seg, 0.0, gmax, cfg.line_search);
          if (ls.f_value < fx) {
            s.pairwise_shift(away, v, ls.gamma);
            s.prune();
          }
        } else {
          const Eigen::VectorXd dir = v.coords() - s.iterate();
          const auto seg = obj.segment(s.iterate(), dir);
          ls = ternary_search(seg, 0.0, 1.0, cfg.line_search);
          if (ls.f_value < fx) {
            if (ls.gamma >= 1.0) {
              s.reset_to(v);
            } else {
              s.step_toward(v, ls.gamma);
              s.prune();
            }
          }
        }
        if (ls.f_value < fx) {
          last_progress = fx - ls.f_value;
          kind = StepKind::FrankWolfe;
        } else {
          // The certificate cannot be turned into progress at this
          // precision. Re-seed the estimate from a fresh exact oracle
          // answer, the same rule that set the initial phi; the iterate
          // stays put, so half the measured gap keeps certifying it and
          // any g below 2 phi still shrinks the estimate strictly.
          ++cache.lmo_calls;
          const Atom vb = region.lmo(grad);
          cache.insert(vb);
          const double g = std::max(0.0, grad.dot(s.iterate() - vb.coords()));
          if (g < 2.0 * phi) {
            phi = g / 2.0;
            kind = StepKind::GapStep;
          } else {
            kind = StepKind::FrankWolfe;  // stuck round, bounded by max_iter
          }
        }
      }
    }

    IterationRecord rec;
    rec.iter = static_cast<long>(res.trace.size()) + 1;
    rec.elapsed = seconds_since(t0);
    rec.f_value = obj.value(s.iterate());
    rec.phi = phi;
    rec.step = kind;
    rec.active_size = s.size();
    rec.lmo_calls = cache.lmo_calls;
    rec.cache_hits = cache.cache_hits;
    if (cfg.exact_gap)
      rec.dual_gap = gap_at(region, obj.gradient(s.iterate()), s.iterate());
    res.trace.push_back(rec);
  }

  res.lmo_calls = cache.lmo_calls;
  res.cache_hits = cache.cache_hits;
  finish(res, obj, region, phi, term);
  return res;
}

// Shared scaffolding for solvers whose phi column is the exact dual gap of
// the row's iterate: the gap becomes known at the top of the next
// iteration, so each record is back-filled then. Every loop exit happens
// right after the back-fill, which keeps the last record complete.
struct GapTrace {
  std::vector<IterationRecord>& trace;
  double& phi_initial;
  bool exact_gap;

  void note_gap(double g) const {
    if (trace.empty()) {
      phi_initial = g;
    } else {
      trace.back().phi = g;
      if (exact_gap) trace.back().dual_gap = g;
    }
  }
};

RunResult run_nonlazy_baseline(BaselineVariant variant, const Objective& obj,
                               const Region& region, const Atom& start,
                               const SolverConfig& cfg) {
  cfg.validate();
  if (obj.dim() != region.ambient_dim())
    throw std::invalid_argument("baseline: dimension mismatch");
  if (!region.membership(start.coords(), 1e-7))
    throw std::invalid_argument("baseline: start vertex not in the region");
  const auto t0 = Clock::now();

  RunResult res{ActiveSet(start)};
  ActiveSet& s = res.final_set;
  res.f_initial = obj.value(s.iterate());
  std::uint64_t lmo_calls = 0;
  double last_progress = 0.0;
  double last_gap = 0.0;
  Termination term = Termination::MaxIter;
  const GapTrace gt{res.trace, res.phi_initial, cfg.exact_gap};

  while (true) {
    const Eigen::VectorXd grad = obj.gradient(s.iterate());
    ++lmo_calls;
    const Atom v = region.lmo(grad);
    const double gap = std::max(0.0, grad.dot(s.iterate() - v.coords()));
    gt.note_gap(gap);
    last_gap = gap;
    if (gap <= cfg.eps) {
      term = Termination::PhiBelowEps;
      break;
    }
    if (static_cast<long>(res.trace.size()) >= cfg.max_iter) {
      term = Termination::MaxIter;
      break;
    }
    if (cfg.time_limit > 0.0 && seconds_since(t0) > cfg.time_limit) {
      term = Termination::TimeLimit;
      break;
    }

    const double fx = obj.value(s.iterate());
    StepKind kind = StepKind::FrankWolfe;
    const auto fw_step = [&] {
      const Eigen::VectorXd dir = v.coords() - s.iterate();
      const auto seg = obj.segment(s.iterate(), dir);
      const SegmentSearchResult ls = ternary_search(seg, 0.0, 1.0, cfg.line_search);
      if (ls.gamma >= 1.0) {
        s.reset_to(v);
      } else {
        s.step_toward(v, ls.gamma);
        s.prune();
      }
      last_progress = fx - ls.f_value;
    };

    if (variant == BaselineVariant::VanillaFW) {
      fw_step();
    } else if (variant == BaselineVariant::AwayFW) {
      const LocalExtremes ext = s.local_extremes(grad);
      const double away_gap = ext.away_value - grad.dot(s.iterate());
      if (gap >= away_gap) {
        fw_step();
      } else {
        const int away = ext.away_index;
        const double lam = s.weights()[away];
        const double gmax = lam / (1.0 - lam);
        const Eigen::VectorXd dir =
            s.iterate() - s.atoms()[static_cast<std::size_t>(away)].coords();
        const auto seg = obj.segment(s.iterate(), dir);
        SegmentSearchResult ls = ternary_search(seg, 0.0, gmax, cfg.line_search);
        const double slack = promotion_slack(cfg, last_progress);
        if (slack > 0.0 && seg(gmax) <= ls.f_value + slack) ls = {gmax, seg(gmax), ls.evals};
        s.away_shift(away, ls.gamma);
        const bool dropped = s.weights()[away] <= kDropTol;
        s.prune();
        kind = dropped ? StepKind::Drop : StepKind::Descent;
        last_progress = fx - ls.f_value;
      }
    } else {  // PairwiseFW
      const LocalExtremes ext = s.local_extremes(grad);
      const int away = ext.away_index;
      const double gmax = s.weights()[away];
      const Eigen::VectorXd dir =
          v.coords() - s.atoms()[static_cast<std::size_t>(away)].coords();
      const auto seg = obj.segment(s.iterate(), dir);
      SegmentSearchResult ls = ternary_search(seg, 0.0, gmax, cfg.line_search);
      const double slack = promotion_slack(cfg, last_progress);
      if (slack > 0.0 && seg(gmax) <= ls.f_value + slack) ls = {gmax, seg(gmax), ls.evals};
      s.pairwise_shift(away, v, ls.gamma);
      const bool dropped = s.weights()[away] <= kDropTol;
      s.prune();
      kind = dropped ? StepKind::Drop : StepKind::FrankWolfe;
      last_progress = fx - ls.f_value;
    }

    IterationRecord rec;
    rec.iter = static_cast<long>(res.trace.size()) + 1;
    rec.elapsed = seconds_since(t0);
    rec.f_value = obj.value(s.iterate());
    rec.phi = 0.0;  // back-filled next round
    rec.step = kind;
    rec.active_size = s.size();
    rec.lmo_calls = lmo_calls;
    rec.cache_hits = 0;
    res.trace.push_back(rec);
  }

  res.lmo_calls = lmo_calls;
  res.cache_hits = 0;
  res.termination = term;
  res.phi_final = last_gap;
  res.f_final = obj.value(s.iterate());
  res.dual_gap_final = last_gap;
  s.check_invariants();
  return res;
}

RunResult run_lazy_pairwise(const Objective& obj, const Region& region, const Atom& start,
                            const SolverConfig& cfg) {
  cfg.validate();
  if (obj.dim() != region.ambient_dim())
    throw std::invalid_argument("baseline: dimension mismatch");
  if (!region.membership(start.coords(), 1e-7))
    throw std::invalid_argument("baseline: start vertex not in the region");
  const auto t0 = Clock::now();

  RunResult res{ActiveSet(start)};
  ActiveSet& s = res.final_set;
  VertexCache cache(cfg.cache_cap);
  cache.insert(start);

  double phi = 0.0;
  {
    const Eigen::VectorXd grad = obj.gradient(s.iterate());
    ++cache.lmo_calls;
    const Atom v0 = region.lmo(grad);
    cache.insert(v0);
    phi = std::max(0.0, grad.dot(s.iterate() - v0.coords())) / 2.0;
  }
  res.f_initial = obj.value(s.iterate());
  res.phi_initial = phi;
  double last_progress = 0.0;
  Termination term = Termination::MaxIter;

  while (true) {
    if (phi <= cfg.eps / 2.0) {
      term = Termination::PhiBelowEps;
      break;
    }
    if (static_cast<long>(res.trace.size()) >= cfg.max_iter) {
      term = Termination::MaxIter;
      break;
    }
    if (cfg.time_limit > 0.0 && seconds_since(t0) > cfg.time_limit) {
      term = Termination::TimeLimit;
      break;
    }
    const Eigen::VectorXd grad = obj.gradient(s.iterate());
    const LocalExtremes ext = s.local_extremes(grad);
    StepKind kind;
    const SeparationOutcome out =
        weak_separation(region, cache, s.atoms(), grad, s.iterate(), phi, cfg.K);
    if (out.kind == SeparationKind::Negative) {
      phi = std::min(phi / 2.0, out.true_gap);
      kind = StepKind::GapStep;
    } else {
      const Atom& v = *out.atom;
      const double fx = obj.value(s.iterate());
      const int away = ext.away_index;
      const double gmax = s.weights()[away];
      const Eigen::VectorXd dir =
          v.coords() - s.atoms()[static_cast<std::size_t>(away)].coords();
      const auto seg = obj.segment(s.iterate(), dir);
      SegmentSearchResult ls = ternary_search(seg, 0.0, gmax, cfg.line_search);
      const double slack = promotion_slack(cfg, last_progress);
      if (slack > 0.0 && seg(gmax) <= ls.f_value + slack) ls = {gmax, seg(gmax), ls.evals};
      s.pairwise_shift(away, v, ls.gamma);
      const bool dropped = s.weights()[away] <= kDropTol;
      s.prune();
      kind = dropped ? StepKind::Drop : StepKind::FrankWolfe;
      last_progress = fx - ls.f_value;
    }

    IterationRecord rec;
    rec.iter = static_cast<long>(res.trace.size()) + 1;
    rec.elapsed = seconds_since(t0);
    rec.f_value = obj.value(s.iterate());
    rec.phi = phi;
    rec.step = kind;
    rec.active_size = s.size();
    rec.lmo_calls = cache.lmo_calls;
    rec.cache_hits = cache.cache_hits;
    if (cfg.exact_gap)
      rec.dual_gap = gap_at(region, obj.gradient(s.iterate()), s.iterate());
    res.trace.push_back(rec);
  }

  res.lmo_calls = cache.lmo_calls;
  res.cache_hits = cache.cache_hits;
  finish(res, obj, region, phi, term);
  return res;
}

}  // namespace

RunResult solve_bcg(const Objective& obj, const Region& region, const Atom& start,
                    const SolverConfig& cfg) {
  return run_bcg(obj, region, ActiveSet(start), cfg, std::nullopt);
}

RunResult solve_bcg_from(const Objective& obj, const Region& region, ActiveSet set,
                         const SolverConfig& cfg, std::optional<double> stop_dual_gap) {
  return run_bcg(obj, region, std::move(set), cfg, stop_dual_gap);
}

RunResult solve_standalone_sigd(const Objective& obj, int k, const SolverConfig& cfg) {
  cfg.validate();
  if (k < 2) throw std::invalid_argument("standalone sigd: need k >= 2");
  if (obj.dim() != k) throw std::invalid_argument("standalone sigd: dimension mismatch");
  double Lf = 0.0;
  if (cfg.fixed_steps) {
    const auto L = obj.smoothness();
    if (!L || !(*L > 0.0))
      throw std::invalid_argument("standalone sigd: fixed steps need a smoothness constant");
    Lf = *L;
  }
  const auto t0 = Clock::now();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  x[0] = 1.0;

  std::vector<IterationRecord> trace;
  double phi_initial = 0.0;
  double f_initial = obj.value(x);
  double last_gap = 0.0;
  double last_progress = 0.0;
  std::uint64_t oracle_calls = 0;
  Termination term = Termination::MaxIter;
  const GapTrace gt{trace, phi_initial, cfg.exact_gap};

  while (true) {
    const Eigen::VectorXd grad = obj.gradient(x);
    ++oracle_calls;
    Eigen::Index w = 0;
    for (Eigen::Index j = 1; j < k; ++j)
      if (grad[j] < grad[w]) w = j;
    const double gap = std::max(0.0, grad.dot(x) - grad[w]);
    gt.note_gap(gap);
    last_gap = gap;
    if (gap <= cfg.eps) {
      term = Termination::PhiBelowEps;
      break;
    }
    if (static_cast<long>(trace.size()) >= cfg.max_iter) {
      term = Termination::MaxIter;
      break;
    }
    if (cfg.time_limit > 0.0 && seconds_since(t0) > cfg.time_limit) {
      term = Termination::TimeLimit;
      break;
    }

    std::vector<Eigen::Index> sup;
    for (Eigen::Index j = 0; j < k; ++j)
      if (x[j] > 0.0) sup.push_back(j);
    Eigen::Index a = sup.front(), sm = sup.front();
    for (Eigen::Index j : sup) {
      if (grad[j] > grad[a]) a = j;
      if (grad[j] < grad[sm]) sm = j;
    }

    const double fx = obj.value(x);
    const long t = static_cast<long>(trace.size());
    StepKind kind;
    bool take_fw = !(grad[a] - grad[sm] > grad.dot(x) - grad[w]);
    if (!take_fw) {
      // Simplex-descent machinery restricted to the support.
      const Eigen::Index m = static_cast<Eigen::Index>(sup.size());
      Eigen::VectorXd cs(m), lam(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        cs[i] = grad[sup[static_cast<std::size_t>(i)]];
        lam[i] = x[sup[static_cast<std::size_t>(i)]];
      }
      const Eigen::VectorXd d = project_direction(cs);
      const double eta = ratio_test(lam, d);
      Eigen::VectorXd y = x;
      for (Eigen::Index i = 0; i < m; ++i) y[sup[static_cast<std::size_t>(i)]] -= eta * d[i];

      Eigen::VectorXd y_drop = y;
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = sup[static_cast<std::size_t>(i)];
        if (y_drop[j] <= kDropTol) y_drop[j] = 0.0;
      }
      y_drop /= y_drop.sum();
      const double fd = obj.value(y_drop);
      if (fd <= fx + promotion_slack(cfg, last_progress)) {
        x = y_drop;
        kind = StepKind::Drop;
        last_progress = fx - fd;
      } else if (cfg.fixed_steps) {
        const double blend = std::min(1.0, 1.0 / Lf);  // feasibility clamp
        x = (1.0 - blend) * x + blend * y;
        kind = StepKind::Descent;
        last_progress = fx - obj.value(x);
      } else {
        const Eigen::VectorXd dir = y - x;
        const auto seg = obj.segment(x, dir);
        const SegmentSearchResult ls = refined_descent_search(seg, 1.0, cfg.line_search);
        if (ls.gamma == 0.0) {
          // No resolvable decrease along the support; try the vertex step.
          take_fw = true;
        } else {
          x += ls.gamma * dir;
          kind = StepKind::Descent;
          last_progress = fx - ls.f_value;
        }
      }
    }
    if (take_fw) {
      double gamma;
      std::optional<double> fnew;
      if (cfg.fixed_steps) {
        gamma = 2.0 / (static_cast<double>(t) + 2.0);
      } else {
        Eigen::VectorXd dir = -x;
        dir[w] += 1.0;
        const auto seg = obj.segment(x, dir);
        const SegmentSearchResult ls = ternary_search(seg, 0.0, 1.0, cfg.line_search);
        gamma = ls.gamma;
        fnew = ls.f_value;
      }
      x *= (1.0 - gamma);
      x[w] += gamma;
      kind = StepKind::FrankWolfe;
      last_progress = fx - (fnew ? *fnew : obj.value(x));
    }

    if (std::abs(x.sum() - 1.0) > 1e-13) x /= x.sum();

    IterationRecord rec;
    rec.iter = t + 1;
    rec.elapsed = seconds_since(t0);
    rec.f_value = obj.value(x);
    rec.phi = 0.0;  // back-filled next round
    rec.step = kind;
    rec.active_size = static_cast<int>((x.array() > 0.0).count());
    rec.lmo_calls = oracle_calls;
    rec.cache_hits = 0;
    trace.push_back(rec);
  }

  std::vector<Atom> atoms;
  std::vector<double> w;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (x[j] > 0.0) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
      e[j] = 1.0;
      atoms.emplace_back(AtomKey{AtomFamily::Coordinate, {static_cast<std::int32_t>(j)}},
                         std::move(e));
      w.push_back(x[j]);
    }
  }
  RunResult res{ActiveSet(std::move(atoms),
                          Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                            static_cast<Eigen::Index>(w.size())))};
  res.trace = std::move(trace);
  res.termination = term;
  res.phi_final = last_gap;
  res.f_final = obj.value(x);
  res.f_initial = f_initial;
  res.phi_initial = phi_initial;
  res.dual_gap_final = last_gap;
  res.lmo_calls = oracle_calls;
  res.cache_hits = 0;
  return res;
}

const char* baseline_name(BaselineVariant v) {
  switch (v) {
    case BaselineVariant::VanillaFW:
      return "VanillaFW";
    case BaselineVariant::AwayFW:
      return "AwayFW";
    case BaselineVariant::PairwiseFW:
      return "PairwiseFW";
    case BaselineVariant::LazyPairwiseFW:
      return "LazyPairwiseFW";
  }
  return "?";
}

RunResult solve_baseline(BaselineVariant variant, const Objective& obj, const Region& region,
                         const Atom& start, const SolverConfig& cfg) {
  if (variant == BaselineVariant::LazyPairwiseFW)
    return run_lazy_pairwise(obj, region, start, cfg);
  return run_nonlazy_baseline(variant, obj, region, start, cfg);
}

RunResult post_optimize(const Objective& obj, const RunResult& run, const SolverConfig& cfg) {
  if (run.final_set.size() <= 1) return run;
  const double d0 = run.dual_gap_final;
  ConvexHullRegion hull(run.final_set.atoms());
  SolverConfig c2 = cfg;
  // Stop exactly at the recorded gap; the phi certificate (gap <= 2 phi <=
  // eps) is narrowed so it cannot exit above d0 on its own.
  c2.eps = std::max(std::min(cfg.eps, d0), 1e-14);
  const double slack = d0 + 1e-12 * (1.0 + std::abs(run.f_final));
  return solve_bcg_from(obj, hull, ActiveSet(run.final_set.atoms().front()), c2, slack);
}

}  // namespace bcg
