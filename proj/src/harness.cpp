#include "sparseal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "sparseal/csv.hpp"
#include "sparseal/errors.hpp"
#include "sparseal/stats.hpp"

namespace sparseal {

namespace {

// Stream ids per seed: target draw, learner data, evaluation. Fixed so the
// same seed always reproduces the same world and run.
constexpr std::uint64_t kTargetStream = 0;
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kEvalStream = 3;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int sign_pm1(double m) {
  return m >= 0.0 ? 1 : -1;
}

World make_world(const ExperimentConfig& cfg, std::uint64_t seed) {
  World world;
  world.marginal = MarginalDistribution{cfg.marginal, cfg.d};
  RngState target_rng(seed, kTargetStream);
  world.target = sample_target(cfg.d, cfg.t, target_rng);
  world.noise = resolve_noise(cfg.noise.kind, cfg.noise.level, world.marginal);
  return world;
}

RunRecord base_record(const ExperimentConfig& cfg, std::uint64_t seed, const char* algorithm) {
  RunRecord r;
  r.config_hash = config_hash_hex(cfg);
  r.seed = seed;
  r.d = cfg.d;
  r.t = cfg.t;
  r.epsilon = cfg.epsilon;
  r.delta = cfg.delta;
  r.noise_kind = to_string(cfg.noise.kind);
  r.noise_param = cfg.noise.level;
  r.algorithm = algorithm;
  return r;
}

// Excess error is recorded when sign(u.x) is Bayes-optimal: exactly the
// recorded error for clean labels, a paired estimate under bounded noise,
// and NaN (not identifiable) under adversarial noise.
void fill_excess(RunRecord& record, const Vec& w, const World& world, const ExperimentConfig& cfg,
                 std::uint64_t seed, const ErrorEstimate& est) {
  switch (world.noise.kind) {
    case NoiseKind::realizable:
      record.excess_error = est.value;
      break;
    case NoiseKind::bounded_constant:
    case NoiseKind::bounded_margin_decay:
      record.excess_error =
          estimate_excess_error(w, world, cfg.estimate.samples, RngState(seed, kEvalStream)).value;
      break;
    default:
      break;
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Linear-interpolation percentile, q in [0, 1].
double percentile_of(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

const char* to_string(ErrorMethod method) {
  switch (method) {
    case ErrorMethod::automatic: return "auto";
    case ErrorMethod::exact_angle: return "exact_angle";
    case ErrorMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

ErrorMethod error_method_from_string(const std::string& name) {
  if (name == "auto" || name == "automatic") return ErrorMethod::automatic;
  if (name == "exact_angle") return ErrorMethod::exact_angle;
  if (name == "monte_carlo") return ErrorMethod::monte_carlo;
  throw ParameterError("unknown error method: " + name);
}

ErrorEstimate estimate_error(const Vec& w, const World& world, const EstimateOptions& opts,
                             const RngState& base) {
  if (w.size() != static_cast<std::size_t>(world.marginal.dim)) {
    throw ParameterError("estimate_error: dimension mismatch");
  }
  ErrorMethod method = opts.method;
  if (method == ErrorMethod::automatic) {
    method = world.noise.kind == NoiseKind::realizable ? ErrorMethod::exact_angle
                                                       : ErrorMethod::monte_carlo;
  }
  if (method == ErrorMethod::exact_angle) {
    if (world.noise.kind != NoiseKind::realizable) {
      throw ParameterError("estimate_error: exact_angle requires clean labels");
    }
    // Rotation-invariant marginal: disagreement mass equals angle / pi.
    return {angle(w, world.target.u) / M_PI, 0.0};
  }

  const std::size_t m = opts.samples;
  if (m == 0) throw ParameterError("estimate_error: need at least one sample");
  std::size_t mistakes = 0;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : mistakes)
  {
    Vec x(w.size());
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
      RngState sub = base.substream(i);
      sample_x_into(world.marginal, sub, x);
      const int y = label(x, world.target, world.noise, sub);
      mistakes += (sign_pm1(dot(w, x)) != y) ? 1u : 0u;
    }
  }
#else
  Vec x(w.size());
  for (std::size_t i = 0; i < m; ++i) {
    RngState sub = base.substream(i);
    sample_x_into(world.marginal, sub, x);
    const int y = label(x, world.target, world.noise, sub);
    mistakes += (sign_pm1(dot(w, x)) != y) ? 1u : 0u;
  }
#endif
  const double p = static_cast<double>(mistakes) / static_cast<double>(m);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(m))};
}

ErrorEstimate estimate_excess_error(const Vec& w, const World& world, std::size_t samples,
                                    const RngState& base) {
  if (w.size() != static_cast<std::size_t>(world.marginal.dim)) {
    throw ParameterError("estimate_excess_error: dimension mismatch");
  }
  if (samples == 0) throw ParameterError("estimate_excess_error: need at least one sample");
  if (world.noise.kind == NoiseKind::adversarial_boundary ||
      world.noise.kind == NoiseKind::adversarial_hashed) {
    throw ParameterError("estimate_excess_error: best-in-class error is not identifiable "
                         "under adversarial noise");
  }

  // Count draws where exactly one hypothesis is wrong; shared draws and
  // labels make the difference estimator exact on the agreement region.
  std::size_t w_only = 0;
  std::size_t u_only = 0;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : w_only, u_only)
  {
    Vec x(w.size());
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < samples; ++i) {
      RngState sub = base.substream(i);
      sample_x_into(world.marginal, sub, x);
      const int y = label(x, world.target, world.noise, sub);
      const bool miss_w = sign_pm1(dot(w, x)) != y;
      const bool miss_u = sign_pm1(target_margin(x, world.target)) != y;
      w_only += (miss_w && !miss_u) ? 1u : 0u;
      u_only += (miss_u && !miss_w) ? 1u : 0u;
    }
  }
#else
  Vec x(w.size());
  for (std::size_t i = 0; i < samples; ++i) {
    RngState sub = base.substream(i);
    sample_x_into(world.marginal, sub, x);
    const int y = label(x, world.target, world.noise, sub);
    const bool miss_w = sign_pm1(dot(w, x)) != y;
    const bool miss_u = sign_pm1(target_margin(x, world.target)) != y;
    w_only += (miss_w && !miss_u) ? 1u : 0u;
    u_only += (miss_u && !miss_w) ? 1u : 0u;
  }
#endif
  const double m = static_cast<double>(samples);
  const double excess = (static_cast<double>(w_only) - static_cast<double>(u_only)) / m;
  const double p_diff = (static_cast<double>(w_only) + static_cast<double>(u_only)) / m;
  return {excess, std::sqrt(std::max(p_diff - excess * excess, 0.0) / m)};
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "d=" << cfg.d << "|t=" << cfg.t << "|epsilon=" << format_g17(cfg.epsilon)
    << "|delta=" << format_g17(cfg.delta)
    << "|marginal=" << (cfg.marginal == MarginalKind::gaussian ? "gaussian" : "uniform_ball")
    << "|noise=" << to_string(cfg.noise.kind) << ":" << format_g17(cfg.noise.level)
    << "|constants=" << format_g17(cfg.constants.sample_scale) << ","
    << format_g17(cfg.constants.band_scale) << "," << format_g17(cfg.constants.margin_scale)
    << "," << format_g17(cfg.constants.angle_ratio) << "|solver=" << cfg.solver.iterations << ","
    << format_g17(cfg.solver.gap_tolerance) << "," << format_g17(cfg.solver.step_scale)
    << "|draw=" << cfg.draw.attempt_cap << "|estimate=" << to_string(cfg.estimate.method) << ","
    << cfg.estimate.samples << "|passive_budget=" << cfg.baselines.passive_budget;
  const std::string text = s.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutput run_active(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto start = Clock::now();
  const World world = make_world(cfg, seed);
  const EpochSchedule schedule =
      build_schedule(cfg.d, cfg.t, cfg.epsilon, cfg.delta, cfg.constants);

  LearnerOptions opts;
  opts.solver = cfg.solver;
  opts.draw = cfg.draw;
  RngState data_rng(seed, kDataStream);
  LearnerResult res = run_learner(world, schedule, opts, data_rng);

  const ErrorEstimate est =
      estimate_error(res.weights, world, cfg.estimate, RngState(seed, kEvalStream));

  RunOutput out;
  out.record = base_record(cfg, seed, "active");
  const EpochCounts totals = res.ledger.totals();
  out.record.labels_total = totals.queries;
  out.record.unlabeled_total = totals.unlabeled;
  out.record.rejected_total = totals.rejected;
  out.record.err_estimate = est.value;
  out.record.err_stderr = est.std_error;
  out.record.theta_final = angle(res.weights, world.target.u);
  out.record.last_epoch = schedule.last_epoch;
  std::size_t held = 0;
  for (const EpochTrace& tr : res.traces) held += tr.target_in_next_set ? 1u : 0u;
  out.record.target_in_set_rate =
      res.traces.empty() ? 0.0 : static_cast<double>(held) / static_cast<double>(res.traces.size());
  fill_excess(out.record, res.weights, world, cfg, seed, est);
  out.weights = std::move(res.weights);
  out.traces = std::move(res.traces);
  out.record.wall_ms = elapsed_ms(start);
  return out;
}

RunOutput run_baseline_passive(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto start = Clock::now();
  const World world = make_world(cfg, seed);
  const EpochSchedule schedule =
      build_schedule(cfg.d, cfg.t, cfg.epsilon, cfg.delta, cfg.constants);

  std::size_t budget = cfg.baselines.passive_budget;
  if (budget == 0) {
    budget = std::accumulate(schedule.sample_sizes.begin(), schedule.sample_sizes.end(),
                             std::size_t{0});
  }

  ConstraintSet constraints;
  constraints.center.assign(static_cast<std::size_t>(cfg.d), 0.0);
  constraints.l2_radius = schedule.l2_radius(0);
  constraints.l1_radius = schedule.l1_radius(0);

  RngState data_rng(seed, kDataStream);
  QueryLedger ledger;
  ledger.begin_epoch();
  const Band everywhere = Band::all_of();
  std::size_t n = budget;
  int retries = 0;
  Vec w;
  RngState solver_rng = data_rng;  // not consumed by the deterministic solver
  for (;;) {
    const SampleBatch batch = draw_from_band(everywhere, n, world, ledger, data_rng, cfg.draw);
    const SolverReport report =
        minimize_hinge(batch, constraints, schedule.taus[0], cfg.solver, solver_rng);
    const Vec thresholded = hard_threshold(report.iterate, cfg.t);
    if (norm_l2(thresholded) > 0.0) {
      w = normalize(thresholded);
      break;
    }
    if (resolve_zero_iterate(retries) == ZeroIterateAction::abort) {
      throw InternalError("run_baseline_passive: thresholded iterate is zero after retry");
    }
    ++retries;
    n *= 2;
  }

  const ErrorEstimate est = estimate_error(w, world, cfg.estimate, RngState(seed, kEvalStream));

  RunOutput out;
  out.record = base_record(cfg, seed, "passive");
  const EpochCounts totals = ledger.totals();
  out.record.labels_total = totals.queries;
  out.record.unlabeled_total = totals.unlabeled;
  out.record.rejected_total = totals.rejected;
  out.record.err_estimate = est.value;
  out.record.err_stderr = est.std_error;
  out.record.theta_final = angle(w, world.target.u);
  out.record.last_epoch = 0;
  out.record.target_in_set_rate =
      check_target_in_set(world.target, w, 1, schedule) ? 1.0 : 0.0;
  fill_excess(out.record, w, world, cfg, seed, est);
  out.weights = std::move(w);
  out.record.wall_ms = elapsed_ms(start);
  return out;
}

RunOutput run_baseline_fulldim(const ExperimentConfig& cfg, std::uint64_t seed) {
  ExperimentConfig dense = cfg;
  dense.t = dense.d;  // sparsity constraint disabled: threshold keeps everything
  RunOutput out = run_active(dense, seed);
  out.record.algorithm = "fulldim";
  return out;
}

std::vector<RunRecord> run_config(const ExperimentConfig& cfg) {
  std::vector<RunRecord> records;
  for (std::uint64_t seed : cfg.seeds) {
    records.push_back(run_active(cfg, seed).record);
    if (cfg.baselines.passive) records.push_back(run_baseline_passive(cfg, seed).record);
    if (cfg.baselines.fulldim) records.push_back(run_baseline_fulldim(cfg, seed).record);
  }
  sort_records(records);
  return records;
}

namespace {

struct SweepJob {
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  int algorithm = 0;  // 0 active, 1 passive, 2 fulldim
};

RunRecord run_sweep_job(const ExperimentConfig& cell_cfg, const SweepJob& job) {
  const char* const names[3] = {"active", "passive", "fulldim"};
  try {
    switch (job.algorithm) {
      case 0: return run_active(cell_cfg, job.seed).record;
      case 1: return run_baseline_passive(cell_cfg, job.seed).record;
      default: return run_baseline_fulldim(cell_cfg, job.seed).record;
    }
  } catch (const SamplingStarvationError&) {
    RunRecord r = base_record(cell_cfg, job.seed, names[job.algorithm]);
    r.err_estimate = std::nan("");
    r.status = "sampling_starvation";
    return r;
  } catch (const ParameterError&) {
    RunRecord r = base_record(cell_cfg, job.seed, names[job.algorithm]);
    r.err_estimate = std::nan("");
    r.status = "parameter_error";
    return r;
  } catch (const InternalError&) {
    RunRecord r = base_record(cell_cfg, job.seed, names[job.algorithm]);
    r.err_estimate = std::nan("");
    r.status = "internal_error";
    return r;
  } catch (const std::exception&) {
    RunRecord r = base_record(cell_cfg, job.seed, names[job.algorithm]);
    r.err_estimate = std::nan("");
    r.status = "error";
    return r;
  }
}

}  // namespace

std::vector<RunRecord> sweep(const ExperimentConfig& cfg) {
  const std::vector<int> ds = cfg.sweep.d.empty() ? std::vector<int>{cfg.d} : cfg.sweep.d;
  const std::vector<int> ts = cfg.sweep.t.empty() ? std::vector<int>{cfg.t} : cfg.sweep.t;
  const std::vector<double> epsilons =
      cfg.sweep.epsilon.empty() ? std::vector<double>{cfg.epsilon} : cfg.sweep.epsilon;
  const std::vector<NoiseSetting> noises =
      cfg.sweep.noise.empty() ? std::vector<NoiseSetting>{cfg.noise} : cfg.sweep.noise;

  std::vector<ExperimentConfig> cells;
  for (int d : ds) {
    for (int t : ts) {
      for (double epsilon : epsilons) {
        for (const NoiseSetting& noise : noises) {
          ExperimentConfig cell = cfg;
          cell.d = d;
          cell.t = t;
          cell.epsilon = epsilon;
          cell.noise = noise;
          cell.sweep = {};
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  std::vector<SweepJob> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::uint64_t seed : cfg.seeds) {
      jobs.push_back({c, seed, 0});
      if (cfg.baselines.passive) jobs.push_back({c, seed, 1});
      if (cfg.baselines.fulldim) jobs.push_back({c, seed, 2});
    }
  }

  std::vector<RunRecord> records(jobs.size());
  // Cells are independent; failures stay inside their own record. Nested
  // parallel regions in the kernels collapse to serial under the default
  // nesting settings.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    records[j] = run_sweep_job(cells[jobs[j].cell], jobs[j]);
  }
  sort_records(records);
  return records;
}

bool any_failed(const std::vector<RunRecord>& records) {
  return std::any_of(records.begin(), records.end(),
                     [](const RunRecord& r) { return r.status != "ok"; });
}

void sort_records(std::vector<RunRecord>& records) {
  const auto key = [](const RunRecord& r) {
    return std::tuple<const std::string&, int, int, double, double, const std::string&, double,
                      std::uint64_t, const std::string&>(
        r.algorithm, r.d, r.t, r.epsilon, r.delta, r.noise_kind, r.noise_param, r.seed,
        r.config_hash);
  };
  std::sort(records.begin(), records.end(),
            [&key](const RunRecord& a, const RunRecord& b) { return key(a) < key(b); });
}

std::string summarize(const std::vector<RunRecord>& records) {
  std::vector<RunRecord> sorted = records;
  sort_records(sorted);

  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-8s %5s %4s %8s %-22s %5s %10s %10s %10s %8s %6s\n",
                "algo", "d", "t", "eps", "noise", "runs", "err_med", "err_iqr", "labels_med",
                "theta_med", "fails");
  out << buf;

  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    std::vector<double> errs, labels, thetas;
    std::size_t fails = 0;
    const RunRecord& head = sorted[i];
    const auto same_cell = [&head](const RunRecord& r) {
      return r.algorithm == head.algorithm && r.d == head.d && r.t == head.t &&
             r.epsilon == head.epsilon && r.delta == head.delta &&
             r.noise_kind == head.noise_kind && r.noise_param == head.noise_param;
    };
    for (; j < sorted.size() && same_cell(sorted[j]); ++j) {
      if (sorted[j].status == "ok") {
        errs.push_back(sorted[j].err_estimate);
        labels.push_back(static_cast<double>(sorted[j].labels_total));
        thetas.push_back(sorted[j].theta_final);
      } else {
        ++fails;
      }
    }
    const double iqr = percentile_of(errs, 0.75) - percentile_of(errs, 0.25);
    std::snprintf(buf, sizeof(buf), "%-8s %5d %4d %8.4g %-22s %5zu %10.4g %10.4g %10.0f %8.4f %6zu\n",
                  head.algorithm.c_str(), head.d, head.t, head.epsilon,
                  (head.noise_kind + ":" + format_g17(head.noise_param)).c_str(), j - i,
                  median_of(errs), iqr, median_of(labels), median_of(thetas), fails);
    out << buf;
    i = j;
  }
  return out.str();
}

std::vector<TuneRow> tune_constants(const ExperimentConfig& cfg) {
  const auto pick = [](const std::vector<double>& list, double fallback) {
    return list.empty() ? std::vector<double>{fallback} : list;
  };
  const std::vector<double> sample_scales =
      pick(cfg.tune.sample_scale, cfg.constants.sample_scale);
  const std::vector<double> band_scales = pick(cfg.tune.band_scale, cfg.constants.band_scale);
  const std::vector<double> margin_scales =
      pick(cfg.tune.margin_scale, cfg.constants.margin_scale);
  const std::vector<double> angle_ratios = pick(cfg.tune.angle_ratio, cfg.constants.angle_ratio);
  const std::vector<std::uint64_t> seeds = cfg.tune.seeds.empty() ? cfg.seeds : cfg.tune.seeds;
  if (seeds.empty()) throw ParameterError("tune: need at least one seed");

  std::vector<TuneRow> rows;
  for (double sample_scale : sample_scales) {
    for (double band_scale : band_scales) {
      for (double margin_scale : margin_scales) {
        for (double angle_ratio : angle_ratios) {
          ExperimentConfig combo = cfg;
          combo.constants = {sample_scale, band_scale, margin_scale, angle_ratio};
          TuneRow row;
          row.constants = combo.constants;
          const EpochSchedule schedule =
              build_schedule(combo.d, combo.t, combo.epsilon, combo.delta, combo.constants);
          row.labels_total = std::accumulate(schedule.sample_sizes.begin(),
                                             schedule.sample_sizes.end(), std::uint64_t{0});
          std::vector<double> errs, thetas;
          double in_set = 0.0;
          std::size_t successes = 0;
          for (std::uint64_t seed : seeds) {
            const RunOutput out = run_active(combo, seed);
            errs.push_back(out.record.err_estimate);
            thetas.push_back(out.record.theta_final);
            in_set += out.record.target_in_set_rate;
            if (out.record.err_estimate <= combo.epsilon) ++successes;
          }
          row.success_rate = static_cast<double>(successes) / static_cast<double>(seeds.size());
          row.target_in_set_rate = in_set / static_cast<double>(seeds.size());
          row.median_err = median_of(errs);
          row.median_theta = median_of(thetas);
          rows.push_back(row);
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const TuneRow& a, const TuneRow& b) {
    if (a.success_rate != b.success_rate) return a.success_rate > b.success_rate;
    if (a.target_in_set_rate != b.target_in_set_rate) {
      return a.target_in_set_rate > b.target_in_set_rate;
    }
    return a.labels_total < b.labels_total;
  });
  return rows;
}

std::string format_tune_table(const std::vector<TuneRow>& rows) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%10s %10s %12s %11s %9s %9s %10s %10s\n", "sample", "band",
                "margin", "angle", "success", "in_set", "med_err", "labels");
  out << buf;
  for (const TuneRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%10.4g %10.4g %12.4g %11.6g %9.2f %9.2f %10.4g %10llu\n",
                  row.constants.sample_scale, row.constants.band_scale,
                  row.constants.margin_scale, row.constants.angle_ratio, row.success_rate,
                  row.target_in_set_rate, row.median_err,
                  static_cast<unsigned long long>(row.labels_total));
    out << buf;
  }
  if (!rows.empty()) {
    const AlgorithmConstants& c = rows.front().constants;
    out << "recommended: {\"constants\": {\"sample_scale\": " << format_g17(c.sample_scale)
        << ", \"band_scale\": " << format_g17(c.band_scale)
        << ", \"margin_scale\": " << format_g17(c.margin_scale)
        << ", \"angle_ratio\": " << format_g17(c.angle_ratio) << "}}\n";
  }
  return out.str();
}

}  // namespace sparseal
