#include "sparseal/learner.hpp"

#include <cmath>
#include <string>

#include "sparseal/errors.hpp"

namespace sparseal {

double EpochSchedule::l2_radius(int k) const {
  if (k <= 0) return 1.0;
  return std::ldexp(1.0, -k - 3);  // 2^(-k-3)
}

double EpochSchedule::l1_radius(int k) const {
  if (k <= 0) return std::sqrt(static_cast<double>(t));
  return std::sqrt(2.0 * static_cast<double>(t)) * std::ldexp(1.0, -k - 3);
}

EpochSchedule build_schedule(int d, int t, double epsilon, double delta,
                             const AlgorithmConstants& constants) {
  if (d < 1) throw ParameterError("build_schedule: dimension must be positive");
  if (t < 1 || t > d) throw ParameterError("build_schedule: need 1 <= t <= d");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("build_schedule: epsilon in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("build_schedule: delta in (0,1)");
  if (!(constants.sample_scale > 0.0 && constants.band_scale > 0.0 &&
        constants.margin_scale > 0.0 && constants.angle_ratio > 0.0)) {
    throw ParameterError("build_schedule: constants must be positive");
  }

  EpochSchedule s;
  s.d = d;
  s.t = t;
  s.epsilon = epsilon;
  s.delta = delta;
  s.last_epoch =
      std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / (constants.angle_ratio * epsilon)))));

  for (int k = 0; k <= s.last_epoch; ++k) {
    // Failure budget delta/((k+1)(k+2)); the series telescopes to < delta.
    const double share = delta / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
    const double log_terms = std::log(static_cast<double>(d)) + std::log(1.0 / epsilon) +
                             std::log(1.0 / share);
    const double n = constants.sample_scale * static_cast<double>(t) * std::pow(log_terms, 3.0);
    s.failure_shares.push_back(share);
    s.sample_sizes.push_back(static_cast<std::size_t>(std::ceil(n)));
    s.band_widths.push_back(constants.band_scale * std::ldexp(1.0, -k));
    s.taus.push_back(constants.margin_scale * std::ldexp(1.0, -k));
  }
  return s;
}

bool check_target_in_set(const SparseTarget& target, const Vec& w_prev, int k,
                         const EpochSchedule& schedule) {
  if (k < 1) throw ParameterError("check_target_in_set: defined for epochs k >= 1");
  if (w_prev.size() != target.u.size()) {
    throw ParameterError("check_target_in_set: dimension mismatch");
  }
  double diff2 = 0.0;
  double diff1 = 0.0;
  for (std::size_t i = 0; i < w_prev.size(); ++i) {
    const double s = target.u[i] - w_prev[i];
    diff2 += s * s;
    diff1 += std::abs(s);
  }
  return std::sqrt(diff2) <= schedule.l2_radius(k) && diff1 <= schedule.l1_radius(k);
}

ZeroIterateAction resolve_zero_iterate(int prior_retries) {
  return prior_retries < 1 ? ZeroIterateAction::retry_with_doubled_sample
                           : ZeroIterateAction::abort;
}

LearnerResult run_learner(const World& world, const EpochSchedule& schedule,
                          const LearnerOptions& opts, RngState& rng) {
  const int d = world.marginal.dim;
  if (schedule.d != d) throw ParameterError("run_learner: schedule dimension mismatch");
  if (static_cast<int>(world.target.u.size()) != d) {
    throw ParameterError("run_learner: target dimension mismatch");
  }

  LearnerResult result;
  Vec w_prev;
  for (int k = 0; k <= schedule.last_epoch; ++k) {
    result.ledger.begin_epoch();
    const Band band = (k == 0) ? Band::all_of() : Band::slab(w_prev, schedule.band_widths[k]);
    ConstraintSet constraints;
    if (k == 0) {
      constraints.center.assign(static_cast<std::size_t>(d), 0.0);
    } else {
      constraints.center = w_prev;
    }
    constraints.l2_radius = schedule.l2_radius(k);
    constraints.l1_radius = schedule.l1_radius(k);

    std::size_t n = schedule.sample_sizes[static_cast<std::size_t>(k)];
    const double tau = schedule.taus[static_cast<std::size_t>(k)];
    int retries = 0;
    Vec w_k;
    SolverReport report;
    for (;;) {
      const SampleBatch batch = draw_from_band(band, n, world, result.ledger, rng, opts.draw);
      report = minimize_hinge(batch, constraints, tau, opts.solver, rng);
      const Vec thresholded = hard_threshold(report.iterate, schedule.t);
      if (norm_l2(thresholded) > 0.0) {
        w_k = normalize(thresholded);
        break;
      }
      if (resolve_zero_iterate(retries) == ZeroIterateAction::abort) {
        throw InternalError("run_learner: thresholded iterate is zero after retry at epoch " +
                            std::to_string(k));
      }
      ++retries;
      n *= 2;
    }

    EpochTrace trace;
    trace.epoch = k;
    trace.weights = w_k;
    trace.theta_to_target = angle(w_k, world.target.u);
    trace.target_in_next_set = check_target_in_set(world.target, w_k, k + 1, schedule);
    trace.solver_loss = report.final_loss;
    trace.solver_converged = report.converged;
    trace.projection_converged = report.projection_converged;
    trace.counts = result.ledger.epochs[static_cast<std::size_t>(k)];
    result.traces.push_back(std::move(trace));

    w_prev = std::move(w_k);
  }
  result.weights = std::move(w_prev);
  return result;
}

}  // namespace sparseal
