#include "sparseal/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparseal/errors.hpp"
#include "sparseal/parallel.hpp"

namespace sparseal {

namespace {

void validate_batch(const SampleBatch& batch, std::span<const double> w, double tau) {
  if (batch.count == 0) throw ParameterError("hinge solver: empty sample");
  if (w.size() != batch.dim) throw ParameterError("hinge solver: weight dimension mismatch");
  if (!(tau > 0.0)) throw ParameterError("hinge solver: tau must be positive");
}

}  // namespace

double empirical_hinge(const SampleBatch& batch, std::span<const double> w, double tau) {
  validate_batch(batch, w, tau);
  const double* xs = batch.xs.data();
  const std::size_t d = batch.dim;
  const double total = blocked_sum(batch.count, [&](std::size_t i) {
    const double m = dot(w, {xs + i * d, d});
    return std::max(0.0, 1.0 - static_cast<double>(batch.ys[i]) * m / tau);
  });
  return total / static_cast<double>(batch.count);
}

double empirical_hinge_serial(const SampleBatch& batch, std::span<const double> w, double tau) {
  validate_batch(batch, w, tau);
  double total = 0.0;
  for (std::size_t i = 0; i < batch.count; ++i) {
    total += std::max(0.0, 1.0 - static_cast<double>(batch.ys[i]) * dot(w, batch.x(i)) / tau);
  }
  return total / static_cast<double>(batch.count);
}

double hinge_loss_grad(const SampleBatch& batch, std::span<const double> w, double tau,
                       std::span<double> grad, std::vector<double>& scratch) {
  validate_batch(batch, w, tau);
  if (grad.size() != batch.dim) throw ParameterError("hinge solver: grad dimension mismatch");

  const std::size_t d = batch.dim;
  const std::size_t stride = d + 1;  // per-slot block: [loss, grad...]
  const double* xs = batch.xs.data();
  const std::int8_t* ys = batch.ys.data();
  scratch.assign(static_cast<std::size_t>(kReduceSlots) * stride, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < kReduceSlots; ++s) {
    double* blk = scratch.data() + static_cast<std::size_t>(s) * stride;
    const std::size_t hi = slot_begin(batch.count, s + 1);
    for (std::size_t i = slot_begin(batch.count, s); i < hi; ++i) {
      const double* xi = xs + i * d;
      const double y = static_cast<double>(ys[i]);
      const double arg = 1.0 - y * dot(w, {xi, d}) / tau;
      // Kink (arg == 0) takes the zero branch: satisfied points never push.
      if (arg > 0.0) {
        blk[0] += arg;
        const double coef = -y / tau;
        for (std::size_t j = 0; j < d; ++j) blk[1 + j] += coef * xi[j];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(batch.count);
  double loss = 0.0;
  for (int s = 0; s < kReduceSlots; ++s) loss += scratch[static_cast<std::size_t>(s) * stride];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (int s = 0; s < kReduceSlots; ++s) {
      acc += scratch[static_cast<std::size_t>(s) * stride + 1 + j];
    }
    grad[j] = acc * inv_n;
  }
  return loss * inv_n;
}

double hinge_loss_grad_serial(const SampleBatch& batch, std::span<const double> w, double tau,
                              std::span<double> grad) {
  validate_batch(batch, w, tau);
  if (grad.size() != batch.dim) throw ParameterError("hinge solver: grad dimension mismatch");

  const std::size_t d = batch.dim;
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.count; ++i) {
    const double y = static_cast<double>(batch.ys[i]);
    const double arg = 1.0 - y * dot(w, batch.x(i)) / tau;
    if (arg > 0.0) {
      loss += arg;
      const double coef = -y / tau;
      const double* xi = batch.xs.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) grad[j] += coef * xi[j];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(batch.count);
  for (std::size_t j = 0; j < d; ++j) grad[j] *= inv_n;
  return loss * inv_n;
}

SolverReport minimize_hinge(const SampleBatch& batch, const ConstraintSet& constraints, double tau,
                            const SolverOptions& opts, RngState& rng) {
  (void)rng;
  validate_batch(batch, constraints.center, tau);
  if (!(constraints.l2_radius > 0.0) || !(constraints.l1_radius > 0.0)) {
    throw ParameterError("minimize_hinge: constraint radii must be positive");
  }
  if (constraints.l1_radius < constraints.l2_radius) {
    throw ParameterError("minimize_hinge: l1 radius below l2 radius leaves the l2 ball unreachable");
  }
  if (opts.iterations < 1) throw ParameterError("minimize_hinge: need at least one iteration");

  const std::size_t d = batch.dim;
  const Ball l2_ball = constraints.l2_ball();
  const Ball l1_ball = constraints.l1_ball();
  const int T = opts.iterations;
  const int trace_every = std::max(1, T / 64);

  SolverReport report;
  report.iterations = T;

  Vec w = constraints.center;  // distance zero from the center: always feasible
  Vec best_w = w;
  double best_loss = std::numeric_limits<double>::infinity();
  Vec grad(d, 0.0);
  Vec avg_acc(d, 0.0);
  std::size_t avg_n = 0;
  std::vector<double> scratch;

  const auto current_choice_loss = [&]() {
    if (avg_n == 0) return best_loss;
    Vec avg(d);
    for (std::size_t j = 0; j < d; ++j) avg[j] = avg_acc[j] / static_cast<double>(avg_n);
    return std::min(best_loss, empirical_hinge(batch, avg, tau));
  };

  for (int i = 1; i <= T; ++i) {
    const double loss = hinge_loss_grad(batch, w, tau, grad, scratch);
    if (loss < best_loss) {
      best_loss = loss;
      best_w = w;
    }
    if (best_loss == 0.0) {
      // Nonnegative objective: the best visited point is a global minimizer.
      if (opts.keep_trace) report.loss_trace.push_back(0.0);
      report.iterate = std::move(best_w);
      report.final_loss = 0.0;
      report.converged = true;
      return report;
    }

    const double step = opts.step_scale * constraints.l2_radius / std::sqrt(static_cast<double>(i));
    for (std::size_t j = 0; j < d; ++j) w[j] -= step * grad[j];
    ProjectionResult proj = project_intersection(w, l2_ball, l1_ball, opts.projection);
    report.projection_converged = report.projection_converged && proj.converged;
    w = std::move(proj.point);

    if (i > T / 2) {
      for (std::size_t j = 0; j < d; ++j) avg_acc[j] += w[j];
      ++avg_n;
    }
    if (opts.keep_trace && (i % trace_every == 0 || i == T)) {
      report.loss_trace.push_back(current_choice_loss());
    }
  }

  Vec avg(d);
  for (std::size_t j = 0; j < d; ++j) avg[j] = avg_acc[j] / static_cast<double>(avg_n);
  const double avg_loss = empirical_hinge(batch, avg, tau);
  report.converged = avg_loss - best_loss <= opts.gap_tolerance;
  if (avg_loss <= best_loss) {
    report.iterate = std::move(avg);
    report.final_loss = avg_loss;
  } else {
    report.iterate = std::move(best_w);
    report.final_loss = best_loss;
  }
  return report;
}

}  // namespace sparseal
