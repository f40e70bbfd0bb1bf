#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sparseal/band.hpp"
#include "sparseal/errors.hpp"
#include "sparseal/kernels.hpp"
#include "sparseal/rng.hpp"
#include "sparseal/solver.hpp"

using namespace sparseal;

namespace {

SampleBatch gaussian_batch(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngState rng(seed, 80);
  SampleBatch batch;
  batch.dim = d;
  batch.reserve(n);
  Vec x(d);
  for (std::size_t i = 0; i < n; ++i) {
    rng.fill_gaussian(x);
    batch.append(x, (rng.next_u64() & 1) ? 1 : -1);
  }
  return batch;
}

// Direct mean hinge, written independently of the library kernels.
double plain_hinge(const SampleBatch& batch, const Vec& w, double tau) {
  double total = 0.0;
  for (std::size_t i = 0; i < batch.count; ++i) {
    double margin = 0.0;
    for (std::size_t j = 0; j < batch.dim; ++j) margin += w[j] * batch.xs[i * batch.dim + j];
    total += std::max(0.0, 1.0 - batch.y(i) * margin / tau);
  }
  return total / static_cast<double>(batch.count);
}

}  // namespace

TEST_CASE("empirical_hinge equals the mean of single-example losses") {
  const SampleBatch batch = gaussian_batch(257, 4, 91);
  RngState rng(92, 80);
  Vec w(4);
  rng.fill_gaussian(w);
  const double tau = 0.4;

  double mean = 0.0;
  for (std::size_t i = 0; i < batch.count; ++i) {
    mean += hinge_loss(w, batch.x(i), batch.y(i), tau);
  }
  mean /= static_cast<double>(batch.count);

  CHECK(empirical_hinge(batch, w, tau) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(empirical_hinge_serial(batch, w, tau) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("empirical_hinge hand values") {
  SampleBatch batch;
  batch.dim = 2;
  batch.append(Vec{1.0, 0.0}, 1);   // margin tau: loss 0
  batch.append(Vec{0.0, 1.0}, 1);   // margin 0: loss 1
  batch.append(Vec{-1.0, 0.0}, 1);  // margin -tau: loss 2
  const Vec w{1.0, 0.0};
  CHECK(empirical_hinge(batch, w, 1.0) == 1.0);
}

TEST_CASE("empirical_hinge validates inputs") {
  SampleBatch empty;
  empty.dim = 2;
  const Vec w{1.0, 0.0};
  CHECK_THROWS_AS((void)empirical_hinge(empty, w, 1.0), ParameterError);

  SampleBatch batch;
  batch.dim = 2;
  batch.append(Vec{1.0, 0.0}, 1);
  CHECK_THROWS_AS((void)empirical_hinge(batch, w, 0.0), ParameterError);
  CHECK_THROWS_AS((void)empirical_hinge(batch, Vec{1.0}, 1.0), ParameterError);
}

TEST_CASE("scaling x and tau together leaves the objective unchanged") {
  const SampleBatch batch = gaussian_batch(400, 5, 93);
  RngState rng(94, 80);
  Vec w(5);
  rng.fill_gaussian(w);
  const double tau = 0.3;
  const double base = empirical_hinge(batch, w, tau);

  // Power-of-two scale: every intermediate scales exactly, so the losses are
  // bitwise equal.
  SampleBatch scaled4 = batch;
  for (double& v : scaled4.xs) v *= 4.0;
  CHECK(empirical_hinge(scaled4, w, tau * 4.0) == base);

  // Generic scale: equal up to roundoff.
  SampleBatch scaled3 = batch;
  for (double& v : scaled3.xs) v *= 3.0;
  CHECK(empirical_hinge(scaled3, w, tau * 3.0) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("hinge_loss_grad matches central differences away from kinks") {
  const SampleBatch batch = gaussian_batch(60, 5, 95);
  RngState rng(96, 80);
  Vec w(5);
  rng.fill_gaussian(w);
  const double tau = 0.7;

  Vec grad(5);
  std::vector<double> scratch;
  (void)hinge_loss_grad(batch, w, tau, grad, scratch);

  const double h = 1e-6;
  for (std::size_t j = 0; j < 5; ++j) {
    Vec wp = w, wm = w;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (plain_hinge(batch, wp, tau) - plain_hinge(batch, wm, tau)) / (2.0 * h);
    CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("gradient takes the zero branch exactly at the kink") {
  SampleBatch batch;
  batch.dim = 2;
  batch.append(Vec{1.0, 0.0}, 1);  // margin exactly tau
  const Vec w{1.0, 0.0};
  Vec grad(2);
  std::vector<double> scratch;
  const double loss = hinge_loss_grad(batch, w, 1.0, grad, scratch);
  CHECK(loss == 0.0);
  CHECK(grad == Vec{0.0, 0.0});
}

TEST_CASE("minimize_hinge returns the center when it already fits") {
  SampleBatch batch;
  batch.dim = 2;
  batch.append(Vec{2.0, 0.0}, 1);
  batch.append(Vec{-3.0, 0.1}, -1);
  ConstraintSet constraints;
  constraints.center = Vec{1.0, 0.0};
  constraints.l2_radius = 0.5;
  constraints.l1_radius = 0.5;
  RngState rng(97, 80);
  const SolverReport report = minimize_hinge(batch, constraints, 0.5, {}, rng);
  CHECK(report.final_loss == 0.0);
  CHECK(report.iterate == constraints.center);
  CHECK(report.converged);
}

TEST_CASE("minimize_hinge validates its parameters") {
  const SampleBatch batch = gaussian_batch(10, 3, 98);
  ConstraintSet constraints;
  constraints.center = Vec(3, 0.0);
  RngState rng(99, 80);

  SampleBatch empty;
  empty.dim = 3;
  CHECK_THROWS_AS((void)minimize_hinge(empty, constraints, 0.5, {}, rng), ParameterError);

  SolverOptions bad_iters;
  bad_iters.iterations = 0;
  CHECK_THROWS_AS((void)minimize_hinge(batch, constraints, 0.5, bad_iters, rng), ParameterError);

  ConstraintSet bad_radius = constraints;
  bad_radius.l2_radius = 0.0;
  CHECK_THROWS_AS((void)minimize_hinge(batch, bad_radius, 0.5, {}, rng), ParameterError);

  // An l1 radius below the l2 radius cannot arise from the epoch schedule and
  // is rejected rather than silently shrinking the feasible set.
  ConstraintSet crossed = constraints;
  crossed.l2_radius = 1.0;
  crossed.l1_radius = 0.5;
  CHECK_THROWS_AS((void)minimize_hinge(batch, crossed, 0.5, {}, rng), ParameterError);

  CHECK_THROWS_AS((void)minimize_hinge(batch, constraints, -1.0, {}, rng), ParameterError);
}

TEST_CASE("minimize_hinge stays feasible") {
  RngState rng(100, 80);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + rng.next_u64() % 6;
    const SampleBatch batch = gaussian_batch(200, d, 101 + static_cast<std::uint64_t>(trial));
    ConstraintSet constraints;
    constraints.center = Vec(d, 0.0);
    rng.fill_gaussian(constraints.center);
    for (double& c : constraints.center) c *= 0.2;
    constraints.l2_radius = 0.3 + rng.next_unit();
    constraints.l1_radius = constraints.l2_radius * (1.0 + rng.next_unit());

    SolverOptions opts;
    opts.iterations = 300;
    RngState solver_rng(1, 80);
    const SolverReport report = minimize_hinge(batch, constraints, 0.2, opts, solver_rng);

    Vec diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = report.iterate[i] - constraints.center[i];
    CHECK(norm_l2(diff) <= constraints.l2_radius * (1.0 + 1e-6));
    CHECK(norm_l1(diff) <= constraints.l1_radius * (1.0 + 1e-6));
    CHECK(all_finite(report.iterate));
  }
}

TEST_CASE("minimize_hinge matches a dense grid search on small instances") {
  RngState rng(102, 80);
  for (int trial = 0; trial < 3; ++trial) {
    SampleBatch batch;
    batch.dim = 2;
    Vec x(2);
    for (int i = 0; i < 5; ++i) {
      rng.fill_gaussian(x);
      batch.append(x, (rng.next_u64() & 1) ? 1 : -1);
    }
    ConstraintSet constraints;
    constraints.center = Vec{0.0, 0.0};
    constraints.l2_radius = 0.8;
    constraints.l1_radius = 1.0;
    const double tau = 0.5;

    SolverOptions opts;
    opts.iterations = 4000;
    RngState solver_rng(2, 80);
    const SolverReport report = minimize_hinge(batch, constraints, tau, opts, solver_rng);

    double best = 1e300;
    const int steps = 200;
    for (int a = -steps; a <= steps; ++a) {
      for (int b = -steps; b <= steps; ++b) {
        Vec z{constraints.l2_radius * a / steps, constraints.l2_radius * b / steps};
        if (std::hypot(z[0], z[1]) > constraints.l2_radius) continue;
        if (std::abs(z[0]) + std::abs(z[1]) > constraints.l1_radius) continue;
        best = std::min(best, plain_hinge(batch, z, tau));
      }
    }
    CHECK(report.final_loss <= best + 1e-3);
  }
}

TEST_CASE("doubling the iteration budget never raises the loss meaningfully") {
  RngState rng(103, 80);
  for (int trial = 0; trial < 5; ++trial) {
    const SampleBatch batch = gaussian_batch(300, 4, 104 + static_cast<std::uint64_t>(trial));
    ConstraintSet constraints;
    constraints.center = Vec(4, 0.0);
    constraints.l2_radius = 1.0;
    constraints.l1_radius = 1.5;
    const double tau = 0.3;

    SolverOptions opts;
    opts.iterations = 200;
    RngState r1(3, 80), r2(3, 80);
    const double loss1 = minimize_hinge(batch, constraints, tau, opts, r1).final_loss;
    opts.iterations = 400;
    const double loss2 = minimize_hinge(batch, constraints, tau, opts, r2).final_loss;
    CHECK(loss2 <= loss1 + opts.gap_tolerance);
  }
}

TEST_CASE("loss trace of the running answer is non-increasing up to tolerance jitter") {
  const SampleBatch batch = gaussian_batch(500, 6, 105);
  ConstraintSet constraints;
  constraints.center = Vec(6, 0.0);
  constraints.l2_radius = 1.0;
  constraints.l1_radius = 2.0;

  SolverOptions opts;
  opts.iterations = 1000;
  opts.keep_trace = true;
  RngState rng(4, 80);
  const SolverReport report = minimize_hinge(batch, constraints, 0.25, opts, rng);
  REQUIRE(report.loss_trace.size() > 2);
  for (std::size_t i = 0; i + 1 < report.loss_trace.size(); ++i) {
    CHECK(report.loss_trace[i + 1] <= report.loss_trace[i] + opts.gap_tolerance);
  }
  CHECK(report.final_loss <= report.loss_trace.front() + opts.gap_tolerance);
}

TEST_CASE("minimize_hinge is deterministic") {
  const SampleBatch batch = gaussian_batch(250, 5, 106);
  ConstraintSet constraints;
  constraints.center = Vec(5, 0.0);
  constraints.l2_radius = 1.0;
  constraints.l1_radius = 1.8;
  SolverOptions opts;
  opts.iterations = 250;

  RngState r1(5, 80), r2(5, 80);
  const SolverReport a = minimize_hinge(batch, constraints, 0.4, opts, r1);
  const SolverReport b = minimize_hinge(batch, constraints, 0.4, opts, r2);
  CHECK(a.iterate == b.iterate);
  CHECK(a.final_loss == b.final_loss);
  CHECK(a.converged == b.converged);
}

TEST_CASE("solver scale consistency carries through minimization") {
  // Scaling x and tau by a power of two rescales nothing in the objective,
  // so the minimizer and loss agree bitwise with the unscaled run.
  const SampleBatch batch = gaussian_batch(150, 3, 107);
  SampleBatch scaled = batch;
  for (double& v : scaled.xs) v *= 2.0;

  ConstraintSet constraints;
  constraints.center = Vec(3, 0.0);
  constraints.l2_radius = 0.9;
  constraints.l1_radius = 1.2;
  SolverOptions opts;
  opts.iterations = 300;

  RngState r1(6, 80), r2(6, 80);
  const SolverReport a = minimize_hinge(batch, constraints, 0.5, opts, r1);
  const SolverReport b = minimize_hinge(scaled, constraints, 1.0, opts, r2);
  CHECK(a.final_loss == b.final_loss);
  CHECK(a.iterate == b.iterate);
}
