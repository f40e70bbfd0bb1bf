// Timings for the OpenMP kernels against their serial reference versions.
// The parallel versions use fixed-slot blocked reductions, which makes them
// bit-identical across thread counts but not to the plain-order serial loop:
// those agree to rounding (checked at 1e-12 relative). The Monte Carlo
// disagreement counter reduces integers, so it must match exactly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "sparseal/band.hpp"
#include "sparseal/parallel.hpp"
#include "sparseal/rng.hpp"
#include "sparseal/solver.hpp"
#include "sparseal/world.hpp"

using namespace sparseal;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    body();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    best = std::min(best, ms);
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, const std::string& verdict) {
  std::printf("%-28s serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, verdict.c_str());
}

std::string tolerance_verdict(double rel_diff) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "rel diff %.2e", rel_diff);
  return rel_diff <= 1e-12 ? std::string(buf) : std::string(buf) + "  MISMATCH";
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

SampleBatch make_batch(std::size_t n, int d, RngState& rng) {
  SampleBatch batch;
  batch.dim = d;
  batch.reserve(n);
  Vec x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    rng.fill_gaussian(x);
    batch.append(x, rng.next_unit() < 0.5 ? 1 : -1);
  }
  return batch;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 200000;
  int d = 200;
  std::size_t mc_draws = 2000000;
  int reps = 5;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--n") == 0 && i + 1 < argc) n = std::stoull(argv[++i]);
    else if (std::strcmp(argv[i], "--d") == 0 && i + 1 < argc) d = std::stoi(argv[++i]);
    else if (std::strcmp(argv[i], "--draws") == 0 && i + 1 < argc) mc_draws = std::stoull(argv[++i]);
    else if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) reps = std::stoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--n N] [--d D] [--draws M] [--reps R]\n", argv[0]);
      return 1;
    }
  }

  std::printf("threads=%d  n=%zu  d=%d  mc_draws=%zu  reps=%d (best-of)\n", max_threads(), n, d,
              mc_draws, reps);

  RngState rng(42, 7);
  const SampleBatch batch = make_batch(n, d, rng);
  Vec w(static_cast<std::size_t>(d));
  rng.fill_gaussian(w);
  w = normalize(w);
  const double tau = 0.25;

  {
    double serial_loss = 0.0, parallel_loss = 0.0;
    const double ts = time_best_of(reps, [&] { serial_loss = empirical_hinge_serial(batch, w, tau); });
    const double tp = time_best_of(reps, [&] { parallel_loss = empirical_hinge(batch, w, tau); });
    report("empirical_hinge", ts, tp, tolerance_verdict(rel_diff(serial_loss, parallel_loss)));
  }

  {
    Vec grad_s(static_cast<std::size_t>(d)), grad_p(static_cast<std::size_t>(d));
    std::vector<double> scratch;
    double loss_s = 0.0, loss_p = 0.0;
    const double ts =
        time_best_of(reps, [&] { loss_s = hinge_loss_grad_serial(batch, w, tau, grad_s); });
    const double tp =
        time_best_of(reps, [&] { loss_p = hinge_loss_grad(batch, w, tau, grad_p, scratch); });
    double worst = rel_diff(loss_s, loss_p);
    for (std::size_t j = 0; j < grad_s.size(); ++j) {
      worst = std::max(worst, rel_diff(grad_s[j], grad_p[j]));
    }
    report("hinge_loss_grad", ts, tp, tolerance_verdict(worst));
  }

  {
    const MarginalDistribution marginal{MarginalKind::gaussian, d};
    RngState target_rng(42, 0);
    const SparseTarget target = sample_target(d, std::max(1, d / 20), target_rng);
    Vec v = w;
    v[0] += 0.3;
    v = normalize(v);
    const RngState base(42, 3);
    double rate_s = 0.0, rate_p = 0.0;
    const double ts = time_best_of(
        reps, [&] { rate_s = disagreement_rate_mc_serial(target.u, v, marginal, mc_draws, base); });
    const double tp = time_best_of(
        reps, [&] { rate_p = disagreement_rate_mc(target.u, v, marginal, mc_draws, base); });
    report("disagreement_rate_mc", ts, tp,
           rate_s == rate_p ? "bit-identical" : "MISMATCH (integer counts must agree)");
  }

  return 0;
}
