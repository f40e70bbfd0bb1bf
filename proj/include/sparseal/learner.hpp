#pragma once

#include <vector>

#include "sparseal/band.hpp"
#include "sparseal/solver.hpp"
#include "sparseal/world.hpp"

namespace sparseal {

// Scale knobs for the epoch schedule. All four must be positive; defaults
// were fixed by the `tune` subcommand on the reference workload (d=200, t=5,
// epsilon=0.05, delta=0.1) and are overridable from config.
struct AlgorithmConstants {
  double sample_scale = 0.5;   // multiplies every per-epoch sample size
  double band_scale = 1.0;     // multiplies the sampling band widths
  double margin_scale = 0.25;  // multiplies the per-epoch hinge scales
  double angle_ratio = 3.14159265358979323846;  // angle per unit error; sets the epoch count
};

// Precomputed per-epoch plan. Epochs run k = 0..last_epoch inclusive; epoch 0
// samples the full space and searches the global constraint set, later epochs
// sample a band around the previous iterate and search a shrinking
// neighborhood of it.
struct EpochSchedule {
  int d = 0;
  int t = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  int last_epoch = 0;
  std::vector<std::size_t> sample_sizes;  // labels requested per epoch
  std::vector<double> band_widths;        // sampling band width (entry 0 unused)
  std::vector<double> taus;               // hinge scale per epoch
  std::vector<double> failure_shares;     // per-epoch share of delta; the shares sum to < delta

  // Constraint radii for the set searched at epoch k, in closed form so the
  // set following the final epoch can also be queried.
  double l2_radius(int k) const;
  double l1_radius(int k) const;
};

// Halving schedule: epoch k halves the band width, hinge scale, and
// constraint radii; sample sizes grow only polylogarithmically in d and
// 1/epsilon, scaled by t. last_epoch = ceil(log2(1/(angle_ratio * epsilon)))
// clamped to >= 0.
EpochSchedule build_schedule(int d, int t, double epsilon, double delta,
                             const AlgorithmConstants& constants);

// True when the target direction lies inside the constraint set that epoch
// `k` searches around w_prev (for k >= 1; pass the epoch-(k-1) iterate).
bool check_target_in_set(const SparseTarget& target, const Vec& w_prev, int k,
                         const EpochSchedule& schedule);

// Retry policy for a hard-thresholded iterate that came out identically zero.
enum class ZeroIterateAction { retry_with_doubled_sample, abort };
ZeroIterateAction resolve_zero_iterate(int prior_retries);

struct EpochTrace {
  int epoch = 0;
  Vec weights;                    // unit-norm iterate after the epoch
  double theta_to_target = 0.0;   // angle(weights, u)
  bool target_in_next_set = false;
  double solver_loss = 0.0;
  bool solver_converged = true;
  bool projection_converged = true;
  EpochCounts counts;
};

struct LearnerOptions {
  SolverOptions solver;
  DrawOptions draw;
};

struct LearnerResult {
  Vec weights;  // final unit-norm iterate
  std::vector<EpochTrace> traces;
  QueryLedger ledger;
};

// Runs the full epoch loop against the synthetic world. Throws
// InternalError if an epoch's thresholded iterate is zero twice in a row
// (once retried with a doubled sample).
LearnerResult run_learner(const World& world, const EpochSchedule& schedule,
                          const LearnerOptions& opts, RngState& rng);

}  // namespace sparseal
