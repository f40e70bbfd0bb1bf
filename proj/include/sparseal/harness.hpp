#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sparseal/learner.hpp"

namespace sparseal {

enum class ErrorMethod { automatic, exact_angle, monte_carlo };
const char* to_string(ErrorMethod method);
ErrorMethod error_method_from_string(const std::string& name);

struct ErrorEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EstimateOptions {
  ErrorMethod method = ErrorMethod::automatic;
  std::size_t samples = 100000;
};

// err(w) = P(sign(w.x) != y). exact_angle uses the identity
// err = angle(w, u) / pi, exact for rotation-invariant marginals with clean
// labels; requesting it under a noise model throws ParameterError.
// monte_carlo draws `samples` fresh labeled examples (one rng substream per
// draw, so the estimate is exactly reproducible and thread-invariant) and
// reports the binomial standard error. automatic picks exact_angle whenever
// it is valid.
ErrorEstimate estimate_error(const Vec& w, const World& world, const EstimateOptions& opts,
                             const RngState& base);

// Paired Monte Carlo estimate of err(w) - err(u). Both hypotheses are scored
// on the same labeled draws (one substream per draw, shared), so the common
// label noise cancels exactly and the standard error reflects only the
// disagreement region. Meaningful when sign(u.x) is Bayes-optimal, i.e. for
// the realizable and bounded noise kinds; callers skip it for adversarial
// noise, where the best-in-class error is not identifiable.
ErrorEstimate estimate_excess_error(const Vec& w, const World& world, std::size_t samples,
                                    const RngState& base);

struct NoiseSetting {
  NoiseKind kind = NoiseKind::realizable;
  double level = 0.0;
};

struct BaselineToggles {
  bool passive = false;
  bool fulldim = false;
  std::uint64_t passive_budget = 0;  // 0 = match the active schedule's total labels
};

struct SweepLists {
  std::vector<int> d;
  std::vector<int> t;
  std::vector<double> epsilon;
  std::vector<NoiseSetting> noise;

  bool empty() const { return d.empty() && t.empty() && epsilon.empty() && noise.empty(); }
};

struct TuneLists {
  std::vector<double> sample_scale;
  std::vector<double> band_scale;
  std::vector<double> margin_scale;
  std::vector<double> angle_ratio;
  std::vector<std::uint64_t> seeds;
};

struct ExperimentConfig {
  int d = 200;
  int t = 5;
  double epsilon = 0.05;
  double delta = 0.1;
  MarginalKind marginal = MarginalKind::gaussian;
  NoiseSetting noise;
  AlgorithmConstants constants;
  SolverOptions solver;
  DrawOptions draw;
  EstimateOptions estimate;
  std::vector<std::uint64_t> seeds{1};
  BaselineToggles baselines;
  std::string output = "runs.csv";
  SweepLists sweep;
  TuneLists tune;
};

// One output row; mirrors the CSV schema exactly (see csv.hpp).
struct RunRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  int d = 0;
  int t = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string noise_kind;
  double noise_param = 0.0;
  std::string algorithm;  // "active", "passive", or "fulldim"
  std::uint64_t labels_total = 0;
  std::uint64_t unlabeled_total = 0;
  std::uint64_t rejected_total = 0;
  double err_estimate = 0.0;
  double err_stderr = 0.0;
  double theta_final = 0.0;
  int last_epoch = 0;            // CSV column "k0"
  double wall_ms = 0.0;
  double target_in_set_rate = 0.0;  // CSV column "invariant_u_in_W_rate"
  std::string status = "ok";

  // In-memory only (not a CSV column): err(w) - err(u) when sign(u.x) is
  // Bayes-optimal for the configured noise, NaN otherwise.
  double excess_error = std::numeric_limits<double>::quiet_NaN();
};

struct RunOutput {
  RunRecord record;
  Vec weights;
  std::vector<EpochTrace> traces;
};

// Hash of the resolved cell parameters (everything that shapes a single run
// except the seed and the algorithm choice). Stable across processes.
std::string config_hash_hex(const ExperimentConfig& cfg);

RunOutput run_active(const ExperimentConfig& cfg, std::uint64_t seed);
// Single-shot hinge fit over the epoch-0 constraint set on unlabeled-pool
// samples, same label budget as the active schedule unless overridden.
RunOutput run_baseline_passive(const ExperimentConfig& cfg, std::uint64_t seed);
// The active learner with sparsity disabled (t = d).
RunOutput run_baseline_fulldim(const ExperimentConfig& cfg, std::uint64_t seed);

// All records for one cell: active plus any toggled baselines, every seed.
// Exceptions propagate (the CLI maps them to exit codes).
std::vector<RunRecord> run_config(const ExperimentConfig& cfg);

// Grid expansion over the sweep lists (empty list = the scalar field).
// Cells run independently; a failed run yields a record with its status set
// to the failure tag instead of aborting the sweep.
std::vector<RunRecord> sweep(const ExperimentConfig& cfg);

bool any_failed(const std::vector<RunRecord>& records);

// Deterministic order for output files: every key field participates, so
// equal-config reruns produce identical row order.
void sort_records(std::vector<RunRecord>& records);

// Median/IQR table of err, labels, and final angle grouped by cell.
std::string summarize(const std::vector<RunRecord>& records);

struct TuneRow {
  AlgorithmConstants constants;
  double success_rate = 0.0;       // fraction of seeds with err <= epsilon
  double target_in_set_rate = 0.0;
  double median_err = 0.0;
  double median_theta = 0.0;
  std::uint64_t labels_total = 0;  // per seed (schedule is seed-independent)
};

// Grid search over the tune lists on the base cell. Rows are ranked best
// first: success rate desc, then invariant rate desc, then labels asc.
std::vector<TuneRow> tune_constants(const ExperimentConfig& cfg);
std::string format_tune_table(const std::vector<TuneRow>& rows);

}  // namespace sparseal
