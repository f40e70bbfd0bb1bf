// Command-line harness: single runs, parameter sweeps, property suites, and
// constant tuning. Exit codes: 0 success, 1 parameter error, 2 completed with
// failures (failed sweep cells or failed property suites), 3 internal error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparseal/checks.hpp"
#include "sparseal/config.hpp"
#include "sparseal/csv.hpp"
#include "sparseal/errors.hpp"
#include "sparseal/harness.hpp"

namespace {

using namespace sparseal;

struct CommonFlags {
  std::string config_path;
  int d = 0;
  int t = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string marginal;
  std::string noise_kind;
  double noise_level = 0.0;
  std::vector<std::uint64_t> seeds;
  std::size_t samples = 0;
  std::string method;
  int solver_iterations = 0;
  double step_scale = 0.0;
  double gap_tolerance = 0.0;
  double sample_scale = 0.0;
  double band_scale = 0.0;
  double margin_scale = 0.0;
  double angle_ratio = 0.0;
  std::uint64_t passive_budget = 0;
  bool passive = false;
  bool fulldim = false;
  bool summary = false;
  std::string output;
};

void add_common_options(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON or TOML config file (CLI flags override it)");
  sub->add_option("-d,--dim", f.d, "ambient dimension");
  sub->add_option("-t,--sparsity", f.t, "target sparsity");
  sub->add_option("--epsilon", f.epsilon, "target error");
  sub->add_option("--delta", f.delta, "failure probability");
  sub->add_option("--marginal", f.marginal, "unlabeled marginal: gaussian or uniform_ball");
  sub->add_option("--noise", f.noise_kind,
                  "noise kind: realizable, adversarial_boundary, adversarial_hashed, "
                  "bounded_constant, bounded_margin_decay");
  sub->add_option("--noise-level", f.noise_level, "noise level (nu or eta)");
  sub->add_option("--seeds", f.seeds, "comma-separated seed list")->delimiter(',');
  sub->add_option("--samples", f.samples, "Monte Carlo evaluation draws");
  sub->add_option("--method", f.method, "error estimator: auto, exact_angle, monte_carlo");
  sub->add_option("--solver-iterations", f.solver_iterations, "subgradient iterations per epoch");
  sub->add_option("--step-scale", f.step_scale, "subgradient step size multiplier");
  sub->add_option("--gap-tolerance", f.gap_tolerance, "solver convergence gap");
  sub->add_option("--sample-scale", f.sample_scale, "epoch sample size constant");
  sub->add_option("--band-scale", f.band_scale, "band width constant");
  sub->add_option("--margin-scale", f.margin_scale, "hinge margin constant");
  sub->add_option("--angle-ratio", f.angle_ratio, "angle-to-disagreement ratio constant");
  sub->add_flag("--passive", f.passive, "also run the passive (unconditioned draw) baseline");
  sub->add_flag("--fulldim", f.fulldim, "also run the dense t=d baseline");
  sub->add_option("--passive-budget", f.passive_budget,
                  "labels for the passive baseline (0 = match the active schedule)");
  sub->add_flag("--summary", f.summary, "print a median/IQR table per cell");
  sub->add_option("-o,--output", f.output, "CSV output path");
}

ExperimentConfig resolve_config(const CLI::App* sub, const CommonFlags& f) {
  ExperimentConfig cfg;
  if (sub->count("--config")) cfg = load_config(f.config_path);
  if (sub->count("--dim")) cfg.d = f.d;
  if (sub->count("--sparsity")) cfg.t = f.t;
  if (sub->count("--epsilon")) cfg.epsilon = f.epsilon;
  if (sub->count("--delta")) cfg.delta = f.delta;
  if (sub->count("--marginal")) {
    if (f.marginal == "gaussian") {
      cfg.marginal = MarginalKind::gaussian;
    } else if (f.marginal == "uniform_ball") {
      cfg.marginal = MarginalKind::uniform_ball;
    } else {
      throw ParameterError("unknown marginal: " + f.marginal);
    }
  }
  if (sub->count("--noise")) cfg.noise.kind = noise_kind_from_string(f.noise_kind);
  if (sub->count("--noise-level")) cfg.noise.level = f.noise_level;
  if (sub->count("--seeds")) cfg.seeds = f.seeds;
  if (sub->count("--samples")) cfg.estimate.samples = f.samples;
  if (sub->count("--method")) cfg.estimate.method = error_method_from_string(f.method);
  if (sub->count("--solver-iterations")) cfg.solver.iterations = f.solver_iterations;
  if (sub->count("--step-scale")) cfg.solver.step_scale = f.step_scale;
  if (sub->count("--gap-tolerance")) cfg.solver.gap_tolerance = f.gap_tolerance;
  if (sub->count("--sample-scale")) cfg.constants.sample_scale = f.sample_scale;
  if (sub->count("--band-scale")) cfg.constants.band_scale = f.band_scale;
  if (sub->count("--margin-scale")) cfg.constants.margin_scale = f.margin_scale;
  if (sub->count("--angle-ratio")) cfg.constants.angle_ratio = f.angle_ratio;
  if (sub->count("--passive")) cfg.baselines.passive = true;
  if (sub->count("--fulldim")) cfg.baselines.fulldim = true;
  if (sub->count("--passive-budget")) cfg.baselines.passive_budget = f.passive_budget;
  if (sub->count("--output")) cfg.output = f.output;
  if (cfg.seeds.empty()) throw ParameterError("seed list is empty");
  return cfg;
}

int do_run(const ExperimentConfig& cfg, bool summary) {
  const std::vector<RunRecord> records = run_config(cfg);
  write_csv(cfg.output, records);
  if (summary) std::fputs(summarize(records).c_str(), stdout);
  std::printf("wrote %zu records to %s\n", records.size(), cfg.output.c_str());
  return 0;
}

int do_sweep(const ExperimentConfig& cfg, bool summary) {
  const std::vector<RunRecord> records = sweep(cfg);
  write_csv(cfg.output, records);
  if (summary) std::fputs(summarize(records).c_str(), stdout);
  std::size_t failed = 0;
  for (const RunRecord& r : records) failed += r.status != "ok" ? 1u : 0u;
  std::printf("wrote %zu records to %s (%zu failed)\n", records.size(), cfg.output.c_str(),
              failed);
  return failed > 0 ? 2 : 0;
}

int do_properties(std::size_t cases, std::size_t draws, std::uint64_t seed) {
  const std::vector<SuiteResult> suites = run_all_checks(cases, draws, seed);
  bool all_passed = true;
  for (const SuiteResult& suite : suites) {
    std::puts(format_suite_line(suite).c_str());
    all_passed = all_passed && suite.passed();
  }
  return all_passed ? 0 : 2;
}

int do_tune(const ExperimentConfig& cfg) {
  const std::vector<TuneRow> rows = tune_constants(cfg);
  std::fputs(format_tune_table(rows).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active learning of sparse halfspaces: runs, sweeps, property suites, tuning"};
  app.require_subcommand(0, 1);

  bool print_defaults = false;
  app.add_flag("--print-default-config", print_defaults,
               "print the default config as JSON and exit");

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run one configuration (all seeds) to CSV");
  add_common_options(run_cmd, run_flags);

  CommonFlags sweep_flags;
  std::vector<int> sweep_d, sweep_t;
  std::vector<double> sweep_epsilon;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a grid of cells (lists x seeds) to CSV");
  add_common_options(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--sweep-d", sweep_d, "dimension list")->delimiter(',');
  sweep_cmd->add_option("--sweep-t", sweep_t, "sparsity list")->delimiter(',');
  sweep_cmd->add_option("--sweep-epsilon", sweep_epsilon, "epsilon list")->delimiter(',');

  std::size_t prop_cases = 10000;
  std::size_t prop_draws = 100000;
  std::uint64_t prop_seed = 1;
  CLI::App* prop_cmd =
      app.add_subcommand("properties", "randomized invariant suites with failure dumps");
  prop_cmd->add_option("--cases", prop_cases, "cases per suite");
  prop_cmd->add_option("--draws", prop_draws, "Monte Carlo draws per statistical case");
  prop_cmd->add_option("--seed", prop_seed, "suite seed");

  CommonFlags tune_flags;
  std::vector<double> tune_sample, tune_band, tune_margin, tune_angle;
  std::vector<std::uint64_t> tune_seeds;
  CLI::App* tune_cmd = app.add_subcommand(
      "tune", "grid-search the algorithm constants; prints ranked rows and a recommendation");
  add_common_options(tune_cmd, tune_flags);
  tune_cmd->add_option("--tune-sample-scale", tune_sample, "sample_scale candidates")
      ->delimiter(',');
  tune_cmd->add_option("--tune-band-scale", tune_band, "band_scale candidates")->delimiter(',');
  tune_cmd->add_option("--tune-margin-scale", tune_margin, "margin_scale candidates")
      ->delimiter(',');
  tune_cmd->add_option("--tune-angle-ratio", tune_angle, "angle_ratio candidates")
      ->delimiter(',');
  tune_cmd->add_option("--tune-seeds", tune_seeds, "seeds used for tuning")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (print_defaults) {
      std::puts(default_config_json().c_str());
      return 0;
    }
    if (app.got_subcommand(run_cmd)) {
      return do_run(resolve_config(run_cmd, run_flags), run_flags.summary);
    }
    if (app.got_subcommand(sweep_cmd)) {
      ExperimentConfig cfg = resolve_config(sweep_cmd, sweep_flags);
      if (sweep_cmd->count("--sweep-d")) cfg.sweep.d = sweep_d;
      if (sweep_cmd->count("--sweep-t")) cfg.sweep.t = sweep_t;
      if (sweep_cmd->count("--sweep-epsilon")) cfg.sweep.epsilon = sweep_epsilon;
      return do_sweep(cfg, sweep_flags.summary);
    }
    if (app.got_subcommand(prop_cmd)) {
      return do_properties(prop_cases, prop_draws, prop_seed);
    }
    if (app.got_subcommand(tune_cmd)) {
      ExperimentConfig cfg = resolve_config(tune_cmd, tune_flags);
      if (tune_cmd->count("--tune-sample-scale")) cfg.tune.sample_scale = tune_sample;
      if (tune_cmd->count("--tune-band-scale")) cfg.tune.band_scale = tune_band;
      if (tune_cmd->count("--tune-margin-scale")) cfg.tune.margin_scale = tune_margin;
      if (tune_cmd->count("--tune-angle-ratio")) cfg.tune.angle_ratio = tune_angle;
      if (tune_cmd->count("--tune-seeds")) cfg.tune.seeds = tune_seeds;
      return do_tune(cfg);
    }
    std::fputs(app.help().c_str(), stdout);
    return 0;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 1;
  } catch (const SamplingStarvationError& e) {
    std::fprintf(stderr, "sampling starvation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
