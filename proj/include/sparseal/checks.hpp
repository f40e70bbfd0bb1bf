#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparseal/rng.hpp"

namespace sparseal {

// Outcome of one randomized property suite. `worst` is the suite's largest
// observed violation measure (slack, deviation, or sigma multiple; suites
// document theirs), useful even when everything passed.
struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double elapsed_s = 0.0;
  std::vector<std::string> failure_notes;  // first few offending cases

  bool passed() const { return failures == 0; }
};

// Kernel property suites. Each runs `cases` randomized instances seeded from
// `seed`; oracles are independent re-derivations (brute force enumeration,
// direct arithmetic), never calls back into the code under test.
SuiteResult check_hard_threshold_optimality(std::size_t cases, std::uint64_t seed);
SuiteResult check_normalize_contraction(std::size_t cases, std::uint64_t seed);
SuiteResult check_angle_distance_bound(std::size_t cases, std::uint64_t seed);
SuiteResult check_projection_feasibility(std::size_t cases, std::uint64_t seed);
SuiteResult check_hinge_dominates_01(std::size_t cases, std::uint64_t seed);
SuiteResult check_angle_scale_invariance(std::size_t cases, std::uint64_t seed);

// d=3 intersection projection against a refining grid-plus-ray search over
// the feasible set (worst = largest l2 gap; tolerance 1e-6).
SuiteResult check_intersection_against_grid(std::size_t instances, std::uint64_t seed);

// Monte Carlo disagreement of random pairs against angle/pi under the
// gaussian marginal (worst = largest |deviation| in sigma units; 3 allowed).
SuiteResult check_disagreement_angle(std::size_t pairs, std::size_t draws, std::uint64_t seed);

// Gaussian band masses: Monte Carlo measurement <= 9b and equal to the
// closed form within 3 sigma (worst = largest sigma multiple).
SuiteResult check_band_mass_gaussian(std::size_t cases, std::size_t draws, std::uint64_t seed);

// Analytic band-mass bounds min(C/9, C*b) <= mass <= 9b with C = 1/4 across
// both marginals and a spread of dimensions (worst = largest bound slack).
SuiteResult check_band_mass_bounds(std::size_t cases, std::uint64_t seed);

// Monte Carlo band mass against the analytic value for the uniform-ball
// marginal (3 sigma; validates the quadrature path end to end).
SuiteResult check_band_mass_ball(std::size_t cases, std::size_t draws, std::uint64_t seed);

std::vector<SuiteResult> run_all_checks(std::size_t cases, std::size_t draws, std::uint64_t seed);
std::string format_suite_line(const SuiteResult& result);

}  // namespace sparseal
