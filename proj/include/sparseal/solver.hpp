#pragma once

#include <vector>

#include "sparseal/band.hpp"
#include "sparseal/kernels.hpp"
#include "sparseal/rng.hpp"

namespace sparseal {

// Feasible region {w : ||w - center||_2 <= l2_radius, ||w - center||_1 <= l1_radius}.
struct ConstraintSet {
  Vec center;
  double l2_radius = 1.0;
  double l1_radius = 1.0;

  Ball l2_ball() const { return Ball{center, l2_radius, NormKind::l2}; }
  Ball l1_ball() const { return Ball{center, l1_radius, NormKind::l1}; }
};

struct SolverOptions {
  int iterations = 2000;
  double gap_tolerance = 1e-4;
  // Step i is step_scale * l2_radius / sqrt(i); the scale-free classical
  // schedule for a constraint set of that diameter.
  double step_scale = 1.0;
  bool keep_trace = false;
  DykstraOptions projection;
};

struct SolverReport {
  Vec iterate;
  int iterations = 0;
  double final_loss = 0.0;           // empirical mean hinge at `iterate`
  std::vector<double> loss_trace;    // loss of the would-be return value, sampled periodically
  bool converged = true;             // averaged loss caught up with the best visited loss
  bool projection_converged = true;  // no inner Dykstra hit its iteration cap
};

// Mean hinge loss over the batch. The parallel version uses the fixed-slot
// reduction, so its result never depends on the thread count.
double empirical_hinge(const SampleBatch& batch, std::span<const double> w, double tau);
double empirical_hinge_serial(const SampleBatch& batch, std::span<const double> w, double tau);

// Mean hinge loss and its subgradient at w. At kink points (margin exactly
// tau) the zero branch is taken, so the subgradient of a correctly-classified
// point never pushes. grad must have batch.dim entries; scratch is reused
// across calls.
double hinge_loss_grad(const SampleBatch& batch, std::span<const double> w, double tau,
                       std::span<double> grad, std::vector<double>& scratch);
double hinge_loss_grad_serial(const SampleBatch& batch, std::span<const double> w, double tau,
                              std::span<double> grad);

// Deterministic full-batch projected subgradient descent with suffix
// averaging over the last half of the iterates. Returns whichever of the
// suffix average and the best visited iterate has lower empirical loss, so
// the reported loss is always <= the best visited loss. The rng parameter is
// reserved for stochastic variants and is not consumed.
SolverReport minimize_hinge(const SampleBatch& batch, const ConstraintSet& constraints, double tau,
                            const SolverOptions& opts, RngState& rng);

}  // namespace sparseal
