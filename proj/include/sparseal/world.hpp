#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sparseal/kernels.hpp"
#include "sparseal/rng.hpp"

namespace sparseal {

enum class MarginalKind { gaussian, uniform_ball };

// Isotropic, rotation-invariant unlabeled distribution with identity
// covariance. uniform_ball is the uniform measure on the origin-centered ball
// of radius sqrt(dim + 2), which makes each coordinate unit-variance.
struct MarginalDistribution {
  MarginalKind kind = MarginalKind::gaussian;
  int dim = 0;

  double ball_radius() const;  // radius of the uniform_ball support
};

// Unit-l2 target direction with at most `t` nonzero coordinates.
struct SparseTarget {
  Vec u;
  std::vector<int> support;  // sorted indices of the nonzeros
  int t = 0;
};

enum class NoiseKind {
  realizable,             // clean labels sign(u.x), with sign(0) := +1
  adversarial_boundary,   // flip exactly when |u.x| <= boundary_width (mass nu band)
  adversarial_hashed,     // flip exactly when hash01(x) < nu; deterministic in x
  bounded_constant,       // flip independently with probability eta
  bounded_margin_decay,   // flip with probability eta * exp(-|u.x|)
};

const char* to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// `level` is nu for the adversarial kinds and eta for the bounded kinds.
// boundary_width is resolved from (kind, level, marginal) by resolve_noise;
// only adversarial_boundary uses it.
struct NoiseModel {
  NoiseKind kind = NoiseKind::realizable;
  double level = 0.0;
  double boundary_width = 0.0;
};

// Validates the level range (nu in [0,1) adversarial, eta in [0,1/2) bounded)
// and precomputes the boundary flip threshold for adversarial_boundary.
NoiseModel resolve_noise(NoiseKind kind, double level, const MarginalDistribution& marginal);

struct LabeledExample {
  Vec x;
  int label = 1;
};

struct World {
  MarginalDistribution marginal;
  SparseTarget target;
  NoiseModel noise;
};

// Uniformly random support of size t, iid standard normal values on it
// (exact zeros redrawn so the support size is exactly t), normalized to unit
// l2 norm. Throws ParameterError unless 1 <= t <= d.
SparseTarget sample_target(int d, int t, RngState& rng);

// One draw from the marginal. The gaussian consumes dim normals; the ball
// consumes dim normals plus one uniform, in that order.
Vec sample_x(const MarginalDistribution& marginal, RngState& rng);
void sample_x_into(const MarginalDistribution& marginal, RngState& rng, std::span<double> out);

// u.x restricted to the target support.
double target_margin(std::span<const double> x, const SparseTarget& target);

// Label under the world's noise model. Only the bounded kinds consume rng.
int label(std::span<const double> x, const SparseTarget& target, const NoiseModel& noise,
          RngState& rng);

// P(|v.x| <= b) for a unit vector v. Both marginals are rotation invariant,
// so the value does not depend on the direction of v; v is still validated
// as unit length. Gaussian: 2*Phi(b) - 1. Ball: exact quadrature of the
// one-dimensional marginal density.
double band_mass(const MarginalDistribution& marginal, std::span<const double> v, double b);

// The nu-quantile of |v.x| for unit v: the smallest width whose band mass
// is nu. Used to resolve the boundary noise threshold.
double margin_quantile(const MarginalDistribution& marginal, double nu);

// P(sign(w.x) != sign(v.x)) estimated from m Monte Carlo draws. Uses one
// substream per draw, so the count (and hence the estimate) is exactly
// reproducible and independent of thread scheduling.
double disagreement_rate_mc(std::span<const double> w, std::span<const double> v,
                            const MarginalDistribution& marginal, std::size_t m,
                            const RngState& base);
double disagreement_rate_mc_serial(std::span<const double> w, std::span<const double> v,
                                   const MarginalDistribution& marginal, std::size_t m,
                                   const RngState& base);

}  // namespace sparseal
