#include "sparseal/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "sparseal/errors.hpp"
#include "sparseal/parallel.hpp"
#include "sparseal/stats.hpp"

namespace sparseal {

namespace {

// Uniform integer in [0, n) by rejection; no modulo bias.
std::uint64_t bounded_u64(RngState& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t r = rng.next_u64();
    if (r < limit) return r % n;
  }
}

int sign_pm1(double m) {
  return m >= 0.0 ? 1 : -1;
}

// FNV-1a over the raw bytes of the coordinates, mapped to [0, 1). Purely a
// function of x, so the hashed adversary's flip set is deterministic.
double hash01(std::span<const double> x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : x) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// One-coordinate marginal density of the uniform ball, up to the constant:
// (1 - (s/R)^2)^((d-1)/2).
double ball_profile(double s, double radius, int dim) {
  const double r = s / radius;
  const double arg = 1.0 - r * r;
  if (arg <= 0.0) return 0.0;
  return std::exp(0.5 * (dim - 1) * std::log1p(-r * r));
}

double simpson_slice(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, double radius, int dim) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = ball_profile(lm, radius, dim);
  const double frm = ball_profile(rm, radius, dim);
  const double left = simpson_slice(fa, flm, fm, m - a);
  const double right = simpson_slice(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, radius, dim) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, radius, dim);
}

// Integral of ball_profile over [0, b], b <= R.
double ball_profile_integral(double b, double radius, int dim) {
  if (b <= 0.0) return 0.0;
  const double fa = ball_profile(0.0, radius, dim);
  const double fm = ball_profile(0.5 * b, radius, dim);
  const double fb = ball_profile(b, radius, dim);
  const double whole = simpson_slice(fa, fm, fb, b);
  return adaptive_simpson(0.0, b, fa, fm, fb, whole, 1e-13, 40, radius, dim);
}

}  // namespace

double MarginalDistribution::ball_radius() const {
  // Uniform ball of radius R has per-coordinate variance R^2/(dim+2); this
  // choice makes the covariance the identity, matching the gaussian.
  return std::sqrt(static_cast<double>(dim) + 2.0);
}

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::realizable: return "realizable";
    case NoiseKind::adversarial_boundary: return "adversarial_boundary";
    case NoiseKind::adversarial_hashed: return "adversarial_hashed";
    case NoiseKind::bounded_constant: return "bounded_constant";
    case NoiseKind::bounded_margin_decay: return "bounded_margin_decay";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "realizable") return NoiseKind::realizable;
  if (name == "adversarial_boundary") return NoiseKind::adversarial_boundary;
  if (name == "adversarial_hashed") return NoiseKind::adversarial_hashed;
  if (name == "bounded_constant") return NoiseKind::bounded_constant;
  if (name == "bounded_margin_decay") return NoiseKind::bounded_margin_decay;
  throw ParameterError("unknown noise kind: " + name);
}

NoiseModel resolve_noise(NoiseKind kind, double level, const MarginalDistribution& marginal) {
  NoiseModel noise;
  noise.kind = kind;
  noise.level = level;
  switch (kind) {
    case NoiseKind::realizable:
      if (level != 0.0) throw ParameterError("realizable noise takes no level");
      break;
    case NoiseKind::adversarial_boundary:
    case NoiseKind::adversarial_hashed:
      if (!(level >= 0.0 && level < 1.0)) {
        throw ParameterError("adversarial noise level must lie in [0, 1)");
      }
      if (kind == NoiseKind::adversarial_boundary) {
        noise.boundary_width = margin_quantile(marginal, level);
      }
      break;
    case NoiseKind::bounded_constant:
    case NoiseKind::bounded_margin_decay:
      if (!(level >= 0.0 && level < 0.5)) {
        throw ParameterError("bounded noise level must lie in [0, 1/2)");
      }
      break;
  }
  return noise;
}

SparseTarget sample_target(int d, int t, RngState& rng) {
  if (d < 1) throw ParameterError("sample_target: dimension must be positive");
  if (t < 1 || t > d) throw ParameterError("sample_target: need 1 <= t <= d");

  // Partial Fisher-Yates: first t entries are a uniform size-t subset.
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < t; ++i) {
    const int j = i + static_cast<int>(bounded_u64(rng, static_cast<std::uint64_t>(d - i)));
    std::swap(pool[i], pool[j]);
  }
  SparseTarget target;
  target.t = t;
  target.support.assign(pool.begin(), pool.begin() + t);
  std::sort(target.support.begin(), target.support.end());

  target.u.assign(d, 0.0);
  double norm2 = 0.0;
  for (int idx : target.support) {
    double g = rng.next_gaussian();
    while (g == 0.0) g = rng.next_gaussian();  // keep the support size exactly t
    target.u[idx] = g;
    norm2 += g * g;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (int idx : target.support) target.u[idx] *= inv;
  return target;
}

void sample_x_into(const MarginalDistribution& marginal, RngState& rng, std::span<double> out) {
  rng.fill_gaussian(out);
  if (marginal.kind == MarginalKind::gaussian) return;

  double norm = norm_l2(out);
  while (norm == 0.0) {
    rng.fill_gaussian(out);
    norm = norm_l2(out);
  }
  // Direction from the normalized gaussian, radius R * U^(1/d): uniform on
  // the ball.
  const double u = rng.next_unit_pos();
  const double r = marginal.ball_radius() *
                   std::exp(std::log(u) / static_cast<double>(marginal.dim));
  const double scale = r / norm;
  for (double& v : out) v *= scale;
}

Vec sample_x(const MarginalDistribution& marginal, RngState& rng) {
  Vec x(static_cast<std::size_t>(marginal.dim));
  sample_x_into(marginal, rng, x);
  return x;
}

double target_margin(std::span<const double> x, const SparseTarget& target) {
  double m = 0.0;
  for (int idx : target.support) m += target.u[idx] * x[idx];
  return m;
}

int label(std::span<const double> x, const SparseTarget& target, const NoiseModel& noise,
          RngState& rng) {
  const double m = target_margin(x, target);
  const int clean = sign_pm1(m);
  switch (noise.kind) {
    case NoiseKind::realizable:
      return clean;
    case NoiseKind::adversarial_boundary:
      return std::abs(m) <= noise.boundary_width ? -clean : clean;
    case NoiseKind::adversarial_hashed:
      return hash01(x) < noise.level ? -clean : clean;
    case NoiseKind::bounded_constant:
      return rng.next_unit() < noise.level ? -clean : clean;
    case NoiseKind::bounded_margin_decay:
      return rng.next_unit() < noise.level * std::exp(-std::abs(m)) ? -clean : clean;
  }
  return clean;
}

double band_mass(const MarginalDistribution& marginal, std::span<const double> v, double b) {
  if (std::abs(norm_l2(v) - 1.0) > 1e-9) {
    throw ParameterError("band_mass: direction must be a unit vector");
  }
  if (!(b >= 0.0)) throw ParameterError("band_mass: width must be nonnegative");
  if (marginal.kind == MarginalKind::gaussian) {
    return 2.0 * normal_cdf(b) - 1.0;
  }
  const double radius = marginal.ball_radius();
  if (b >= radius) return 1.0;
  // Normalizer Gamma(d/2+1) / (sqrt(pi) * Gamma((d+1)/2)) of the marginal
  // density, via lgamma to stay finite at large d.
  const double d = static_cast<double>(marginal.dim);
  const double c = std::exp(std::lgamma(0.5 * d + 1.0) - 0.5 * std::log(M_PI) -
                            std::lgamma(0.5 * (d + 1.0)));
  return std::min(1.0, 2.0 * c / radius * ball_profile_integral(b, radius, marginal.dim));
}

double margin_quantile(const MarginalDistribution& marginal, double nu) {
  if (!(nu >= 0.0 && nu < 1.0)) throw ParameterError("margin_quantile: nu must lie in [0, 1)");
  if (nu == 0.0) return 0.0;
  if (marginal.kind == MarginalKind::gaussian) {
    return normal_quantile(0.5 * (1.0 + nu));
  }
  // band_mass is continuous and strictly increasing in b on [0, R]; bisect.
  Vec e1(static_cast<std::size_t>(marginal.dim), 0.0);
  e1[0] = 1.0;
  double lo = 0.0;
  double hi = marginal.ball_radius();
  for (int i = 0; i < 200 && hi - lo > 1e-14 * marginal.ball_radius(); ++i) {
    const double mid = 0.5 * (lo + hi);
    (band_mass(marginal, e1, mid) < nu ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

bool draws_disagree(std::span<const double> w, std::span<const double> v,
                    const MarginalDistribution& marginal, const RngState& base, std::size_t i,
                    std::vector<double>& x) {
  RngState sub = base.substream(i);
  sample_x_into(marginal, sub, x);
  return sign_pm1(dot(w, x)) != sign_pm1(dot(v, x));
}

}  // namespace

double disagreement_rate_mc(std::span<const double> w, std::span<const double> v,
                            const MarginalDistribution& marginal, std::size_t m,
                            const RngState& base) {
  if (m == 0) throw ParameterError("disagreement_rate_mc: need at least one draw");
  std::size_t count = 0;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : count)
  {
    std::vector<double> x(static_cast<std::size_t>(marginal.dim));
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
      count += draws_disagree(w, v, marginal, base, i, x) ? 1u : 0u;
    }
  }
#else
  std::vector<double> x(static_cast<std::size_t>(marginal.dim));
  for (std::size_t i = 0; i < m; ++i) {
    count += draws_disagree(w, v, marginal, base, i, x) ? 1u : 0u;
  }
#endif
  return static_cast<double>(count) / static_cast<double>(m);
}

double disagreement_rate_mc_serial(std::span<const double> w, std::span<const double> v,
                                   const MarginalDistribution& marginal, std::size_t m,
                                   const RngState& base) {
  if (m == 0) throw ParameterError("disagreement_rate_mc: need at least one draw");
  std::vector<double> x(static_cast<std::size_t>(marginal.dim));
  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    count += draws_disagree(w, v, marginal, base, i, x) ? 1u : 0u;
  }
  return static_cast<double>(count) / static_cast<double>(m);
}

}  // namespace sparseal
