#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sparseal/errors.hpp"
#include "sparseal/kernels.hpp"
#include "sparseal/rng.hpp"
#include "sparseal/stats.hpp"
#include "sparseal/world.hpp"

using namespace sparseal;

// Values pinned against an independent statistics package.
namespace frozen {
constexpr double kPhiAt1 = 0.8413447460685429;           // Phi(1)
constexpr double kTwoPhi1Minus1 = 0.6826894921370859;    // 2 Phi(1) - 1
constexpr double kTwoPhiHalfMinus1 = 0.38292492254802624;  // 2 Phi(0.5) - 1
constexpr double kQ0975 = 1.959963984540054;             // Phi^-1(0.975)
constexpr double kQ09 = 1.2815515655446004;              // Phi^-1(0.9)
constexpr double kQ06 = 0.2533471031357997;              // Phi^-1(0.6)
constexpr double kQ001 = -2.3263478740408408;            // Phi^-1(0.01)
constexpr double kQ1em6 = -4.753424308822899;            // Phi^-1(1e-6)
constexpr double kQ042 = -0.20189347914185088;           // Phi^-1(0.42)
constexpr double kQHigh = 4.753424308817087;             // Phi^-1(1 - 1e-6)
}  // namespace frozen

TEST_CASE("normal_cdf and normal_quantile match pinned table values") {
  CHECK(normal_cdf(1.0) == doctest::Approx(frozen::kPhiAt1).epsilon(1e-14));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(frozen::kQ0975).epsilon(1e-12));
  CHECK(normal_quantile(0.9) == doctest::Approx(frozen::kQ09).epsilon(1e-12));
  CHECK(normal_quantile(0.6) == doctest::Approx(frozen::kQ06).epsilon(1e-12));
  CHECK(normal_quantile(0.42) == doctest::Approx(frozen::kQ042).epsilon(1e-12));
  CHECK(normal_quantile(0.01) == doctest::Approx(frozen::kQ001).epsilon(1e-12));
  CHECK(normal_quantile(1e-6) == doctest::Approx(frozen::kQ1em6).epsilon(1e-11));
  CHECK(normal_quantile(0.999999) == doctest::Approx(frozen::kQHigh).epsilon(1e-11));
}

TEST_CASE("normal_quantile inverts normal_cdf across the domain") {
  for (double p = 0.02; p < 0.99; p += 0.07) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)normal_quantile(0.0), ParameterError);
  CHECK_THROWS_AS((void)normal_quantile(1.0), ParameterError);
  CHECK_THROWS_AS((void)normal_quantile(-0.5), ParameterError);
}

TEST_CASE("sample_target produces a unit vector with exact support size") {
  RngState rng(41, 60);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 30);
    const int t = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(d));
    const SparseTarget target = sample_target(d, t, rng);
    CHECK(target.t == t);
    CHECK(static_cast<int>(target.u.size()) == d);
    CHECK(count_nonzero(target.u) == static_cast<std::size_t>(t));
    CHECK(std::abs(norm_l2(target.u) - 1.0) <= 1e-12);
    // t-sparse unit vectors satisfy ||u||_1 <= sqrt(t).
    CHECK(norm_l1(target.u) <= std::sqrt(static_cast<double>(t)) * (1.0 + 1e-12));

    CHECK(static_cast<int>(target.support.size()) == t);
    CHECK(std::is_sorted(target.support.begin(), target.support.end()));
    for (int idx : target.support) {
      CHECK(idx >= 0);
      CHECK(idx < d);
      CHECK(target.u[static_cast<std::size_t>(idx)] != 0.0);
    }
  }
}

TEST_CASE("sample_target with t equal to d is dense") {
  RngState rng(42, 60);
  const SparseTarget target = sample_target(5, 5, rng);
  CHECK(count_nonzero(target.u) == 5);
  CHECK(target.support == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("sample_target in one dimension is a sign") {
  RngState rng(43, 60);
  bool saw_pos = false;
  bool saw_neg = false;
  for (int trial = 0; trial < 40; ++trial) {
    const SparseTarget target = sample_target(1, 1, rng);
    CHECK(std::abs(std::abs(target.u[0]) - 1.0) <= 1e-12);
    (target.u[0] > 0 ? saw_pos : saw_neg) = true;
  }
  CHECK(saw_pos);
  CHECK(saw_neg);
}

TEST_CASE("sample_target rejects bad sparsity") {
  RngState rng(44, 60);
  CHECK_THROWS_AS((void)sample_target(3, 4, rng), ParameterError);
  CHECK_THROWS_AS((void)sample_target(3, 0, rng), ParameterError);
  CHECK_THROWS_AS((void)sample_target(0, 1, rng), ParameterError);
}

TEST_CASE("gaussian marginal has near-standard coordinate moments") {
  MarginalDistribution marginal{MarginalKind::gaussian, 5};
  RngState rng(45, 60);
  const int n = 100000;
  Vec sum(5, 0.0), sumsq(5, 0.0);
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_x(marginal, rng);
    for (std::size_t j = 0; j < 5; ++j) {
      sum[j] += x[j];
      sumsq[j] += x[j] * x[j];
    }
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const double mean = sum[j] / n;
    const double var = sumsq[j] / n - mean * mean;
    CHECK(std::abs(mean) <= 0.02);
    CHECK(std::abs(var - 1.0) <= 0.05);
  }
}

TEST_CASE("uniform_ball marginal is supported on the right ball with identity covariance") {
  MarginalDistribution marginal{MarginalKind::uniform_ball, 3};
  const double radius = marginal.ball_radius();
  CHECK(radius == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));

  RngState rng(46, 60);
  const int n = 100000;
  Vec sum(3, 0.0);
  double cov[3][3] = {};
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_x(marginal, rng);
    CHECK(norm_l2(x) <= radius * (1.0 + 1e-12));
    for (int a = 0; a < 3; ++a) {
      sum[static_cast<std::size_t>(a)] += x[static_cast<std::size_t>(a)];
      for (int b = 0; b < 3; ++b) {
        cov[a][b] += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(sum[static_cast<std::size_t>(a)] / n) <= 0.02);
    for (int b = 0; b < 3; ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      CHECK(std::abs(cov[a][b] / n - expected) <= 0.05);
    }
  }
}

TEST_CASE("sample_x replays identically from an equal state") {
  MarginalDistribution marginal{MarginalKind::uniform_ball, 7};
  RngState a(47, 60);
  RngState b(47, 60);
  for (int i = 0; i < 10; ++i) CHECK(sample_x(marginal, a) == sample_x(marginal, b));
}

TEST_CASE("realizable labels follow the margin sign with sign(0) positive") {
  SparseTarget target;
  target.u = {1.0, 0.0};
  target.support = {0};
  target.t = 1;
  NoiseModel clean;
  RngState rng(48, 60);
  CHECK(label(Vec{2.0, 1.0}, target, clean, rng) == 1);
  CHECK(label(Vec{-0.5, 1.0}, target, clean, rng) == -1);
  CHECK(label(Vec{0.0, 3.0}, target, clean, rng) == 1);  // zero margin counts as positive
}

TEST_CASE("adversarial_boundary flips exactly the low-margin band") {
  MarginalDistribution marginal{MarginalKind::gaussian, 2};
  const NoiseModel noise = resolve_noise(NoiseKind::adversarial_boundary, 0.3, marginal);
  CHECK(noise.boundary_width == doctest::Approx(margin_quantile(marginal, 0.3)).epsilon(1e-15));

  SparseTarget target;
  target.u = {1.0, 0.0};
  target.support = {0};
  target.t = 1;
  RngState rng(49, 60);
  const double w = noise.boundary_width;
  CHECK(label(Vec{w * 0.5, 0.0}, target, noise, rng) == -1);    // inside: flipped
  CHECK(label(Vec{-w * 0.5, 0.0}, target, noise, rng) == 1);    // inside: flipped
  CHECK(label(Vec{w * 1.01, 0.0}, target, noise, rng) == 1);    // outside: clean
  CHECK(label(Vec{-w * 1.01, 0.0}, target, noise, rng) == -1);  // outside: clean

  // Flip mass over the marginal approximates nu.
  const int n = 100000;
  int flips = 0;
  RngState draw(50, 60);
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_x(marginal, draw);
    const double m = target_margin(x, target);
    const int clean = m >= 0 ? 1 : -1;
    if (label(x, target, noise, draw) != clean) ++flips;
  }
  CHECK(std::abs(static_cast<double>(flips) / n - 0.3) <= 0.01);
}

TEST_CASE("adversarial_hashed is deterministic in x with flip mass nu") {
  MarginalDistribution marginal{MarginalKind::gaussian, 4};
  const NoiseModel noise = resolve_noise(NoiseKind::adversarial_hashed, 0.3, marginal);
  SparseTarget target;
  target.u = {0.0, 1.0, 0.0, 0.0};
  target.support = {1};
  target.t = 1;

  RngState rng(51, 60);
  int flips = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_x(marginal, rng);
    const int y1 = label(x, target, noise, rng);
    const int y2 = label(x, target, noise, rng);
    CHECK(y1 == y2);  // no rng consumption, pure function of x
    const double m = target_margin(x, target);
    if (y1 != (m >= 0 ? 1 : -1)) ++flips;
  }
  CHECK(std::abs(static_cast<double>(flips) / n - 0.3) <= 0.01);
}

TEST_CASE("bounded_constant flips independently at rate eta") {
  MarginalDistribution marginal{MarginalKind::gaussian, 3};
  const NoiseModel noise = resolve_noise(NoiseKind::bounded_constant, 0.1, marginal);
  SparseTarget target;
  target.u = {1.0, 0.0, 0.0};
  target.support = {0};
  target.t = 1;

  RngState rng(52, 60);
  int flips = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vec x = sample_x(marginal, rng);
    const double m = target_margin(x, target);
    if (label(x, target, noise, rng) != (m >= 0 ? 1 : -1)) ++flips;
  }
  CHECK(std::abs(static_cast<double>(flips) / n - 0.1) <= 0.01);
}

TEST_CASE("bounded noise flip rate never exceeds eta in any margin bucket") {
  MarginalDistribution marginal{MarginalKind::gaussian, 3};
  SparseTarget target;
  target.u = {1.0, 0.0, 0.0};
  target.support = {0};
  target.t = 1;
  const double eta = 0.25;

  for (NoiseKind kind : {NoiseKind::bounded_constant, NoiseKind::bounded_margin_decay}) {
    const NoiseModel noise = resolve_noise(kind, eta, marginal);
    RngState rng(53, 60);
    const double edges[] = {0.0, 0.2, 0.5, 1.0, 1e300};
    int flips[4] = {};
    int totals[4] = {};
    for (int i = 0; i < 200000; ++i) {
      const Vec x = sample_x(marginal, rng);
      const double m = std::abs(target_margin(x, target));
      int bucket = 0;
      while (m >= edges[bucket + 1]) ++bucket;
      ++totals[bucket];
      if (label(x, target, noise, rng) != (target_margin(x, target) >= 0 ? 1 : -1)) {
        ++flips[bucket];
      }
    }
    for (int bkt = 0; bkt < 4; ++bkt) {
      REQUIRE(totals[bkt] > 100);
      const double rate = static_cast<double>(flips[bkt]) / totals[bkt];
      const double sigma = std::sqrt(eta * (1.0 - eta) / totals[bkt]);
      CHECK(rate <= eta + 3.0 * sigma);
    }
  }
}

TEST_CASE("bounded_margin_decay flips less at larger margins") {
  MarginalDistribution marginal{MarginalKind::gaussian, 2};
  const NoiseModel noise = resolve_noise(NoiseKind::bounded_margin_decay, 0.4, marginal);
  SparseTarget target;
  target.u = {1.0, 0.0};
  target.support = {0};
  target.t = 1;

  // Conditional flip probability at margin m is eta * exp(-|m|); check two
  // fixed margins against that curve.
  RngState rng(54, 60);
  for (double m : {0.1, 2.0}) {
    int flips = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      if (label(Vec{m, 0.5}, target, noise, rng) != 1) ++flips;
    }
    const double expected = 0.4 * std::exp(-m);
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::abs(static_cast<double>(flips) / n - expected) <= 4.0 * sigma);
  }
}

TEST_CASE("resolve_noise validates levels per kind") {
  MarginalDistribution marginal{MarginalKind::gaussian, 2};
  CHECK_THROWS_AS((void)resolve_noise(NoiseKind::realizable, 0.1, marginal), ParameterError);
  CHECK_THROWS_AS((void)resolve_noise(NoiseKind::adversarial_boundary, 1.0, marginal),
                  ParameterError);
  CHECK_THROWS_AS((void)resolve_noise(NoiseKind::adversarial_hashed, -0.1, marginal),
                  ParameterError);
  CHECK_THROWS_AS((void)resolve_noise(NoiseKind::bounded_constant, 0.5, marginal), ParameterError);
  CHECK_THROWS_AS((void)resolve_noise(NoiseKind::bounded_margin_decay, 0.6, marginal),
                  ParameterError);
  CHECK(resolve_noise(NoiseKind::realizable, 0.0, marginal).kind == NoiseKind::realizable);
}

TEST_CASE("noise kind names round-trip") {
  for (NoiseKind kind :
       {NoiseKind::realizable, NoiseKind::adversarial_boundary, NoiseKind::adversarial_hashed,
        NoiseKind::bounded_constant, NoiseKind::bounded_margin_decay}) {
    CHECK(noise_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS((void)noise_kind_from_string("nope"), ParameterError);
}

TEST_CASE("gaussian band_mass matches the closed form") {
  MarginalDistribution marginal{MarginalKind::gaussian, 10};
  const Vec v{1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(band_mass(marginal, v, 1.0) == doctest::Approx(frozen::kTwoPhi1Minus1).epsilon(1e-14));
  CHECK(band_mass(marginal, v, 0.5) == doctest::Approx(frozen::kTwoPhiHalfMinus1).epsilon(1e-14));
  CHECK(band_mass(marginal, v, 0.0) == 0.0);
  CHECK(band_mass(marginal, v, 50.0) >= 1.0 - 1e-12);
}

TEST_CASE("band_mass is direction independent for unit vectors") {
  MarginalDistribution marginal{MarginalKind::uniform_ball, 4};
  const Vec e1{1.0, 0.0, 0.0, 0.0};
  const Vec diag = normalize(Vec{1.0, -1.0, 1.0, -1.0});
  CHECK(band_mass(marginal, e1, 0.7) == doctest::Approx(band_mass(marginal, diag, 0.7)).epsilon(1e-12));
}

TEST_CASE("band_mass validates its inputs") {
  MarginalDistribution marginal{MarginalKind::gaussian, 3};
  CHECK_THROWS_AS((void)band_mass(marginal, Vec{2.0, 0.0, 0.0}, 0.5), ParameterError);
  CHECK_THROWS_AS((void)band_mass(marginal, Vec{1.0, 0.0, 0.0}, -0.5), ParameterError);
}

TEST_CASE("ball band_mass matches hand-integrated low dimensions") {
  // d=1: uniform on [-sqrt(3), sqrt(3)], so mass is b/sqrt(3).
  MarginalDistribution line{MarginalKind::uniform_ball, 1};
  const Vec v1{1.0};
  for (double b : {0.1, 0.5, 1.0, 1.7}) {
    CHECK(band_mass(line, v1, b) == doctest::Approx(b / std::sqrt(3.0)).epsilon(1e-12));
  }
  CHECK(band_mass(line, v1, 2.0) == 1.0);  // width beyond the support radius

  // d=3: marginal density 0.75/R (1 - s^2/R^2) with R = sqrt(5), so the mass
  // is (1.5/R) (b - b^3 / (3 R^2)).
  MarginalDistribution ball3{MarginalKind::uniform_ball, 3};
  const Vec v3{0.0, 0.0, 1.0};
  const double R = std::sqrt(5.0);
  for (double b : {0.2, 0.7, 1.5, 2.2}) {
    const double expected = 1.5 / R * (b - b * b * b / (3.0 * R * R));
    CHECK(band_mass(ball3, v3, b) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("margin_quantile inverts band_mass on both marginals") {
  const Vec v{0.0, 1.0, 0.0};
  for (MarginalKind kind : {MarginalKind::gaussian, MarginalKind::uniform_ball}) {
    MarginalDistribution marginal{kind, 3};
    for (double nu : {0.05, 0.3, 0.65, 0.95}) {
      const double b = margin_quantile(marginal, nu);
      CHECK(band_mass(marginal, v, b) == doctest::Approx(nu).epsilon(1e-9));
    }
    CHECK(margin_quantile(marginal, 0.0) == 0.0);
    CHECK_THROWS_AS((void)margin_quantile(marginal, 1.0), ParameterError);
  }
}

TEST_CASE("gaussian margin_quantile matches the pinned normal quantile") {
  MarginalDistribution marginal{MarginalKind::gaussian, 2};
  // Smallest b with 2 Phi(b) - 1 = nu, i.e. Phi^-1((1 + nu) / 2).
  CHECK(margin_quantile(marginal, 0.95) == doctest::Approx(frozen::kQ0975).epsilon(1e-12));
  CHECK(margin_quantile(marginal, 0.2) == doctest::Approx(frozen::kQ06).epsilon(1e-12));
  CHECK(margin_quantile(marginal, 0.8) == doctest::Approx(frozen::kQ09).epsilon(1e-12));
}

TEST_CASE("disagreement_rate_mc tracks the angle for rotation-invariant marginals") {
  MarginalDistribution marginal{MarginalKind::gaussian, 6};
  Vec w(6, 0.0), v(6, 0.0);
  w[0] = 1.0;
  v[1] = 1.0;  // orthogonal pair: disagreement 1/2
  RngState base(55, 60);
  const std::size_t m = 100000;
  const double est = disagreement_rate_mc(w, v, marginal, m, base);
  const double sigma = std::sqrt(0.25 / static_cast<double>(m));
  CHECK(std::abs(est - 0.5) <= 4.0 * sigma);
  CHECK(disagreement_rate_mc(w, w, marginal, m, base) == 0.0);
}
