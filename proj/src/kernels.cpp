#include "sparseal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparseal/errors.hpp"

namespace sparseal {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm_l2(std::span<const double> v) {
  return std::sqrt(dot(v, v));
}

double norm_l1(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

std::size_t count_nonzero(std::span<const double> v) {
  std::size_t n = 0;
  for (double x : v) n += (x != 0.0);
  return n;
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Vec hard_threshold(const Vec& v, int s) {
  const int d = static_cast<int>(v.size());
  if (s < 1 || s > d) throw ParameterError("hard_threshold: need 1 <= s <= dim");
  if (s == d) return v;

  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  // Strict total order: larger magnitude first, lower index breaks ties, so
  // the kept support is unique regardless of partitioning order.
  const auto ranks_before = [&v](int a, int b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + s, idx.end(), ranks_before);

  Vec out(v.size(), 0.0);
  for (int r = 0; r < s; ++r) out[idx[r]] = v[idx[r]];
  return out;
}

Vec normalize(const Vec& v) {
  const double n = norm_l2(v);
  if (n == 0.0) throw DegenerateInputError("normalize: zero vector has no direction");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

double angle(std::span<const double> w, std::span<const double> v) {
  const double nw = norm_l2(w);
  const double nv = norm_l2(v);
  if (nw == 0.0 || nv == 0.0) throw DegenerateInputError("angle: undefined for the zero vector");
  // 2*atan2(||a - b||, ||a + b||) on the unit-scaled inputs. Unlike
  // acos(cos), this loses no precision near 0 or pi, and the result is in
  // [0, pi] by construction.
  double diff2 = 0.0;
  double sum2 = 0.0;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w[i] / nw;
    const double b = v[i] / nv;
    diff2 += (a - b) * (a - b);
    sum2 += (a + b) * (a + b);
  }
  return 2.0 * std::atan2(std::sqrt(diff2), std::sqrt(sum2));
}

double hinge_loss(std::span<const double> w, std::span<const double> x, int y, double tau) {
  if (y != 1 && y != -1) throw ParameterError("hinge_loss: label must be +1 or -1");
  if (!(tau > 0.0)) throw ParameterError("hinge_loss: tau must be positive");
  return std::max(0.0, 1.0 - static_cast<double>(y) * dot(w, x) / tau);
}

Vec project_l2(const Vec& v, const Ball& ball) {
  if (ball.norm != NormKind::l2) throw ParameterError("project_l2: ball norm mismatch");
  if (!(ball.radius > 0.0)) throw ParameterError("project_l2: radius must be positive");
  if (v.size() != ball.center.size()) throw ParameterError("project_l2: dimension mismatch");

  double dist2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = v[i] - ball.center[i];
    dist2 += s * s;
  }
  const double dist = std::sqrt(dist2);
  if (dist <= ball.radius) return v;
  const double scale = ball.radius / dist;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = ball.center[i] + (v[i] - ball.center[i]) * scale;
  }
  return out;
}

Vec project_l1(const Vec& v, const Ball& ball) {
  if (ball.norm != NormKind::l1) throw ParameterError("project_l1: ball norm mismatch");
  if (!(ball.radius > 0.0)) throw ParameterError("project_l1: radius must be positive");
  if (v.size() != ball.center.size()) throw ParameterError("project_l1: dimension mismatch");

  const std::size_t d = v.size();
  Vec mag(d);
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    mag[i] = std::abs(v[i] - ball.center[i]);
    total += mag[i];
  }
  if (total <= ball.radius) return v;

  // Exact multiplier by scanning magnitudes in decreasing order: the
  // projection is the soft threshold z -> sign(z)*max(|z| - lambda, 0) with
  // the unique lambda making the result's l1 norm equal the radius.
  Vec sorted = mag;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double lambda = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    prefix += sorted[k];
    const double cand = (prefix - ball.radius) / static_cast<double>(k + 1);
    if (k + 1 == d || sorted[k + 1] <= cand) {
      lambda = cand;
      break;
    }
  }

  Vec out(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double z = v[i] - ball.center[i];
    const double m = std::max(std::abs(z) - lambda, 0.0);
    out[i] = ball.center[i] + std::copysign(m, z);
  }
  return out;
}

namespace {

bool inside_l2(const Vec& v, const Ball& ball) {
  double dist2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = v[i] - ball.center[i];
    dist2 += s * s;
  }
  return dist2 <= ball.radius * ball.radius;
}

bool inside_l1(const Vec& v, const Ball& ball) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += std::abs(v[i] - ball.center[i]);
  return total <= ball.radius;
}

}  // namespace

ProjectionResult project_intersection(const Vec& v, const Ball& l2_ball, const Ball& l1_ball,
                                      const DykstraOptions& opts) {
  if (l2_ball.norm != NormKind::l2 || l1_ball.norm != NormKind::l1) {
    throw ParameterError("project_intersection: expected an l2 ball and an l1 ball");
  }
  if (l2_ball.center != l1_ball.center) {
    throw ParameterError("project_intersection: balls must share a center");
  }
  if (v.size() != l2_ball.center.size()) {
    throw ParameterError("project_intersection: dimension mismatch");
  }
  if (!(l2_ball.radius > 0.0) || !(l1_ball.radius > 0.0)) {
    throw ParameterError("project_intersection: radii must be positive");
  }

  if (inside_l2(v, l2_ball) && inside_l1(v, l1_ball)) return {v, 0, true};

  const std::size_t d = v.size();
  Vec x = v;
  Vec p(d, 0.0), q(d, 0.0), work(d), prev(d);
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    prev = x;
    for (std::size_t i = 0; i < d; ++i) work[i] = x[i] + p[i];
    const Vec y = project_l2(work, l2_ball);
    for (std::size_t i = 0; i < d; ++i) p[i] = work[i] - y[i];
    for (std::size_t i = 0; i < d; ++i) work[i] = y[i] + q[i];
    x = project_l1(work, l1_ball);
    for (std::size_t i = 0; i < d; ++i) q[i] = work[i] - x[i];

    double move2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double s = x[i] - prev[i];
      move2 += s * s;
    }
    if (move2 <= opts.tolerance * opts.tolerance) return {std::move(x), iter, true};
  }
  return {std::move(x), opts.max_iterations, false};
}

}  // namespace sparseal
