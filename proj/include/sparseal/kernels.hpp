#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sparseal {

using Vec = std::vector<double>;

enum class NormKind { l1, l2 };

// Norm ball {z : ||z - center|| <= radius} in the given norm.
struct Ball {
  Vec center;
  double radius = 0.0;
  NormKind norm = NormKind::l2;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm_l2(std::span<const double> v);
double norm_l1(std::span<const double> v);
std::size_t count_nonzero(std::span<const double> v);
bool all_finite(std::span<const double> v);

// Keeps the s entries of largest magnitude and zeroes the rest; equal
// magnitudes resolve toward the lower index. The output is the closest
// s-sparse vector to v in l2 distance. Throws ParameterError unless
// 1 <= s <= v.size().
Vec hard_threshold(const Vec& v, int s);

// v / ||v||_2. Throws DegenerateInputError on the zero vector.
Vec normalize(const Vec& v);

// Angle in [0, pi] between two nonzero vectors, computed in a form that is
// accurate to machine precision even for near-parallel inputs. Throws
// DegenerateInputError if either vector is zero.
double angle(std::span<const double> w, std::span<const double> v);

// Scaled hinge: max(0, 1 - y*(w.x)/tau). y must be +/-1, tau > 0.
double hinge_loss(std::span<const double> w, std::span<const double> x, int y, double tau);

// Euclidean projection onto an l2 ball. Identity for interior points.
Vec project_l2(const Vec& v, const Ball& ball);

// Euclidean projection onto an l1 ball, exact sort-based soft threshold.
Vec project_l1(const Vec& v, const Ball& ball);

struct DykstraOptions {
  double tolerance = 1e-9;  // stop when successive iterates move less than this (l2)
  int max_iterations = 10000;
};

struct ProjectionResult {
  Vec point;
  int iterations = 0;
  bool converged = true;
};

// Euclidean projection onto the intersection of an l2 ball and an l1 ball
// with a common center, via Dykstra's alternating projections. Requires
// both radii > 0 and identical centers. Hitting the iteration cap is
// reported through `converged`, not thrown; the last iterate is returned.
ProjectionResult project_intersection(const Vec& v, const Ball& l2_ball, const Ball& l1_ball,
                                      const DykstraOptions& opts = {});

}  // namespace sparseal
