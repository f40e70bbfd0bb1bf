#pragma once

namespace sparseal {

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF for p in (0, 1). Rational approximation
// refined with one Halley step; absolute error below 1e-13 over the open
// interval. Throws ParameterError outside (0, 1).
double normal_quantile(double p);

}  // namespace sparseal
