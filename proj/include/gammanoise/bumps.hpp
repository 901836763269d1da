#pragma once

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace gammanoise {

/// exp(1 - 1/(1 - (2r/w)^2)) for r < w/2, zero outside; peak value 1.
inline double bump_profile(double r, double width) {
  const double u = 2.0 * r / width;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

/// Smooth step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// Plateau on [0, 1): 1 on [inner_lo, inner_hi], 0 outside [outer_lo, outer_hi].
inline double plateau_profile(double t, double outer_lo, double inner_lo, double inner_hi, double outer_hi) {
  if (t <= outer_lo || t >= outer_hi) return 0.0;
  if (t < inner_lo) return smooth_step((t - outer_lo) / (inner_lo - outer_lo));
  if (t > inner_hi) return smooth_step((outer_hi - t) / (outer_hi - inner_hi));
  return 1.0;
}

/// ||b||_{L^p(R^d)} of the radial bump of the given width, by Simpson's rule.
inline double bump_lp_norm(int dim, double width, double p = 2.0) {
  require<DimensionError>(dim >= 1 && dim <= 3, "bump dimension must be 1, 2 or 3");
  constexpr int intervals = 4000;
  const double h = 0.5 * width / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(bump_profile(r, width), p) * std::pow(r, dim - 1);
  }
  acc *= h / 3.0;
  const double sphere = dim == 1 ? 2.0 : (dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
  return std::pow(sphere * acc, 1.0 / p);
}

} // namespace gammanoise
