#pragma once

#include <span>

#include "stats.hpp"

namespace gammanoise {

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double residual_rms = 0.0;
  std::size_t points = 0;
  bool conclusive = false;
};

/// Residual RMS (log2 units) below which a flat fit counts as conclusive even
/// though R^2 is meaningless for data without trend.
inline constexpr double flat_fit_rms = 0.02;
inline constexpr double min_fit_r2 = 0.9;

/// Slope of log2(ratio) against the scale index.
inline ExponentFit fit_exponent(std::span<const double> scale, std::span<const double> log2_ratio) {
  const LinearFit f = least_squares(scale, log2_ratio);
  ExponentFit out;
  out.exponent = f.slope;
  out.intercept = f.intercept;
  out.r2 = f.r2;
  out.residual_rms = f.residual_rms;
  out.points = f.points;
  out.conclusive = f.r2 >= min_fit_r2 || f.residual_rms <= flat_fit_rms;
  return out;
}

} // namespace gammanoise
