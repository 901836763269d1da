#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "stats.hpp"

namespace gammanoise {

enum class GrowthClass { Convergent, Divergent, LogDivergent, Inconclusive };

inline const char* to_string(GrowthClass c) {
  switch (c) {
  case GrowthClass::Convergent: return "convergent";
  case GrowthClass::Divergent: return "divergent";
  case GrowthClass::LogDivergent: return "log_divergent";
  default: return "inconclusive";
  }
}

struct GrowthThresholds {
  double divergent_slope = 0.05;
  double divergent_r2 = 0.9;
  double increment_ratio = 0.9;
  double log_r2 = 0.95;
};

struct GrowthReport {
  GrowthClass classification = GrowthClass::Inconclusive;
  double slope = 0.0;      // log-log
  double r2 = 0.0;
  double log_slope = 0.0;  // norm against log N
  double log_r2 = 0.0;
  double max_increment_ratio = 0.0;
  std::size_t points = 0;
};

/// Classify a norm sequence sampled at geometric N.
///
/// Order of tests: vanishing or nonpositive increments, power-law divergence,
/// geometric decay of increments, growth affine in log N.
inline GrowthReport classify_growth(std::vector<std::pair<double, double>> values, const GrowthThresholds& th = {}) {
  require(values.size() >= 4, "growth classification needs at least 4 points");
  std::sort(values.begin(), values.end());
  std::vector<double> n, v, ln;
  for (auto [N, x] : values) {
    require(N > 0.0 && std::isfinite(x) && x >= 0.0, "growth data must have N > 0 and finite nonnegative norms");
    n.push_back(N);
    v.push_back(x);
    ln.push_back(std::log(N));
  }
  for (std::size_t i = 1; i < n.size(); ++i) require(n[i] > n[i - 1], "growth abscissae must be distinct");
  GrowthReport r;
  r.points = v.size();
  const double vmax = *std::max_element(v.begin(), v.end());
  std::vector<double> inc;
  for (std::size_t i = 1; i < v.size(); ++i) inc.push_back(v[i] - v[i - 1]);
  const double inc_max = std::abs(*std::max_element(inc.begin(), inc.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  if (vmax == 0.0 || inc_max <= 1e-12 * vmax) {
    r.classification = GrowthClass::Convergent;
    return r;
  }
  if (*std::min_element(v.begin(), v.end()) > 0.0) {
    const LinearFit ll = loglog_fit(n, v);
    r.slope = ll.slope;
    r.r2 = ll.r2;
  }
  const LinearFit lf = least_squares(ln, v);
  r.log_slope = lf.slope;
  r.log_r2 = lf.r2;
  for (std::size_t i = 1; i < inc.size(); ++i)
    r.max_increment_ratio = std::max(r.max_increment_ratio, inc[i - 1] != 0.0 ? std::abs(inc[i] / inc[i - 1]) : INFINITY);

  if (std::all_of(inc.begin(), inc.end(), [](double x) { return x <= 0.0; })) r.classification = GrowthClass::Convergent;
  else if (r.slope > th.divergent_slope && r.r2 > th.divergent_r2) r.classification = GrowthClass::Divergent;
  else if (r.max_increment_ratio < th.increment_ratio) r.classification = GrowthClass::Convergent;
  else if (lf.r2 > th.log_r2 && r.slope <= th.divergent_slope && lf.slope > 0.0) r.classification = GrowthClass::LogDivergent;
  return r;
}

} // namespace gammanoise
