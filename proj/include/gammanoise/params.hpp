#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "coloring.hpp"

namespace gammanoise {

struct ParamTuple {
  int d = 1;
  double s = 0.5;
  double q = 2.0;
  double eta = 2.0;
  double zeta = 2.0;          // infinite_exponent allowed
  std::optional<double> p;    // time integrability
};

/// Generic range check. eta < q is reported by sharp_condition, not enforced.
inline void validate(const ParamTuple& t) {
  require<DimensionError>(t.d >= 1 && t.d <= 3, "dimension must be 1, 2 or 3");
  require(std::isfinite(t.q) && t.q > 1.0, "q must lie in (1, inf)");
  require(std::isfinite(t.eta) && t.eta > 1.0, "eta must lie in (1, inf)");
  require(is_infinite_exponent(t.zeta) || (std::isfinite(t.zeta) && t.zeta >= 2.0), "zeta must lie in [2, inf]");
  require(std::isfinite(t.s) && t.s > 0.0 && t.s < t.d, "s must lie in (0, d)");
  if (t.p) require(std::isfinite(*t.p) && *t.p >= 1.0, "p must lie in [1, inf)");
}

enum class Regime { Weighted, Unweighted, Matern };
enum class Classification { Strict, Equality, Violated };

inline const char* to_string(Classification c) {
  switch (c) {
  case Classification::Strict: return "strict";
  case Classification::Equality: return "equality";
  default: return "violated";
  }
}

struct RegimeSpec {
  Regime kind = Regime::Weighted;
  double alpha = 0.0; // Matern smoothing order
};

struct ConditionReport {
  Classification classification = Classification::Strict;
  double slack = 0.0;      // scaling condition, >= 0 admissible
  double side_slack = 0.0; // side condition, > 0 admissible
  bool side_holds = true;
  bool eta_below_q = true;
};

inline constexpr double equality_tolerance = 1e-12;

/// Evaluate the scaling condition and its side condition for a regime.
///
/// weighted:   s/d + 1/q - (1/eta + 1/2 - 1/zeta) and 1/2 - (1/eta - 1/zeta)
/// unweighted: s/d + 1/q - (1/eta + 1/2)          and 1/eta + 1/zeta - 1/q
/// matern:     alpha/d - (1/eta + 1/2 - s/d - 1/q) and alpha/d - (1/eta - 1/2), 0 < alpha <= d/2
inline ConditionReport sharp_condition(const ParamTuple& t, RegimeSpec regime) {
  validate(t);
  const double d = t.d, iq = 1.0 / t.q, ie = 1.0 / t.eta, iz = reciprocal_exponent(t.zeta);
  ConditionReport r;
  r.eta_below_q = t.eta < t.q;
  switch (regime.kind) {
  case Regime::Weighted:
    r.slack = t.s / d + iq - (ie + 0.5 - iz);
    r.side_slack = 0.5 - (ie - iz);
    break;
  case Regime::Unweighted:
    r.slack = t.s / d + iq - (ie + 0.5);
    r.side_slack = ie + iz - iq;
    break;
  case Regime::Matern:
    require(regime.alpha > 0.0 && regime.alpha <= 0.5 * d, "Matern order must lie in (0, d/2]");
    r.slack = regime.alpha / d - (ie + 0.5 - t.s / d - iq);
    r.side_slack = regime.alpha / d - (ie - 0.5);
    break;
  }
  r.side_holds = r.side_slack > 0.0;
  if (std::abs(r.slack) <= equality_tolerance) r.classification = Classification::Equality;
  else r.classification = r.slack > 0.0 ? Classification::Strict : Classification::Violated;
  return r;
}

/// Conditions of the multiplication-operator bound with s in (d/2, d), q in (2, inf), eta in (2, q).
inline bool multiplication_sobolev_condition(const ParamTuple& t) {
  return t.s > 0.5 * t.d && t.s < t.d && t.q > 2.0 && t.eta > 2.0 && t.eta < t.q &&
         t.s / t.d + 1.0 / t.q >= 1.0 / t.eta + 0.5 - equality_tolerance;
}

enum class Construction { FrequencyBlock, RescaledBump, ShiftedBump, SpdeScaling };

inline const char* to_string(Construction c) {
  switch (c) {
  case Construction::FrequencyBlock: return "freq_block";
  case Construction::RescaledBump: return "rescaled_bump";
  case Construction::ShiftedBump: return "shifted_bump";
  default: return "spde_scaling";
  }
}

inline Construction construction_from_string(const std::string& s) {
  if (s == "freq_block") return Construction::FrequencyBlock;
  if (s == "rescaled_bump") return Construction::RescaledBump;
  if (s == "shifted_bump") return Construction::ShiftedBump;
  if (s == "spde_scaling") return Construction::SpdeScaling;
  throw ParameterError("unknown construction: " + s);
}

/// Predicted growth exponent of lhs/rhs for a necessity construction.
inline double predicted_exponent(const ParamTuple& t, Construction c) {
  const double d = t.d, iq = 1.0 / t.q, ie = 1.0 / t.eta, iz = reciprocal_exponent(t.zeta);
  switch (c) {
  case Construction::FrequencyBlock: return -t.s + d * (0.5 - iq + ie - iz);
  case Construction::RescaledBump: return (-t.s - d * iq) - (-d * ie - 0.5 * d + d * iz);
  case Construction::ShiftedBump: return d * (iq - ie - iz);
  default: {
    const double tp = t.p ? 2.0 / *t.p : 0.0;
    return (1.0 - t.s - d * iq - tp) - (1.0 - 0.5 * d + d * iz - d * ie - tp);
  }
  }
}

} // namespace gammanoise
