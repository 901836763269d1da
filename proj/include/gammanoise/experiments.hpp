#pragma once

#include <bit>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fit.hpp"
#include "gaussian_series.hpp"
#include "params.hpp"
#include "scaling.hpp"

namespace gammanoise {

struct SweepRecord {
  ParamTuple params;
  std::string construction;
  double scale = 0.0; // N, 2^m or lattice size
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double lhs_hs = std::numeric_limits<double>::quiet_NaN(); // q = 2 value where recorded
};

struct ConstructionResult {
  std::vector<SweepRecord> records;
  ExponentFit fit;
  double predicted = 0.0;
  std::vector<std::pair<std::string, double>> diagnostics;
};

inline double safe_ratio(double lhs, double rhs) { return rhs > 0.0 ? lhs / rhs : 0.0; }

namespace detail {

inline ExponentFit fit_records(const std::vector<SweepRecord>& recs, bool log_scale) {
  std::vector<double> x, y;
  for (const auto& r : recs) {
    require(r.ratio > 0.0, "ratio must be positive to fit an exponent");
    x.push_back(log_scale ? std::log2(r.scale) : r.scale);
    y.push_back(std::log2(r.ratio));
  }
  return fit_exponent(x, y);
}

inline double radial_bump(const std::array<double, 3>& x, int d, double center, double width) {
  double r2 = 0.0;
  for (int a = 0; a < d; ++a) r2 += (x[a] - center) * (x[a] - center);
  return bump_profile(std::sqrt(r2), width);
}

} // namespace detail

/// g = sum_{n in C_N} e_n, mu = 1 on C_N = {2^N <= n_i <= 3 2^(N-1)}; ratio exponent per doubling of N.
inline ConstructionResult frequency_block_test(const ParamTuple& params, std::span<const int> N_range) {
  validate(params);
  const int d = params.d;
  require<DimensionError>(d == 1 || d == 2, "frequency block test supports d = 1, 2");
  require(N_range.size() >= 2, "need at least two block indices");
  int Nmax = 0;
  for (int N : N_range) {
    require(N >= 1 && N <= 20, "block index out of range");
    Nmax = std::max(Nmax, N);
  }
  const std::size_t n = 2 * std::bit_ceil(static_cast<std::size_t>(3) * (std::size_t{1} << Nmax) + 1);
  const Grid grid(d, n, 1.0);
  const double block_terms = std::pow((1 << (Nmax - 1)) + 1.0, d);
  require<ResourceError>(block_terms * static_cast<double>(grid.size()) * std::pow(2.0, d) <= 4.0e8,
                         "frequency block too large for this dimension");
  ConstructionResult out;
  out.predicted = predicted_exponent(params, Construction::FrequencyBlock);
  const auto sys = OrthonormalSystem::fourier(d, 1.0);
  std::vector<double> gx, gy;
  double mu_dev = 0.0;
  for (int N : N_range) {
    const long lo = 1L << N, hi = 3L * (1L << N) / 2;
    auto g = SpectralField::zero(grid, false);
    std::size_t count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Lattice k = grid.frequency(i);
      bool in = true;
      for (int a = 0; a < d; ++a) in = in && k[a] >= lo && k[a] <= hi;
      if (in) {
        g.coeffs()[i] = 1.0;
        ++count;
      }
    }
    const double radius_sq = d * static_cast<double>(hi) * hi;
    std::size_t want = 64;
    auto ord = detail::fourier_ordering(d, want);
    while (static_cast<double>(detail::lattice_norm_sq(ord->back())) <= radius_sq) {
      want = 2 * ord->size();
      ord = detail::fourier_ordering(d, want);
    }
    std::size_t truncation = 0;
    while (static_cast<double>(detail::lattice_norm_sq((*ord)[truncation])) <= radius_sq) ++truncation;
    SeriesSpec spec{grid, sys, Coloring::block(N), g, truncation, params.s, params.q, 2};
    SweepRecord rec;
    rec.params = params;
    rec.construction = "freq_block";
    rec.scale = N;
    rec.lhs = sq_function_gamma_norm(spec);
    spec.q = 2.0;
    rec.lhs_hs = hs_gamma_norm_exact(spec);
    const double gnorm = lq_norm(g, params.eta, 4);
    const double munorm = ell_zeta_weighted_norm(spec.coloring, sys, params.zeta, truncation);
    mu_dev = std::max(mu_dev, std::abs(munorm / std::pow(static_cast<double>(count), reciprocal_exponent(params.zeta)) - 1.0));
    rec.rhs = gnorm * munorm;
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    out.records.push_back(rec);
    gx.push_back(N);
    gy.push_back(std::log2(gnorm));
  }
  out.fit = detail::fit_records(out.records, false);
  out.diagnostics.emplace_back("g_eta_exponent", least_squares(gx, gy).slope / d);
  out.diagnostics.emplace_back("g_eta_exponent_predicted", 1.0 - 1.0 / params.eta);
  out.diagnostics.emplace_back("mu_norm_max_rel_dev", mu_dev);
  out.diagnostics.emplace_back("grid_n", static_cast<double>(n));
  return out;
}

struct RescaledBumpOptions {
  std::size_t n = 0;       // 0: 2^14 in d = 1, 2^10 in d = 2
  double base_width = 0.25;
};

/// ||g_m h_m||_{H^{-s,q}} against ||g_m||_eta ||h_m||_2^{1-2/zeta} ||h_m||_inf^{2/zeta}, g = h = bump(2^m .).
inline ConstructionResult rescaled_bump_test(const ParamTuple& params, std::span<const int> m_range, RescaledBumpOptions opt = {}) {
  validate(params);
  const int d = params.d;
  require<DimensionError>(d == 1 || d == 2, "rescaled bump test supports d = 1, 2");
  require(m_range.size() >= 2, "need at least two scales");
  if (opt.n == 0) opt.n = d == 1 ? (1u << 14) : (1u << 10);
  const Grid grid(d, opt.n, 1.0);
  ConstructionResult out;
  out.predicted = predicted_exponent(params, Construction::RescaledBump);
  const double iz = reciprocal_exponent(params.zeta);
  double h0 = 0.0, l2_dev = 0.0;
  for (int m : m_range) {
    require(m >= 0, "scale index must be non-negative");
    const double w = opt.base_width * std::exp2(-m);
    require<ResourceError>(w >= 16.0 * grid.spacing(), "dilated bump below grid resolution");
    std::vector<double> h(grid.size()), gh(grid.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] = detail::radial_bump(grid.point(i), d, 0.5, w);
      gh[i] = h[i] * h[i];
    }
    const auto hf = SpectralField::from_real_values(grid, h);
    const double h2 = std::sqrt(hf.squared_l2_norm());
    double hinf = 0.0;
    for (double v : h) hinf = std::max(hinf, std::abs(v));
    SweepRecord rec;
    rec.params = params;
    rec.construction = "rescaled_bump";
    rec.scale = std::exp2(m);
    rec.lhs = hsq_norm(SpectralField::from_real_values(grid, gh), -params.s, params.q);
    rec.rhs = lq_norm(hf, params.eta) * std::pow(h2, 1.0 - 2.0 * iz) * std::pow(hinf, 2.0 * iz);
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    out.records.push_back(rec);
    if (h0 == 0.0) h0 = h2 * std::exp2(0.5 * m * d);
    l2_dev = std::max(l2_dev, std::abs(h2 * std::exp2(0.5 * m * d) / h0 - 1.0));
  }
  out.fit = detail::fit_records(out.records, true);
  out.diagnostics.emplace_back("h_l2_dilation_max_rel_dev", l2_dev);
  return out;
}

struct ShiftedBumpOptions {
  std::size_t points_per_unit = 32;
  double bump_width = 0.5;
};

/// Translate system phi(. - k) on a box of side >= 2N + 2 with g = sum psi(. - k), psi = 1 on supp phi.
inline ConstructionResult shifted_bump_test(const ParamTuple& params, std::span<const int> N_range, ShiftedBumpOptions opt = {}) {
  validate(params);
  const int d = params.d;
  require<DimensionError>(d == 1 || d == 2, "shifted bump test supports d = 1, 2");
  require(N_range.size() >= 2, "need at least two lattice sizes");
  require(std::has_single_bit(opt.points_per_unit), "points per unit must be a power of two");
  ConstructionResult out;
  out.predicted = predicted_exponent(params, Construction::ShiftedBump);
  const double a0 = 0.5 - 0.5 * opt.bump_width, a1 = 0.5 + 0.5 * opt.bump_width;
  const double pad = 0.8 * std::min(a0, 1.0 - a1);
  double g_dev = 0.0;
  for (int N : N_range) {
    require(N >= 1, "lattice size must be positive");
    const std::size_t L = std::bit_ceil(static_cast<std::size_t>(2 * N + 2));
    const Grid grid(d, L * opt.points_per_unit, static_cast<double>(L));
    require<ResourceError>(grid.size() <= (std::size_t{1} << 24), "box too large");
    const auto sys = OrthonormalSystem::shifted_bump(d, N, static_cast<double>(L), opt.bump_width);
    const std::size_t members = *sys.size();
    std::vector<double> mu(members, 1.0);
    mu[0] = 0.0; // ordinal 1 is k = 0
    auto plateau = [&](double t) { return plateau_profile(t, a0 - pad, a0, a1, a1 + pad); };
    auto psi_sum = [&](const std::array<double, 3>& x, bool single) {
      double v = 1.0;
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        const double y = x[a] - static_cast<double>(L) * std::floor(x[a] / static_cast<double>(L));
        const double cell = std::floor(y);
        const double k = cell > static_cast<double>(L) / 2.0 ? cell - static_cast<double>(L) : cell;
        if (single ? k != 1.0 : std::abs(k) > N) inside = false;
        v *= plateau(y - cell);
      }
      if (!single) {
        bool origin = true;
        for (int a = 0; a < d; ++a) {
          const double y = x[a] - static_cast<double>(L) * std::floor(x[a] / static_cast<double>(L));
          origin = origin && std::floor(y) == 0.0;
        }
        if (origin) inside = false;
      }
      return inside ? v : 0.0;
    };
    const auto g = SpectralField::from_function(grid, [&](const auto& x) { return psi_sum(x, false); });
    const auto psi = SpectralField::from_function(grid, [&](const auto& x) { return psi_sum(x, true); });
    const double count = static_cast<double>(members - 1);
    SeriesSpec spec{grid, sys, Coloring::explicit_values(mu), g, members, params.s, params.q, 1};
    SweepRecord rec;
    rec.params = params;
    rec.construction = "shifted_bump";
    rec.scale = N;
    rec.lhs = sq_function_gamma_norm(spec);
    const double gn = lq_norm(g, params.eta);
    rec.rhs = gn * ell_zeta_norm(std::span<const double>(mu).subspan(1), params.zeta);
    rec.ratio = safe_ratio(rec.lhs, rec.rhs);
    out.records.push_back(rec);
    g_dev = std::max(g_dev, std::abs(gn / (lq_norm(psi, params.eta) * std::pow(count, 1.0 / params.eta)) - 1.0));
  }
  out.fit = detail::fit_records(out.records, true);
  out.diagnostics.emplace_back("g_eta_additivity_max_rel_dev", g_dev);
  return out;
}

struct DirichletResult {
  std::vector<std::pair<int, double>> values;
  ExponentFit fit; // log2 norm against log2 N
  double predicted = 0.0;
  double power_law_r2 = 0.0;
  double log_law_r2 = 0.0;
  bool power_law = true;
};

/// ||D_N||_{L^eta(T)} over dyadic N on a grid with 64 N points.
inline DirichletResult dirichlet_norm_test(double eta, std::span<const int> N_range) {
  require(std::isfinite(eta) && eta >= 1.0, "eta must be >= 1");
  require(N_range.size() >= 3, "need at least three values of N");
  DirichletResult out;
  out.predicted = 1.0 - 1.0 / eta;
  std::vector<double> x, y, lnN, v;
  for (int N : N_range) {
    require(N >= 1 && std::has_single_bit(static_cast<unsigned>(N)), "N must be a power of two");
    const Grid grid(1, 64 * static_cast<std::size_t>(N), 1.0);
    const double val = lq_norm(dirichlet_kernel(grid, N), eta);
    out.values.emplace_back(N, val);
    x.push_back(std::log2(N));
    y.push_back(std::log2(val));
    lnN.push_back(std::log(N));
    v.push_back(val);
  }
  out.fit = fit_exponent(x, y);
  out.power_law_r2 = out.fit.r2;
  out.log_law_r2 = least_squares(lnN, v).r2;
  out.power_law = out.power_law_r2 >= out.log_law_r2;
  return out;
}

struct SweepCell {
  ParamTuple params;
  std::string construction;
  double slack = 0.0; // -predicted / d
  Classification classification = Classification::Strict;
  double predicted = 0.0;
  ExponentFit fit;
  std::string label; // bounded, divergent, log-divergent, inconclusive, error
  std::string error;
};

struct SweepOptions {
  std::vector<int> freq_block_range{3, 4, 5, 6, 7};
  std::vector<int> rescaled_bump_range{0, 1, 2, 3, 4, 5};
  std::vector<int> shifted_bump_range{4, 8, 16, 32};
  std::vector<int> scaling_range{0, 1, 2, 3, 4};
  GrowthThresholds thresholds;
};

inline std::string growth_label(GrowthClass c) {
  switch (c) {
  case GrowthClass::Convergent: return "bounded";
  case GrowthClass::Divergent: return "divergent";
  case GrowthClass::LogDivergent: return "log-divergent";
  default: return "inconclusive";
  }
}

/// Run one construction per tuple; failures are recorded per cell.
inline std::vector<SweepCell> boundary_sweep(std::span<const ParamTuple> tuples, Construction c, const SweepOptions& opt = {},
                                             unsigned workers = 1) {
  std::vector<SweepCell> cells(tuples.size());
  parallel_for(tuples.size(), workers, [&](std::size_t i) {
    SweepCell& cell = cells[i];
    cell.params = tuples[i];
    cell.construction = to_string(c);
    try {
      cell.predicted = predicted_exponent(tuples[i], c);
      cell.slack = -cell.predicted / tuples[i].d + 0.0;
      if (std::abs(cell.slack) <= equality_tolerance) cell.classification = Classification::Equality;
      else cell.classification = cell.slack > 0.0 ? Classification::Strict : Classification::Violated;
      std::vector<std::pair<double, double>> series;
      if (c == Construction::SpdeScaling) {
        const auto r = scaling_diagnostic(tuples[i].d / tuples[i].zeta, tuples[i], opt.scaling_range);
        cell.fit = r.fit;
        for (const auto& rec : r.records) series.emplace_back(std::exp2(rec.m), rec.ratio);
      } else {
        ConstructionResult r;
        if (c == Construction::FrequencyBlock) r = frequency_block_test(tuples[i], opt.freq_block_range);
        else if (c == Construction::RescaledBump) r = rescaled_bump_test(tuples[i], opt.rescaled_bump_range);
        else r = shifted_bump_test(tuples[i], opt.shifted_bump_range);
        cell.fit = r.fit;
        for (const auto& rec : r.records)
          series.emplace_back(c == Construction::FrequencyBlock ? std::exp2(rec.scale) : rec.scale, rec.ratio);
      }
      cell.label = growth_label(classify_growth(series, opt.thresholds).classification);
    } catch (const std::exception& e) {
      cell.label = "error";
      cell.error = e.what();
    }
  });
  return cells;
}

} // namespace gammanoise
