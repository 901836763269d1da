#pragma once

#include <vector>

#include "fit.hpp"
#include "gaussian_series.hpp"
#include "params.hpp"

namespace gammanoise {

struct ScalingOptions {
  int level_max = 12;
  std::size_t n = 8192; // points per axis on the unit box
  double beta = 1.0;
  double bump_width = 0.5;
};

struct ScalingRecord {
  int m = 0;
  double lhs = 0.0; // square-function norm of g_m * Haar noise in H^{-s,q}
  double rhs = 0.0; // ||g_m||_{L^eta}
  double ratio = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRecord> records;
  ExponentFit fit;
  double predicted = 0.0;
};

/// Scaling exponent of the Haar-driven noise against ||g_m||_eta for g_m = bump(2^m .).
///
/// The noise has coloring 2^{-j alpha}(1 + |k|^2)^{-beta/2} on levels 0..level_max
/// of the unit box, at the critical zeta = d / alpha. The ell^zeta norm of the
/// coloring does not depend on m and drops out of the fitted exponent.
inline ScalingResult scaling_diagnostic(double alpha, const ParamTuple& params, std::span<const int> m_range,
                                        const ScalingOptions& opt = {}) {
  require(alpha > 0.0, "alpha must be positive");
  const int d = params.d;
  require(d / alpha >= 2.0, "critical zeta = d/alpha must be at least 2");
  require(std::abs(params.zeta - d / alpha) <= 1e-9, "scaling diagnostic needs zeta = d/alpha");
  validate(params);
  require(opt.beta > 0.5 * d, "beta must exceed d/2");
  require(m_range.size() >= 2, "need at least two scales");
  const Grid grid(d, opt.n, 1.0);
  require<ResourceError>(grid.size() <= (std::size_t{1} << 24), "scaling grid too large");
  require<ResourceError>(std::exp2(-opt.level_max) >= 2.0 * grid.spacing() - 1e-15, "grid does not resolve the finest Haar level");

  const system::Haar haar{d, 0, opt.level_max, 1.0};
  const Coloring mu = Coloring::haar(alpha, opt.beta);
  const double center = 0.5;

  ScalingResult out;
  out.predicted = predicted_exponent(params, Construction::SpdeScaling);
  for (int m : m_range) {
    require(m >= 0, "scale index must be non-negative");
    const double w = opt.bump_width * std::exp2(-m);
    require<ResourceError>(w >= 8.0 * grid.spacing(), "bump narrower than 8 cells");
    std::vector<double> gv(grid.size());
    for (std::size_t i = 0; i < gv.size(); ++i) {
      const auto x = grid.point(i);
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) r2 += (x[a] - center) * (x[a] - center);
      gv[i] = bump_profile(std::sqrt(r2), w);
    }
    const auto g = SpectralField::from_real_values(grid, gv);
    std::vector<double> S(grid.size(), 0.0);
    for (int j = 0; j <= opt.level_max; ++j) {
      const std::size_t count = OrthonormalSystem::haar_level_count(haar, j);
      const double width = std::exp2(-j);
      for (std::size_t r = 0; r < count; ++r) {
        const SystemIndex idx = OrthonormalSystem::haar_index(haar, j, r);
        bool overlaps = true;
        for (int a = 0; a < d && overlaps; ++a) {
          double start = std::fmod(-idx.k[a] * width, 1.0);
          if (start < 0.0) start += 1.0;
          overlaps = start < center + 0.5 * w && start + width > center - 0.5 * w;
        }
        if (!overlaps) continue;
        const double c = mu(idx);
        auto f = OrthonormalSystem::haar_values(haar, idx, grid);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] *= c * gv[i];
        const auto v = bessel_apply(SpectralField::from_real_values(grid, f), -params.s).values();
        for (std::size_t i = 0; i < S.size(); ++i) S[i] += std::norm(v[i]);
      }
    }
    NeumaierSum acc;
    for (double x : S) acc.add(std::pow(x, 0.5 * params.q));
    ScalingRecord rec;
    rec.m = m;
    rec.lhs = std::pow(acc.value() * grid.cell_measure(), 1.0 / params.q);
    rec.rhs = lq_norm(g, params.eta);
    rec.ratio = rec.lhs / rec.rhs;
    out.records.push_back(rec);
  }
  std::vector<double> x, y;
  for (const auto& r : out.records) {
    x.push_back(r.m);
    y.push_back(std::log2(r.ratio));
  }
  out.fit = fit_exponent(x, y);
  return out;
}

} // namespace gammanoise
