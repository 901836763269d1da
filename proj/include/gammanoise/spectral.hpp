#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectral_field.hpp"
#include "stats.hpp"

namespace gammanoise {

/// Bessel potential (1 - Delta)^(sigma/2).
inline SpectralField bessel_apply(const SpectralField& f, double sigma) {
  require(std::isfinite(sigma), "Bessel order must be finite");
  const Grid& g = f.grid();
  SpectralField out = f;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= bessel_symbol(g.wavenumber_sq(i), sigma);
  return out;
}

/// ||f||_{L^q} by the rectangle rule on the grid refined by `oversample`.
inline double lq_norm(const SpectralField& f, double q, std::size_t oversample = 1) {
  require(std::isfinite(q) && q >= 1.0, "lq_norm needs finite q >= 1");
  const SpectralField r = resample(f, f.grid().n() * oversample);
  const auto v = r.values();
  NeumaierSum acc;
  for (const auto& x : v) acc.add(std::pow(std::abs(x), q));
  return std::pow(acc.value() * r.grid().cell_measure(), 1.0 / q);
}

inline double sup_norm(const SpectralField& f, std::size_t oversample = 1) {
  const auto v = resample(f, f.grid().n() * oversample).values();
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Weak L^p quasi-norm sup_t t |{|f| > t}|^(1/p) from the sorted grid values.
inline double weak_lp_norm(const SpectralField& f, double p, std::size_t oversample = 1) {
  require(std::isfinite(p) && p >= 1.0, "weak_lp_norm needs finite p >= 1");
  const SpectralField r = resample(f, f.grid().n() * oversample);
  const auto v = r.values();
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::abs(v[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  const double cm = r.grid().cell_measure();
  double best = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j + 1 < a.size() && a[j + 1] == a[j]) continue;
    best = std::max(best, a[j] * std::pow(static_cast<double>(j + 1) * cm, 1.0 / p));
  }
  return best;
}

/// ||(1 - Delta)^(s/2) f||_{L^q}.
inline double hsq_norm(const SpectralField& f, double s, double q, std::size_t oversample = 1) {
  return lq_norm(bessel_apply(f, s), q, oversample);
}

inline int lattice_sup_norm(const Lattice& k, int dim) {
  int m = 0;
  for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(k[a]));
  return m;
}

/// Littlewood-Paley block: keeps 2^(j-1) <= |k|_inf < 2^j, j = 0 keeps k = 0.
inline SpectralField lp_block(const SpectralField& f, int j) {
  require(j >= 0, "Littlewood-Paley index must be non-negative");
  const Grid& g = f.grid();
  const long lo = j == 0 ? 0 : (1L << (j - 1));
  const long hi = j >= 62 ? std::numeric_limits<long>::max() : (1L << j);
  SpectralField out = f;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const long m = lattice_sup_norm(g.frequency(i), g.dim());
    if (m < lo || m >= hi) c[i] = 0.0;
  }
  return out;
}

/// Kernel of (1 - Delta)^(-s/2) on the box, normalised to integral one.
inline SpectralField bessel_kernel(const Grid& grid, double s) {
  require(s > 0.0 && s < grid.dim(), "Bessel kernel order must lie in (0, d)");
  std::vector<Complex> c(grid.size());
  const double inv_vol = 1.0 / grid.volume();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = inv_vol * bessel_symbol(grid.wavenumber_sq(i), -s);
  return SpectralField(grid, std::move(c), true);
}

/// Heat kernel k_t with multiplier exp(-4 pi^2 |xi|^2 t).
inline SpectralField heat_kernel(const Grid& grid, double t) {
  require(t > 0.0, "heat kernel time must be positive");
  std::vector<Complex> c(grid.size());
  const double inv_vol = 1.0 / grid.volume();
  const double fac = 4.0 * std::numbers::pi * std::numbers::pi * t;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = inv_vol * std::exp(-fac * grid.wavenumber_sq(i));
  return SpectralField(grid, std::move(c), true);
}

/// Heat semigroup S(t) = exp(t Delta).
inline SpectralField heat_apply(const SpectralField& f, double t) {
  const Grid& g = f.grid();
  const double fac = 4.0 * std::numbers::pi * std::numbers::pi * t;
  SpectralField out = f;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-fac * g.wavenumber_sq(i));
  return out;
}

/// One-dimensional Dirichlet kernel sum_{|k| <= N} exp(2 pi i k x / L).
inline SpectralField dirichlet_kernel(const Grid& grid, int N) {
  require<DimensionError>(grid.dim() == 1, "Dirichlet kernel is one-dimensional");
  require<ResourceError>(N >= 0 && 2 * static_cast<std::size_t>(N) < grid.n(), "grid too coarse for Dirichlet kernel");
  auto f = SpectralField::zero(grid, true);
  for (int k = -N; k <= N; ++k) f.coeffs()[grid.flat_index({k, 0, 0})] = 1.0;
  return f;
}

/// Discrete L^2 inner product <a, b> = int a conj(b).
inline Complex inner_product(const SpectralField& a, const SpectralField& b) {
  require<DimensionError>(a.grid() == b.grid(), "inner product on different grids");
  Complex s{};
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += a.coeffs()[i] * std::conj(b.coeffs()[i]);
  return a.grid().volume() * s;
}

} // namespace gammanoise
