#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "bumps.hpp"
#include "spectral.hpp"

namespace gammanoise {

/// Kernel f and multiplier g of A_{f,g} h(x) = int f(x - y) g(y) h(y) dy, target L^q.
struct ConvPair {
  SpectralField f;
  SpectralField g;
  double q = 2.0;
  std::size_t oversample = 1;
};

namespace detail {

inline SpectralField squared_modulus(const SpectralField& f, std::size_t oversample) {
  const SpectralField r = resample(f, f.grid().n() * oversample);
  const auto v = r.values();
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::norm(v[i]);
  return SpectralField::from_real_values(r.grid(), a);
}

} // namespace detail

/// || |f|^2 * |g|^2 ||_{L^{q/2}}^{1/2}.
inline double afg_gamma_norm(const ConvPair& pair) {
  require(std::isfinite(pair.q) && pair.q >= 2.0, "convolution operator norm needs finite q >= 2");
  require<DimensionError>(pair.f.grid() == pair.g.grid(), "kernel and multiplier live on different grids");
  const auto F = detail::squared_modulus(pair.f, pair.oversample);
  const auto G = detail::squared_modulus(pair.g, pair.oversample);
  return std::sqrt(lq_norm(convolve(F, G), 0.5 * pair.q));
}

/// Frobenius norm of the operator matrix K(x_i, y_j) = f(x_i - y_j) g(y_j), assembled row by row,
/// in the continuum normalisation (sum |K_ij|^2 cm^2)^{1/2}.
inline double afg_bruteforce_hs(const ConvPair& pair, std::size_t max_cells = 4096) {
  const Grid& grid = pair.f.grid();
  require<DimensionError>(grid == pair.g.grid(), "kernel and multiplier live on different grids");
  require<ResourceError>(grid.size() <= max_cells, "grid too large for the dense operator oracle");
  const auto fv = pair.f.values();
  const auto gv = pair.g.values();
  const std::size_t N = grid.size(), n = grid.n();
  const double cm = grid.cell_measure();
  std::vector<Complex> row(N);
  NeumaierSum acc;
  for (std::size_t i = 0; i < N; ++i) {
    const Lattice xi = grid.multi_index(i);
    for (std::size_t j = 0; j < N; ++j) {
      const Lattice yj = grid.multi_index(j);
      std::size_t diff = 0;
      for (int a = 0; a < grid.dim(); ++a)
        diff = diff * n + static_cast<std::size_t>((xi[a] - yj[a] + static_cast<int>(n)) % static_cast<int>(n));
      row[j] = fv[diff] * gv[j] * cm;
    }
    for (const auto& k : row) acc.add(std::norm(k));
  }
  return std::sqrt(acc.value());
}

struct YoungCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// afg_gamma_norm against ||kernel||_{L^{r,inf}} ||g||_{L^eta} with 1/q + 1/2 = 1/r + 1/eta.
inline YoungCheck gamma_young_check(const SpectralField& kernel, const SpectralField& g, double q, double r, double eta) {
  for (double e : {q, r, eta}) require(std::isfinite(e) && e > 2.0, "Young exponents must lie in (2, inf)");
  require(std::abs(1.0 / q + 0.5 - 1.0 / r - 1.0 / eta) <= 1e-9, "exponents violate 1/q + 1/2 = 1/r + 1/eta");
  YoungCheck out;
  out.lhs = afg_gamma_norm({kernel, g, q});
  out.rhs = weak_lp_norm(kernel, r) * lq_norm(g, eta);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

/// Periodic surrogate of ||M_g||_{gamma(L^2, H^{-s,q})}.
inline double mg_sobolev_gamma_norm(const SpectralField& g, double s, double q) {
  require(q >= 2.0, "q must be >= 2");
  return afg_gamma_norm({bessel_kernel(g.grid(), s), g, q});
}

/// sum_{k in Z} exp(-a k^2), summed until the terms vanish.
inline double theta_sum(double a) {
  require(a > 0.0, "theta sum needs a positive rate");
  double s = 1.0;
  for (long k = 1;; ++k) {
    const double term = std::exp(-a * static_cast<double>(k) * k);
    s += 2.0 * term;
    if (term < 1e-18 * s) break;
  }
  return s;
}

/// ||S(t) M_g||_{S^2} = ||g||_2 L^{-d/2} (sum_{k in Z^d} exp(-8 pi^2 |k/L|^2 t))^{1/2}.
inline double schatten_heat_norm(const SpectralField& g, double t) {
  require(t > 0.0 && std::isfinite(t), "time must be positive");
  const Grid& grid = g.grid();
  const double L = grid.length();
  const double theta = theta_sum(8.0 * std::numbers::pi * std::numbers::pi * t / (L * L));
  return std::sqrt(g.squared_l2_norm() * std::pow(theta, grid.dim()) / grid.volume());
}

/// ||S(t)(g f)||_2 / ||f||_2 with g = f = sqrt(k_t), a lower bound for ||S(t) M_g||_{S^2}.
inline double heat_sharpness_witness(const Grid& grid, double t) {
  const auto kt = heat_kernel(grid, t).real_values();
  std::vector<double> root(kt.size());
  for (std::size_t i = 0; i < kt.size(); ++i) root[i] = std::sqrt(std::max(kt[i], 0.0));
  const auto f = SpectralField::from_real_values(grid, root);
  std::vector<double> prod(kt.size());
  for (std::size_t i = 0; i < kt.size(); ++i) prod[i] = root[i] * root[i];
  const auto gf = SpectralField::from_real_values(grid, prod);
  return std::sqrt(heat_apply(gf, t).squared_l2_norm() / f.squared_l2_norm());
}

enum class EndpointKind { Eta2, EtaQ };

struct EndpointMode {
  EndpointKind kind = EndpointKind::Eta2;
  double exponent = 2.0; // q for eta2, eta for etaq
};

struct EndpointResult {
  double measured_constant = 0.0;
  double reference_norm = 0.0;
  std::vector<double> iterates;
};

/// Best constant of A_{f,.} over a finite input family, next to its predicted size.
///
/// eta2: mollifiers g_n = sqrt(n^d G(n .)), n = 2^0..2^(levels-1), reference ||f||_q.
/// etaq: cube indicators of side L 2^-l shrinking to the whole box last, reference ||f||_2.
inline EndpointResult endpoint_checks(const SpectralField& f, EndpointMode mode, int levels = 6) {
  require(mode.exponent >= 2.0 && std::isfinite(mode.exponent), "endpoint exponent must be >= 2");
  require(levels >= 2, "need at least two family members");
  const Grid& grid = f.grid();
  const double L = grid.length();
  const int d = grid.dim();
  EndpointResult out;
  if (mode.kind == EndpointKind::Eta2) {
    const double w0 = 0.5 * L;
    require<ResourceError>(w0 / std::exp2(levels - 1) >= 8.0 * grid.spacing(), "grid too coarse for the mollifier family");
    const double mass = bump_lp_norm(d, w0, 1.0);
    for (int l = 0; l < levels; ++l) {
      const double scale = std::exp2(l);
      auto g = SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
          const double y = x[a] - L * std::round(x[a] / L);
          r2 += y * y;
        }
        return std::sqrt(std::pow(scale, d) * bump_profile(scale * std::sqrt(r2), w0) / mass);
      });
      out.iterates.push_back(afg_gamma_norm({f, g, mode.exponent}) / std::sqrt(g.squared_l2_norm()));
    }
    out.reference_norm = lq_norm(f, mode.exponent, 2);
  } else {
    for (int l = levels - 1; l >= 0; --l) {
      const double half = 0.5 * L * std::exp2(-l);
      require<ResourceError>(half >= grid.spacing(), "grid too coarse for the cube probes");
      auto g = SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
        for (int a = 0; a < d; ++a) {
          const double y = x[a] - L * std::round(x[a] / L);
          if (!(y >= -half && y < half)) return 0.0;
        }
        return 1.0;
      });
      const double gn = lq_norm(g, mode.exponent);
      out.iterates.push_back(gn > 0.0 ? afg_gamma_norm({f, g, mode.exponent}) / gn : 0.0);
    }
    out.reference_norm = std::sqrt(f.squared_l2_norm());
  }
  for (double v : out.iterates) out.measured_constant = std::max(out.measured_constant, v);
  return out;
}

} // namespace gammanoise
