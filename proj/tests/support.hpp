#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "gammanoise/rng.hpp"
#include "gammanoise/spectral_field.hpp"

namespace gammanoise::testing {

/// O(N^2) DFT oracle: c_k = N^{-1} sum_x f(x) exp(-2 pi i k.x / L).
inline std::vector<Complex> naive_coefficients(const Grid& g, const std::vector<Complex>& values) {
  std::vector<Complex> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Lattice kk = g.frequency(k);
    Complex acc = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      const auto p = g.point(x);
      double phase = 0.0;
      for (int a = 0; a < g.dim(); ++a) phase += kk[a] * p[a];
      acc += values[x] * std::polar(1.0, -2.0 * std::numbers::pi * phase / g.length());
    }
    out[k] = acc / static_cast<double>(g.size());
  }
  return out;
}

/// Random field with Gaussian values at |k|_inf <= kmax, built in physical space.
inline SpectralField random_field(const Grid& g, int kmax, rng::Stream& st, bool real) {
  std::vector<Complex> c(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Lattice k = g.frequency(i);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside = inside && std::abs(k[a]) <= kmax;
    if (inside) c[i] = st.complex_gaussian();
  }
  auto f = SpectralField(g, std::move(c), false);
  if (!real) return f;
  auto v = f.values();
  std::vector<double> re(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) re[i] = v[i].real();
  return SpectralField::from_real_values(g, re);
}

} // namespace gammanoise::testing
