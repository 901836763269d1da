#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"

namespace gammanoise {

using Complex = std::complex<double>;

/// A band-limited periodic field stored by its Fourier coefficients.
///
/// f(x) = sum_k c_k exp(2 pi i k.x / L), so c_k is the DFT of the grid values
/// divided by n^d and does not depend on the grid size. `is_real` records that
/// the field came from real data; resampling keeps such fields real.
class SpectralField {
public:
  SpectralField() = default;
  SpectralField(Grid grid, std::vector<Complex> coeffs, bool real = false)
      : grid_(grid), coeffs_(std::move(coeffs)), real_(real) {
    require<DimensionError>(coeffs_.size() == grid_.size(), "coefficient count does not match grid");
  }

  static SpectralField zero(const Grid& grid, bool real = true) {
    return SpectralField(grid, std::vector<Complex>(grid.size()), real);
  }
  static SpectralField constant(const Grid& grid, double value) {
    auto f = zero(grid, true);
    f.coeffs_[0] = value;
    return f;
  }
  /// exp(2 pi i k.x / L), unnormalized.
  static SpectralField mode(const Grid& grid, const Lattice& k) {
    auto f = zero(grid, false);
    f.coeffs_[grid.flat_index(k)] = 1.0;
    return f;
  }

  static SpectralField from_values(const Grid& grid, std::vector<Complex> values, bool real = false) {
    require<DimensionError>(values.size() == grid.size(), "value count does not match grid");
    fft_inplace(grid, values, -1);
    const double inv = 1.0 / static_cast<double>(grid.size());
    for (auto& c : values) c *= inv;
    return SpectralField(grid, std::move(values), real);
  }
  static SpectralField from_real_values(const Grid& grid, std::span<const double> values) {
    std::vector<Complex> v(values.begin(), values.end());
    return from_values(grid, std::move(v), true);
  }
  static SpectralField from_function(const Grid& grid, const std::function<double(const std::array<double, 3>&)>& fn) {
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
    return from_values(grid, std::move(v), true);
  }

  const Grid& grid() const { return grid_; }
  bool is_real() const { return real_; }
  void set_real(bool r) { real_ = r; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex coeff(const Lattice& k) const { return coeffs_[grid_.flat_index(k)]; }

  std::vector<Complex> values() const {
    std::vector<Complex> v = coeffs_;
    fft_inplace(grid_, v, +1);
    return v;
  }
  std::vector<double> real_values() const {
    auto v = values();
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
    return out;
  }

  /// ||f||_2^2 by Plancherel.
  double squared_l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return grid_.volume() * s;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require<DimensionError>(grid_ == o.grid_, "grids differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require<DimensionError>(grid_ == o.grid_, "grids differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    real_ = real_ && o.real_;
    return *this;
  }
  SpectralField& operator*=(Complex a) {
    for (auto& c : coeffs_) c *= a;
    if (a.imag() != 0.0) real_ = false;
    return *this;
  }
  void axpy(Complex a, const SpectralField& x) {
    require<DimensionError>(grid_ == x.grid_, "grids differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
    real_ = real_ && x.real_ && a.imag() == 0.0;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

  /// Multiply every coefficient by symbol(k).
  SpectralField apply_multiplier(const std::function<double(const Lattice&)>& symbol) const {
    SpectralField out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] *= symbol(grid_.frequency(i));
    return out;
  }

private:
  Grid grid_;
  std::vector<Complex> coeffs_;
  bool real_ = false;
};

/// Zero-pad or truncate the spectrum onto a grid with `new_n` points per axis.
///
/// For real fields the Nyquist coefficient is split evenly between +n/2 and
/// -n/2 on refinement and folded back on coarsening.
inline SpectralField resample(const SpectralField& f, std::size_t new_n) {
  const Grid& g = f.grid();
  if (new_n == g.n()) return f;
  const Grid target = g.with_n(new_n);
  std::vector<Complex> out(target.size());
  const int half_old = static_cast<int>(g.n() / 2);
  const int half_new = static_cast<int>(new_n / 2);
  const bool refine = new_n > g.n();
  const int d = g.dim();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex c = f.coeffs()[i];
    if (c == Complex{}) continue;
    const Lattice k = g.frequency(i);
    std::array<std::array<int, 2>, 3> choice{};
    std::array<int, 3> count{1, 1, 1};
    double weight = 1.0;
    bool keep = true;
    for (int a = 0; a < d; ++a) {
      choice[a] = {k[a], k[a]};
      if (refine) {
        if (f.is_real() && k[a] == half_old) {
          choice[a] = {half_old, -half_old};
          count[a] = 2;
          weight *= 0.5;
        }
      } else {
        if (k[a] > half_new || k[a] < -half_new) keep = false;
        else if (k[a] == -half_new) {
          if (f.is_real()) choice[a] = {half_new, half_new};
          else keep = false;
        }
      }
    }
    if (!keep) continue;
    for (int i0 = 0; i0 < count[0]; ++i0)
      for (int i1 = 0; i1 < count[1]; ++i1)
        for (int i2 = 0; i2 < count[2]; ++i2) {
          Lattice t{choice[0][i0], d > 1 ? choice[1][i1] : 0, d > 2 ? choice[2][i2] : 0};
          out[target.flat_index(t)] += weight * c;
        }
  }
  return SpectralField(target, std::move(out), f.is_real());
}

/// Pointwise product evaluated on the grid refined by `oversample`.
inline SpectralField multiply(const SpectralField& a, const SpectralField& b, std::size_t oversample = 2) {
  require<DimensionError>(a.grid() == b.grid(), "product operands live on different grids");
  require(oversample >= 1 && std::has_single_bit(oversample), "oversample must be a power of two");
  const std::size_t fine = a.grid().n() * oversample;
  auto va = resample(a, fine).values();
  const auto vb = resample(b, fine).values();
  for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return SpectralField::from_values(a.grid().with_n(fine), std::move(va), a.is_real() && b.is_real());
}

/// Periodic convolution on the box: coefficients L^d a_k b_k.
inline SpectralField convolve(const SpectralField& a, const SpectralField& b) {
  require<DimensionError>(a.grid() == b.grid(), "convolution operands live on different grids");
  std::vector<Complex> out(a.grid().size());
  const double vol = a.grid().volume();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = vol * a.coeffs()[i] * b.coeffs()[i];
  return SpectralField(a.grid(), std::move(out), a.is_real() && b.is_real());
}

} // namespace gammanoise
