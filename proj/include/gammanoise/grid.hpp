#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "error.hpp"

namespace gammanoise {

using Lattice = std::array<int, 3>;

/// Uniform periodic grid on the box [0, L)^d with n points per axis.
///
/// Data is stored row-major with axis 0 slowest. Frequencies follow the DFT
/// layout: index i < n/2 maps to i, index n/2 to the Nyquist frequency +n/2,
/// larger indices to i - n.
class Grid {
public:
  Grid() = default;
  Grid(int dim, std::size_t n, double length = 1.0) : dim_(dim), n_(n), length_(length) {
    require<DimensionError>(dim >= 1 && dim <= 3, "grid dimension must be 1, 2 or 3");
    require<ParameterError>(n >= 2 && std::has_single_bit(n), "grid size must be a power of two >= 2");
    require<ParameterError>(std::isfinite(length) && length > 0.0, "box length must be positive");
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= n;
  }

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  double length() const { return length_; }
  std::size_t size() const { return size_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  double volume() const { return std::pow(length_, dim_); }
  double cell_measure() const { return std::pow(spacing(), dim_); }

  int signed_frequency(std::size_t i) const {
    return i <= n_ / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n_);
  }

  Lattice frequency(std::size_t flat) const {
    Lattice k{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      k[a] = signed_frequency(flat % n_);
      flat /= n_;
    }
    return k;
  }

  Lattice multi_index(std::size_t flat) const {
    Lattice idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n_);
      flat /= n_;
    }
    return idx;
  }

  bool contains(const Lattice& k) const {
    const int half = static_cast<int>(n_ / 2);
    for (int a = 0; a < dim_; ++a)
      if (k[a] <= -half || k[a] > half) return false;
    return true;
  }

  std::size_t flat_index(const Lattice& k) const {
    if (!contains(k)) throw RangeError("frequency outside the grid band");
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) {
      const int wrapped = k[a] < 0 ? k[a] + static_cast<int>(n_) : k[a];
      flat = flat * n_ + static_cast<std::size_t>(wrapped);
    }
    return flat;
  }

  /// |k/L|^2 for the frequency stored at `flat`.
  double wavenumber_sq(std::size_t flat) const { return wavenumber_sq(frequency(flat)); }
  double wavenumber_sq(const Lattice& k) const {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) s += static_cast<double>(k[a]) * k[a];
    return s / (length_ * length_);
  }

  std::array<double, 3> point(std::size_t flat) const {
    const Lattice idx = multi_index(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = idx[a] * spacing();
    return x;
  }

  Grid refined(std::size_t factor) const { return Grid(dim_, n_ * factor, length_); }
  Grid with_n(std::size_t n) const { return Grid(dim_, n, length_); }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

  std::string describe() const {
    return "d=" + std::to_string(dim_) + " n=" + std::to_string(n_) + " L=" + std::to_string(length_);
  }

private:
  int dim_ = 1;
  std::size_t n_ = 2;
  double length_ = 1.0;
  std::size_t size_ = 2;
};

/// Bessel potential symbol (1 + 4 pi^2 |xi|^2)^(sigma/2).
inline double bessel_symbol(double wavenumber_sq, double sigma) {
  return std::pow(1.0 + 4.0 * std::numbers::pi * std::numbers::pi * wavenumber_sq, 0.5 * sigma);
}

} // namespace gammanoise
