#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "grid.hpp"

namespace gammanoise {

/// Sentinel for an infinite summability exponent.
inline constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

inline bool is_infinite_exponent(double e) { return std::isinf(e) && e > 0.0; }
/// 1/e with the infinite sentinel mapped to 0 explicitly.
inline double reciprocal_exponent(double e) { return is_infinite_exponent(e) ? 0.0 : 1.0 / e; }

enum class IndexKind { Natural, Lattice, Haar };

/// Position of one member of an orthonormal system.
struct SystemIndex {
  IndexKind kind = IndexKind::Natural;
  std::size_t ordinal = 1; // 1-based enumeration position
  int dim = 1;
  Lattice k{0, 0, 0};      // Fourier frequency, bump translate or signed Haar translate
  double wavenumber_sq = 0.0;
  int level = 0;
  int orientation = 0;     // Haar type sigma as a bit mask, nonzero
};

namespace coloring {
struct Constant {
  double value = 1.0;
};
struct PowerLaw {
  double alpha = 1.0;
};
struct MaternMultiplier {
  double alpha = 1.0;
};
struct BlockIndicator {
  int N = 0;
};
struct Haar {
  double alpha = 0.0;
  double beta = 1.0;
};
struct Explicit {
  std::vector<double> values;
};
} // namespace coloring

/// Coloring sequence mu evaluated on system indices.
class Coloring {
public:
  using Kind = std::variant<coloring::Constant, coloring::PowerLaw, coloring::MaternMultiplier,
                            coloring::BlockIndicator, coloring::Haar, coloring::Explicit>;

  Coloring() : kind_(coloring::Constant{1.0}) {}
  explicit Coloring(Kind kind, double scale = 1.0) : kind_(std::move(kind)), scale_(scale) { validate(); }

  static Coloring constant(double v) { return Coloring(coloring::Constant{v}); }
  static Coloring power_law(double alpha) { return Coloring(coloring::PowerLaw{alpha}); }
  static Coloring matern(double alpha) { return Coloring(coloring::MaternMultiplier{alpha}); }
  static Coloring block(int N) { return Coloring(coloring::BlockIndicator{N}); }
  static Coloring haar(double alpha, double beta) { return Coloring(coloring::Haar{alpha, beta}); }
  static Coloring explicit_values(std::vector<double> v) { return Coloring(coloring::Explicit{std::move(v)}); }

  const Kind& kind() const { return kind_; }
  double scale() const { return scale_; }
  Coloring scaled(double c) const { return Coloring(kind_, scale_ * c); }

  double operator()(const SystemIndex& idx) const { return scale_ * std::visit([&](const auto& c) { return eval(c, idx); }, kind_); }

  std::string name() const {
    static const char* names[] = {"constant", "power_law", "matern", "block", "haar", "explicit"};
    return names[kind_.index()];
  }

private:
  void validate() const {
    require(std::isfinite(scale_), "coloring scale must be finite");
    std::visit(
        [](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, coloring::Constant>) {
            require(std::isfinite(c.value), "constant coloring must be finite");
          } else if constexpr (std::is_same_v<T, coloring::PowerLaw> || std::is_same_v<T, coloring::MaternMultiplier>) {
            require(std::isfinite(c.alpha) && c.alpha > 0.0, "coloring exponent must be positive");
          } else if constexpr (std::is_same_v<T, coloring::BlockIndicator>) {
            require(c.N >= 0 && c.N < 28, "block index out of range");
          } else if constexpr (std::is_same_v<T, coloring::Haar>) {
            require(std::isfinite(c.alpha) && c.alpha >= 0.0, "Haar coloring needs alpha >= 0");
            require(std::isfinite(c.beta) && c.beta > 0.0, "Haar coloring needs beta > 0");
          } else {
            for (double v : c.values) require(std::isfinite(v), "explicit coloring entries must be finite");
          }
        },
        kind_);
  }

  static double eval(const coloring::Constant& c, const SystemIndex&) { return c.value; }
  static double eval(const coloring::PowerLaw& c, const SystemIndex& i) {
    return std::pow(static_cast<double>(i.ordinal), -c.alpha);
  }
  static double eval(const coloring::MaternMultiplier& c, const SystemIndex& i) {
    require<ContractError>(i.kind == IndexKind::Lattice, "Matern coloring needs a lattice-indexed system");
    return bessel_symbol(i.wavenumber_sq, -c.alpha);
  }
  static double eval(const coloring::BlockIndicator& c, const SystemIndex& i) {
    require<ContractError>(i.kind == IndexKind::Lattice, "block coloring needs a lattice-indexed system");
    const long lo = 1L << c.N;
    const long hi = 3L * (1L << c.N) / 2;
    for (int a = 0; a < i.dim; ++a)
      if (i.k[a] < lo || i.k[a] > hi) return 0.0;
    return 1.0;
  }
  static double eval(const coloring::Haar& c, const SystemIndex& i) {
    require<ContractError>(i.kind == IndexKind::Haar, "Haar coloring needs the Haar system");
    require(c.beta > 0.5 * i.dim, "Haar coloring needs beta > d/2");
    double k2 = 0.0;
    for (int a = 0; a < i.dim; ++a) k2 += static_cast<double>(i.k[a]) * i.k[a];
    return std::pow(1.0 + k2, -0.5 * c.beta) * std::exp2(-i.level * c.alpha);
  }
  static double eval(const coloring::Explicit& c, const SystemIndex& i) {
    return i.ordinal >= 1 && i.ordinal <= c.values.size() ? c.values[i.ordinal - 1] : 0.0;
  }

  Kind kind_;
  double scale_ = 1.0;
};

} // namespace gammanoise
