#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <variant>

#include "bumps.hpp"
#include "coloring.hpp"
#include "spectral_field.hpp"
#include "stats.hpp"

namespace gammanoise {

namespace detail {

inline long lattice_norm_sq(const Lattice& k) {
  return static_cast<long>(k[0]) * k[0] + static_cast<long>(k[1]) * k[1] + static_cast<long>(k[2]) * k[2];
}

// Lattice points ordered by |k|^2, then lexicographically. Snapshots are
// immutable and shared, so concurrent readers never see a reallocation.
inline std::shared_ptr<const std::vector<Lattice>> fourier_ordering(int dim, std::size_t count) {
  static std::mutex m;
  static std::map<int, std::shared_ptr<const std::vector<Lattice>>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[dim];
  if (slot && slot->size() >= count) return slot;
  long R = 2;
  while (true) {
    const long side = 2 * R + 1;
    require<ResourceError>(std::pow(static_cast<double>(side), dim) < 6.0e7, "Fourier enumeration too large");
    std::vector<Lattice> pts;
    const long r1 = dim > 1 ? R : 0;
    const long r2 = dim > 2 ? R : 0;
    for (long a = -R; a <= R; ++a)
      for (long b = -r1; b <= r1; ++b)
        for (long c = -r2; c <= r2; ++c) {
          Lattice k{static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
          if (lattice_norm_sq(k) <= R * R) pts.push_back(k);
        }
    if (pts.size() >= count) {
      std::sort(pts.begin(), pts.end(), [](const Lattice& x, const Lattice& y) {
        const long nx = lattice_norm_sq(x), ny = lattice_norm_sq(y);
        return nx != ny ? nx < ny : x < y;
      });
      slot = std::make_shared<const std::vector<Lattice>>(std::move(pts));
      return slot;
    }
    R *= 2;
  }
}

} // namespace detail

namespace system {
struct Fourier {
  int dim = 1;
  double length = 1.0;
};
/// Periodised Haar wavelets on [0, L)^d for levels j_min..j_max; 2^j L translates per axis.
struct Haar {
  int dim = 1;
  int level_min = 0;
  int level_max = 0;
  double length = 1.0;
};
/// Sup-norm metadata only: ||f_n||_inf = n^((d-1)/(2d)).
struct SyntheticGrowth {
  int dim = 1;
};
/// Unit-cell bump translates phi(. - k), |k|_inf <= extent, on a box of side `length`.
struct ShiftedBump {
  int dim = 1;
  int extent = 1;
  double bump_width = 0.5;
  double length = 4.0;
};
} // namespace system

class OrthonormalSystem {
public:
  using Kind = std::variant<system::Fourier, system::Haar, system::SyntheticGrowth, system::ShiftedBump>;

  OrthonormalSystem() : OrthonormalSystem(system::Fourier{}) {}
  explicit OrthonormalSystem(Kind kind) : kind_(std::move(kind)) { validate(); }

  static OrthonormalSystem fourier(int dim, double length = 1.0) { return OrthonormalSystem(system::Fourier{dim, length}); }
  static OrthonormalSystem haar(int dim, int jmin, int jmax, double length = 1.0) {
    return OrthonormalSystem(system::Haar{dim, jmin, jmax, length});
  }
  static OrthonormalSystem synthetic_growth(int dim) { return OrthonormalSystem(system::SyntheticGrowth{dim}); }
  static OrthonormalSystem shifted_bump(int dim, int extent, double length, double width = 0.5) {
    return OrthonormalSystem(system::ShiftedBump{dim, extent, width, length});
  }

  const Kind& kind() const { return kind_; }
  int dim() const { return std::visit([](const auto& s) { return s.dim; }, kind_); }
  bool evaluable() const { return !std::holds_alternative<system::SyntheticGrowth>(kind_); }
  bool real_valued() const {
    return std::holds_alternative<system::Haar>(kind_) || std::holds_alternative<system::ShiftedBump>(kind_);
  }
  bool is_fourier() const { return std::holds_alternative<system::Fourier>(kind_); }

  std::string name() const {
    static const char* names[] = {"fourier", "haar", "synthetic_growth", "shifted_bump"};
    return names[kind_.index()];
  }

  /// Number of members, or nullopt for an unbounded family.
  std::optional<std::size_t> size() const {
    if (const auto* h = std::get_if<system::Haar>(&kind_)) {
      std::size_t total = 0;
      for (int j = h->level_min; j <= h->level_max; ++j) total += haar_level_count(*h, j);
      return total;
    }
    if (const auto* b = std::get_if<system::ShiftedBump>(&kind_)) {
      std::size_t side = 2 * static_cast<std::size_t>(b->extent) + 1, total = 1;
      for (int a = 0; a < b->dim; ++a) total *= side;
      return total;
    }
    return std::nullopt;
  }

  SystemIndex index(std::size_t ordinal) const {
    require<RangeError>(ordinal >= 1, "system ordinals start at 1");
    if (auto sz = size()) require<RangeError>(ordinal <= *sz, "system index beyond the family");
    SystemIndex idx;
    idx.ordinal = ordinal;
    idx.dim = dim();
    if (const auto* f = std::get_if<system::Fourier>(&kind_)) {
      const auto ord = detail::fourier_ordering(f->dim, ordinal);
      idx.kind = IndexKind::Lattice;
      idx.k = (*ord)[ordinal - 1];
      idx.wavenumber_sq = static_cast<double>(detail::lattice_norm_sq(idx.k)) / (f->length * f->length);
    } else if (const auto* h = std::get_if<system::Haar>(&kind_)) {
      std::size_t rest = ordinal - 1;
      int j = h->level_min;
      while (rest >= haar_level_count(*h, j)) rest -= haar_level_count(*h, j++);
      idx = haar_index(*h, j, rest);
      idx.ordinal = ordinal;
    } else if (const auto* b = std::get_if<system::ShiftedBump>(&kind_)) {
      idx.kind = IndexKind::Lattice;
      idx.k = bump_translates(*b)[ordinal - 1];
      idx.wavenumber_sq = static_cast<double>(detail::lattice_norm_sq(idx.k));
    }
    return idx;
  }

  double sup_norm(const SystemIndex& idx) const {
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, system::Fourier>) return std::pow(s.length, -0.5 * s.dim);
          else if constexpr (std::is_same_v<T, system::Haar>) return std::exp2(0.5 * idx.level * s.dim);
          else if constexpr (std::is_same_v<T, system::SyntheticGrowth>)
            return std::pow(static_cast<double>(idx.ordinal), (s.dim - 1.0) / (2.0 * s.dim));
          else return 1.0 / bump_lp_norm(s.dim, s.bump_width, 2.0);
        },
        kind_);
  }
  double sup_norm(std::size_t ordinal) const { return sup_norm(index(ordinal)); }

  /// Sample member `ordinal` on the grid.
  SpectralField render(std::size_t ordinal, const Grid& grid) const { return render(index(ordinal), grid); }

  SpectralField render(const SystemIndex& idx, const Grid& grid) const {
    require<NotEvaluableError>(evaluable(), "synthetic growth system has no evaluation data");
    require<DimensionError>(grid.dim() == dim(), "grid dimension does not match the system");
    if (const auto* f = std::get_if<system::Fourier>(&kind_)) {
      require<DimensionError>(grid.length() == f->length, "grid box differs from the system box");
      auto out = SpectralField::mode(grid, idx.k);
      out *= std::pow(f->length, -0.5 * f->dim);
      return out;
    }
    if (const auto* h = std::get_if<system::Haar>(&kind_)) return render_haar(*h, idx, grid);
    return render_bump(std::get<system::ShiftedBump>(kind_), idx, grid);
  }

  /// Nonzero samples of a Haar member along each axis: (grid index, value).
  static std::vector<std::pair<std::size_t, double>> haar_axis_samples(const system::Haar& h, int level, int k, bool oscillating,
                                                                       const Grid& grid) {
    const double M = std::exp2(level) * h.length;
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t p = 0; p < grid.n(); ++p) {
      double t = std::fmod(std::exp2(level) * (static_cast<double>(p) * grid.spacing()) + k, M);
      if (t < 0.0) t += M;
      if (t >= 1.0) continue;
      out.emplace_back(p, oscillating ? (t < 0.5 ? 1.0 : -1.0) : 1.0);
    }
    return out;
  }

  /// Member `rest` (0-based) of Haar level j: orientation-major, then translates lexicographically.
  static SystemIndex haar_index(const system::Haar& h, int j, std::size_t rest) {
    SystemIndex idx;
    idx.kind = IndexKind::Haar;
    idx.dim = h.dim;
    const std::size_t M = haar_translates(h, j);
    std::size_t per_sigma = 1;
    for (int a = 0; a < h.dim; ++a) per_sigma *= M;
    idx.level = j;
    idx.orientation = static_cast<int>(rest / per_sigma) + 1;
    std::size_t t = rest % per_sigma;
    for (int a = h.dim - 1; a >= 0; --a) {
      const std::size_t ta = t % M;
      t /= M;
      idx.k[a] = ta <= M / 2 ? static_cast<int>(ta) : static_cast<int>(ta) - static_cast<int>(M);
    }
    return idx;
  }

  static std::size_t haar_translates(const system::Haar& h, int j) {
    return static_cast<std::size_t>(std::llround(std::exp2(j) * h.length));
  }
  static std::size_t haar_level_count(const system::Haar& h, int j) {
    std::size_t per = 1;
    for (int a = 0; a < h.dim; ++a) per *= haar_translates(h, j);
    return ((std::size_t{1} << h.dim) - 1) * per;
  }

  /// Grid samples of a Haar member.
  static std::vector<double> haar_values(const system::Haar& h, const SystemIndex& idx, const Grid& grid) {
    require<DimensionError>(grid.length() == h.length, "grid box differs from the system box");
    std::array<std::vector<std::pair<std::size_t, double>>, 3> axes;
    for (int a = 0; a < h.dim; ++a) axes[a] = haar_axis_samples(h, idx.level, idx.k[a], (idx.orientation >> a) & 1, grid);
    std::vector<double> v(grid.size());
    const double amp = std::exp2(0.5 * idx.level * h.dim);
    const std::size_t n = grid.n();
    if (h.dim == 1) {
      for (auto [p, x] : axes[0]) v[p] = amp * x;
    } else if (h.dim == 2) {
      for (auto [p, x] : axes[0])
        for (auto [q, y] : axes[1]) v[p * n + q] = amp * x * y;
    } else {
      for (auto [p, x] : axes[0])
        for (auto [q, y] : axes[1])
          for (auto [r, z] : axes[2]) v[(p * n + q) * n + r] = amp * x * y * z;
    }
    return v;
  }

private:
  static const std::vector<Lattice>& bump_translates(const system::ShiftedBump& b) {
    static std::mutex m;
    static std::map<std::pair<int, int>, std::vector<Lattice>> cache;
    std::lock_guard lock(m);
    auto& v = cache[{b.dim, b.extent}];
    if (v.empty()) {
      const int N = b.extent;
      const int r1 = b.dim > 1 ? N : 0, r2 = b.dim > 2 ? N : 0;
      for (int x = -N; x <= N; ++x)
        for (int y = -r1; y <= r1; ++y)
          for (int z = -r2; z <= r2; ++z) v.push_back({x, y, z});
      std::stable_sort(v.begin(), v.end(), [&](const Lattice& p, const Lattice& q) {
        const int np = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])});
        const int nq = std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])});
        return np != nq ? np < nq : p < q;
      });
    }
    return v;
  }

  void validate() const {
    std::visit(
        [](const auto& s) {
          require<DimensionError>(s.dim >= 1 && s.dim <= 3, "system dimension must be 1, 2 or 3");
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, system::Fourier>) {
            require(s.length > 0.0, "box length must be positive");
          } else if constexpr (std::is_same_v<T, system::Haar>) {
            require(s.level_min <= s.level_max, "Haar level range is empty");
            const double M = std::exp2(s.level_min) * s.length;
            require(M >= 1.0 && M == std::floor(M), "2^j_min * L must be a positive integer");
          } else if constexpr (std::is_same_v<T, system::ShiftedBump>) {
            require(s.extent >= 0, "lattice extent must be non-negative");
            require(s.bump_width > 0.0 && s.bump_width <= 1.0, "bump width must lie in (0, 1]");
            require(s.length >= 2.0 * s.extent + 1.0, "box too small for the translates");
          }
        },
        kind_);
  }

  static SpectralField render_haar(const system::Haar& h, const SystemIndex& idx, const Grid& grid) {
    const auto v = haar_values(h, idx, grid);
    return SpectralField::from_real_values(grid, v);
  }

  static SpectralField render_bump(const system::ShiftedBump& b, const SystemIndex& idx, const Grid& grid) {
    require<DimensionError>(grid.length() == b.length, "grid box differs from the system box");
    const double norm = 1.0 / bump_lp_norm(b.dim, b.bump_width, 2.0);
    return SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int a = 0; a < b.dim; ++a) {
        double y = x[a] - (idx.k[a] + 0.5);
        y -= b.length * std::round(y / b.length);
        r2 += y * y;
      }
      return norm * bump_profile(std::sqrt(r2), b.bump_width);
    });
  }

  Kind kind_;
};

/// (sum_{n <= N} |mu_n|^zeta ||f_n||_inf^2)^(1/zeta), or max |mu_n| for zeta = infinity.
inline double ell_zeta_weighted_norm(const Coloring& mu, const OrthonormalSystem& sys, double zeta, std::size_t N) {
  require(zeta >= 2.0, "weighted sequence norm needs zeta >= 2");
  require(N >= 1, "truncation must be at least 1");
  if (is_infinite_exponent(zeta)) {
    double m = 0.0;
    for (std::size_t n = 1; n <= N; ++n) m = std::max(m, std::abs(mu(sys.index(n))));
    return m;
  }
  NeumaierSum acc;
  for (std::size_t n = 1; n <= N; ++n) {
    const SystemIndex idx = sys.index(n);
    const double v = std::abs(mu(idx));
    if (v == 0.0) continue;
    const double sup = sys.sup_norm(idx);
    acc.add(std::pow(v, zeta) * sup * sup);
  }
  return std::pow(acc.value(), 1.0 / zeta);
}

/// Inner sum sum_{n <= N} |mu_n|^zeta ||f_n||_inf^2 for any finite zeta > 0.
inline double weighted_power_sum(const Coloring& mu, const OrthonormalSystem& sys, double zeta, std::size_t N) {
  require(std::isfinite(zeta) && zeta > 0.0, "power sum needs finite zeta > 0");
  NeumaierSum acc;
  for (std::size_t n = 1; n <= N; ++n) {
    const SystemIndex idx = sys.index(n);
    const double v = std::abs(mu(idx));
    if (v == 0.0) continue;
    const double sup = sys.sup_norm(idx);
    acc.add(std::pow(v, zeta) * sup * sup);
  }
  return acc.value();
}

/// Plain ell^zeta norm of a finite sequence.
inline double ell_zeta_norm(std::span<const double> values, double zeta) {
  require(zeta >= 1.0, "sequence norm needs zeta >= 1");
  if (is_infinite_exponent(zeta)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  NeumaierSum acc;
  for (double v : values) acc.add(std::pow(std::abs(v), zeta));
  return std::pow(acc.value(), 1.0 / zeta);
}

/// Per-level contributions sum_{sigma,k} |mu_{j,k}|^zeta 2^{jd} of a Haar system.
inline std::vector<std::pair<int, double>> haar_level_power_sums(const Coloring& mu, const OrthonormalSystem& sys, double zeta) {
  const auto* h = std::get_if<system::Haar>(&sys.kind());
  require<ContractError>(h != nullptr, "level sums need the Haar system");
  require(std::isfinite(zeta) && zeta > 0.0, "power sum needs finite zeta > 0");
  std::vector<std::pair<int, double>> out;
  for (int j = h->level_min; j <= h->level_max; ++j) {
    const std::size_t count = OrthonormalSystem::haar_level_count(*h, j);
    NeumaierSum acc;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = std::abs(mu(OrthonormalSystem::haar_index(*h, j, i)));
      if (v != 0.0) acc.add(std::pow(v, zeta));
    }
    out.emplace_back(j, acc.value() * std::exp2(j * h->dim));
  }
  return out;
}

} // namespace gammanoise
