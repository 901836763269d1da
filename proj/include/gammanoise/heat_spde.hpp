#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "gaussian_series.hpp"
#include "params.hpp"

namespace gammanoise {

namespace noise {
/// mu_k on every grid frequency.
struct Diagonal {
  Coloring coloring;
};
/// sum_{n <= N} mu_n f_n dbeta_n for a rendered orthonormal system.
struct System {
  OrthonormalSystem system;
  Coloring coloring;
  std::size_t truncation = 1;
};
/// mu_k = (1 + 4 pi^2 |k|^2)^(-alpha/2).
struct Matern {
  double alpha = 0.5;
};
} // namespace noise

using Noise = std::variant<noise::Diagonal, noise::System, noise::Matern>;

enum class Integrator { ExactOu, ExpEuler };

inline const char* to_string(Integrator i) { return i == Integrator::ExactOu ? "exact_ou" : "exp_euler"; }

/// du = Delta u dt + g R dW on the periodic box, u(0) = 0.
struct SpdeConfig {
  Grid grid;
  Noise noise = noise::Matern{};
  std::vector<SpectralField> g; // empty: g = 1; several: piecewise constant on equal subintervals
  double horizon = 1.0;
  double dt = 0.1;
  Integrator integrator = Integrator::ExactOu;
  std::size_t oversample = 2;
  std::optional<double> noise_off_after; // exp_euler only
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

inline bool is_diagonal(const Noise& n) { return !std::holds_alternative<noise::System>(n); }

inline void validate(const SpdeConfig& c) {
  require<ConfigError>(std::isfinite(c.horizon) && c.horizon > 0.0, "horizon must be positive");
  require<ConfigError>(std::isfinite(c.dt) && c.dt > 0.0 && c.dt <= c.horizon, "dt must lie in (0, T]");
  require<ConfigError>(c.oversample >= 1 && std::has_single_bit(c.oversample), "oversample must be a power of two");
  for (const auto& f : c.g) require<ConfigError>(f.grid() == c.grid, "multiplier field lives on a different grid");
  if (c.integrator == Integrator::ExactOu) {
    require<ConfigError>(c.g.empty(), "exact_ou needs g = 1");
    require<ConfigError>(is_diagonal(c.noise), "exact_ou needs diagonal or Matern noise");
    require<ConfigError>(!c.noise_off_after, "noise switch-off is an exp_euler option");
  }
  if (const auto* s = std::get_if<noise::System>(&c.noise)) {
    require<ConfigError>(s->system.evaluable(), "noise system must be evaluable");
    require<ConfigError>(s->system.dim() == c.grid.dim(), "noise system dimension differs from the grid");
    require<ConfigError>(s->truncation >= 1, "noise truncation must be at least 1");
  }
  if (const auto* m = std::get_if<noise::Matern>(&c.noise))
    require<ConfigError>(std::isfinite(m->alpha) && m->alpha > 0.0, "Matern order must be positive");
}

inline double laplace_eigenvalue(double wavenumber_sq) { return 4.0 * std::numbers::pi * std::numbers::pi * wavenumber_sq; }

/// mu_k per grid frequency (flat DFT order) for diagonal noise. Ordinals follow
/// the shell enumeration of the Fourier system restricted to the grid band.
inline std::vector<double> diagonal_coloring(const SpdeConfig& c) {
  const Grid& grid = c.grid;
  std::vector<double> mu(grid.size());
  if (const auto* m = std::get_if<noise::Matern>(&c.noise)) {
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = bessel_symbol(grid.wavenumber_sq(i), -m->alpha);
    return mu;
  }
  const auto& col = std::get<noise::Diagonal>(c.noise).coloring;
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Lattice ka = grid.frequency(a), kb = grid.frequency(b);
    const long na = detail::lattice_norm_sq(ka), nb = detail::lattice_norm_sq(kb);
    return na != nb ? na < nb : ka < kb;
  });
  for (std::size_t r = 0; r < order.size(); ++r) {
    SystemIndex idx;
    idx.kind = IndexKind::Lattice;
    idx.ordinal = r + 1;
    idx.dim = grid.dim();
    idx.k = grid.frequency(order[r]);
    idx.wavenumber_sq = grid.wavenumber_sq(order[r]);
    mu[order[r]] = col(idx);
  }
  return mu;
}

/// Step sizes covering [0, T]; the last step is shortened if dt does not divide T.
inline std::vector<double> time_steps(const SpdeConfig& c) {
  const auto count = static_cast<std::size_t>(std::ceil(c.horizon / c.dt - 1e-9));
  std::vector<double> steps;
  double t = 0.0;
  for (std::size_t m = 0; m < count; ++m) {
    const double next = m + 1 == count ? c.horizon : std::min(c.horizon, (m + 1) * c.dt);
    steps.push_back(next - t);
    t = next;
  }
  return steps;
}

/// Stepper shared by simulate and the Monte Carlo drivers.
class SpdeStepper {
public:
  explicit SpdeStepper(const SpdeConfig& c) : c_(c), steps_(time_steps(c)) {
    validate(c_);
    lambda_.resize(c_.grid.size());
    for (std::size_t i = 0; i < lambda_.size(); ++i) lambda_[i] = laplace_eigenvalue(c_.grid.wavenumber_sq(i));
    if (is_diagonal(c_.noise)) {
      mu_ = diagonal_coloring(c_);
    } else {
      const auto& s = std::get<noise::System>(c_.noise);
      for (std::size_t n = 1; n <= s.truncation; ++n) {
        const SystemIndex idx = s.system.index(n);
        const double m = s.coloring(idx);
        if (m == 0.0) continue;
        auto f = s.system.render(idx, c_.grid);
        f *= m;
        terms_.emplace_back(n - 1, std::move(f));
      }
    }
  }

  const std::vector<double>& steps() const { return steps_; }

  /// Visit (time, state) for t_0 = 0 and every step.
  template <class Visitor>
  void run(std::uint64_t seed, std::uint64_t trajectory, Visitor&& visit) const {
    const Grid& grid = c_.grid;
    SpectralField u = SpectralField::zero(grid, false);
    double t = 0.0;
    visit(t, u);
    const std::uint64_t traj_key = rng::derive_stream(seed, trajectory);
    for (std::size_t m = 0; m < steps_.size(); ++m) {
      const double dt = steps_[m];
      rng::Stream stream(rng::derive_stream(traj_key, m));
      auto c = u.coeffs();
      if (c_.integrator == Integrator::ExactOu) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double lam = lambda_[i];
          const double var = lam == 0.0 ? mu_[i] * mu_[i] * dt : mu_[i] * mu_[i] * (-std::expm1(-2.0 * lam * dt)) / (2.0 * lam);
          c[i] = std::exp(-lam * dt) * c[i] + std::sqrt(var / grid.volume()) * stream.complex_gaussian();
        }
      } else {
        const bool noise_on = !c_.noise_off_after || t < *c_.noise_off_after;
        if (noise_on) {
          SpectralField dw = increment(stream, dt);
          if (!c_.g.empty()) dw = resample(multiply(multiplier_at(t), dw, c_.oversample), grid.n());
          u += dw;
          c = u.coeffs();
        }
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-lambda_[i] * dt);
      }
      t += dt;
      visit(t, u);
    }
  }

private:
  SpectralField increment(rng::Stream& stream, double dt) const {
    const Grid& grid = c_.grid;
    const double sq = std::sqrt(dt);
    if (is_diagonal(c_.noise)) {
      auto dw = SpectralField::zero(grid, false);
      auto c = dw.coeffs();
      const double amp = sq / std::sqrt(grid.volume());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = amp * mu_[i] * stream.complex_gaussian();
      return dw;
    }
    const auto& s = std::get<noise::System>(c_.noise);
    const bool real = s.system.real_valued();
    std::vector<Complex> gam(s.truncation);
    for (auto& z : gam) z = real ? Complex(stream.gaussian(), 0.0) : stream.complex_gaussian();
    auto dw = SpectralField::zero(grid, real);
    for (const auto& [pos, f] : terms_) dw.axpy(sq * gam[pos], f);
    return dw;
  }

  const SpectralField& multiplier_at(double t) const {
    const std::size_t K = c_.g.size();
    const auto i = static_cast<std::size_t>(std::floor(t / c_.horizon * static_cast<double>(K) + 1e-12));
    return c_.g[std::min(i, K - 1)];
  }

  SpdeConfig c_;
  std::vector<double> steps_;
  std::vector<double> lambda_;
  std::vector<double> mu_;
  std::vector<std::pair<std::size_t, SpectralField>> terms_;
};

/// Full trajectory; stream of step m is H(H(seed, trajectory), m).
inline Trajectory simulate(const SpdeConfig& config, std::uint64_t seed, std::uint64_t trajectory = 0) {
  Trajectory tr;
  tr.seed = seed;
  tr.index = trajectory;
  SpdeStepper(config).run(seed, trajectory, [&](double t, const SpectralField& u) {
    tr.times.push_back(t);
    tr.states.push_back(u);
  });
  return tr;
}

/// Closed-form E||u(t)||^2_{H^{1-s,2}} of each requested time for g = 1 and diagonal noise.
inline std::vector<double> second_moment_closed_form(const SpdeConfig& config, std::span<const double> times, double s) {
  require<ContractError>(is_diagonal(config.noise) && config.g.empty(), "closed form needs g = 1 and diagonal noise");
  const auto mu = diagonal_coloring(config);
  const Grid& grid = config.grid;
  std::vector<double> out;
  for (double T : times) {
    require(T >= 0.0, "time must be non-negative");
    NeumaierSum acc;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double lam = laplace_eigenvalue(grid.wavenumber_sq(i));
      const double v = lam == 0.0 ? T : -std::expm1(-2.0 * lam * T) / (2.0 * lam);
      acc.add(bessel_symbol(grid.wavenumber_sq(i), 2.0 * (1.0 - s)) * mu[i] * mu[i] * v);
    }
    out.push_back(acc.value());
  }
  return out;
}

inline double second_moment_closed_form(const SpdeConfig& config, double T, double s) {
  const double t[] = {T};
  return second_moment_closed_form(config, t, s)[0];
}

/// Left-endpoint time quadrature of the closed form, matching spacetime_norm with p = 2.
inline double time_integrated_second_moment(const SpdeConfig& config, double s) {
  const auto steps = time_steps(config);
  std::vector<double> t{0.0};
  for (std::size_t m = 0; m + 1 < steps.size(); ++m) t.push_back(t.back() + steps[m]);
  const auto v = second_moment_closed_form(config, t, s);
  NeumaierSum acc;
  for (std::size_t m = 0; m < steps.size(); ++m) acc.add(v[m] * steps[m]);
  return acc.value();
}

/// Exact second moment of the exp_euler scheme at T (g = 1, diagonal noise) by
/// propagating v <- exp(-2 lambda dt)(v + mu^2 dt) mode by mode.
inline double exp_euler_second_moment(const SpdeConfig& config, double s) {
  require<ContractError>(is_diagonal(config.noise) && config.g.empty(), "scheme moment needs g = 1 and diagonal noise");
  const auto mu = diagonal_coloring(config);
  const auto steps = time_steps(config);
  const Grid& grid = config.grid;
  NeumaierSum acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double lam = laplace_eigenvalue(grid.wavenumber_sq(i));
    double v = 0.0;
    for (double dt : steps) v = std::exp(-2.0 * lam * dt) * (v + mu[i] * mu[i] * dt);
    acc.add(bessel_symbol(grid.wavenumber_sq(i), 2.0 * (1.0 - s)) * v);
  }
  return acc.value();
}

struct SpacetimeNorm {
  double lp = 0.0;          // (sum_m ||u_m||^p dt_m)^(1/p)
  double max_in_time = 0.0; // max_m ||u_m||, not a Besov norm
};

inline SpacetimeNorm spacetime_norm(const Trajectory& tr, double p, double s, double q) {
  require(std::isfinite(p) && p >= 1.0, "time exponent p must lie in [1, inf)");
  require(tr.times.size() == tr.states.size() && !tr.times.empty(), "malformed trajectory");
  SpacetimeNorm out;
  NeumaierSum acc;
  for (std::size_t m = 0; m < tr.states.size(); ++m) {
    const double v = q == 2.0 ? std::sqrt(bessel_apply(tr.states[m], 1.0 - s).squared_l2_norm()) : hsq_norm(tr.states[m], 1.0 - s, q);
    out.max_in_time = std::max(out.max_in_time, v);
    if (m + 1 < tr.states.size()) acc.add(std::pow(v, p) * (tr.times[m + 1] - tr.times[m]));
  }
  out.lp = std::pow(acc.value(), 1.0 / p);
  return out;
}

struct SpdeMoments {
  MCEstimate final_moment;     // E||u(T)||^2_{H^{1-s,2}}
  MCEstimate spacetime_moment; // E||u||^2_{L^2(0,T;H^{1-s,2})}
  std::vector<double> mean_path; // E||u(t_m)||^2 per time
  std::vector<double> times;
};

/// Monte Carlo over M trajectories; trajectory i uses index i.
inline SpdeMoments mc_moments(const SpdeConfig& config, double s, std::size_t M, std::uint64_t seed, unsigned workers = 1) {
  require(M >= 2, "Monte Carlo needs at least two trajectories");
  const SpdeStepper stepper(config);
  const std::size_t T = stepper.steps().size() + 1;
  std::vector<double> fin(M), st(M), fin_norm(M), st_norm(M);
  std::vector<std::vector<double>> path(M, std::vector<double>(T));
  std::vector<double> times;
  {
    double t = 0.0;
    times.push_back(t);
    for (double dt : stepper.steps()) times.push_back(t += dt);
  }
  parallel_for(M, workers, [&](std::size_t i) {
    std::size_t m = 0;
    NeumaierSum acc;
    stepper.run(seed, i, [&](double, const SpectralField& u) {
      const double v = bessel_apply(u, 1.0 - s).squared_l2_norm();
      path[i][m] = v;
      if (m + 1 < T) acc.add(v * stepper.steps()[m]);
      ++m;
    });
    fin[i] = path[i][T - 1];
    st[i] = acc.value();
    fin_norm[i] = std::sqrt(fin[i]);
    st_norm[i] = std::sqrt(st[i]);
  });
  SpdeMoments out;
  const auto a = mean_and_stderr(fin);
  const auto b = mean_and_stderr(st);
  out.final_moment = {a.mean, a.stderr_of_mean, M, seed, compensated_sum(fin_norm) / static_cast<double>(M)};
  out.spacetime_moment = {b.mean, b.stderr_of_mean, M, seed, compensated_sum(st_norm) / static_cast<double>(M)};
  out.times = times;
  for (std::size_t m = 0; m < T; ++m) {
    NeumaierSum acc;
    for (std::size_t i = 0; i < M; ++i) acc.add(path[i][m]);
    out.mean_path.push_back(acc.value() / static_cast<double>(M));
  }
  return out;
}

namespace detail {

template <class T>
void write_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw IoError("truncated trajectory file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

} // namespace detail

/// Little-endian dump: u32 dims, u32 n, u64 count, then count states of n^d
/// coefficients in DFT order as interleaved (re, im) float64.
inline void write_trajectory(const std::string& path, const Trajectory& tr) {
  require(!tr.states.empty(), "empty trajectory");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  const Grid& g = tr.states.front().grid();
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  detail::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  detail::write_le<std::uint64_t>(os, tr.states.size());
  for (const auto& s : tr.states)
    for (const auto& c : s.coeffs()) {
      detail::write_le(os, c.real());
      detail::write_le(os, c.imag());
    }
  if (!os) throw IoError("write failed for " + path);
}

/// Read a dump back; the box length is not stored and is supplied by the caller.
inline std::vector<SpectralField> read_trajectory(const std::string& path, double length = 1.0) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  const auto dims = detail::read_le<std::uint32_t>(is);
  const auto n = detail::read_le<std::uint32_t>(is);
  const auto count = detail::read_le<std::uint64_t>(is);
  const Grid grid(static_cast<int>(dims), n, length);
  std::vector<SpectralField> out;
  for (std::uint64_t k = 0; k < count; ++k) {
    std::vector<Complex> c(grid.size());
    for (auto& z : c) {
      const double re = detail::read_le<double>(is);
      const double im = detail::read_le<double>(is);
      z = {re, im};
    }
    out.emplace_back(grid, std::move(c), false);
  }
  return out;
}

} // namespace gammanoise
