#pragma once

#include <cstdint>
#include <optional>

#include "growth.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "systems.hpp"

namespace gammanoise {

/// g * sum_{n <= N} gamma_n mu_n f_n measured in H^{-s,q}.
struct SeriesSpec {
  Grid grid;
  OrthonormalSystem system;
  Coloring coloring;
  std::optional<SpectralField> g; // empty means g = 1
  std::size_t truncation = 1;
  double s = 0.0;
  double q = 2.0;
  std::size_t oversample = 2;
};

struct MCEstimate {
  double mean = 0.0;           // of the squared norm
  double stderr_of_mean = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double mean_norm = 0.0;      // of the norm itself
};

inline void validate(const SeriesSpec& spec) {
  require(spec.truncation >= 1, "truncation must be at least 1");
  require(std::isfinite(spec.q) && spec.q >= 1.0, "target exponent q must be >= 1");
  require(std::isfinite(spec.s), "target smoothness must be finite");
  require(spec.oversample >= 1 && std::has_single_bit(spec.oversample), "oversample must be a power of two");
  require<DimensionError>(spec.system.dim() == spec.grid.dim(), "system and grid dimensions differ");
  if (spec.g) require<DimensionError>(spec.g->grid() == spec.grid, "multiplier g lives on a different grid");
}

namespace detail {

struct ActiveTerm {
  std::size_t position = 0; // 0-based draw position
  SystemIndex index;
  double mu = 0.0;
};

inline std::vector<ActiveTerm> active_terms(const SeriesSpec& spec) {
  std::vector<ActiveTerm> out;
  for (std::size_t n = 1; n <= spec.truncation; ++n) {
    const SystemIndex idx = spec.system.index(n);
    const double mu = spec.coloring(idx);
    if (mu != 0.0) out.push_back({n - 1, idx, mu});
  }
  return out;
}

inline std::size_t fourier_slot(const Grid& grid, const Lattice& k) {
  if (!grid.contains(k)) throw ResourceError("series truncation exceeds the grid band; refine the grid");
  return grid.flat_index(k);
}

} // namespace detail

/// Precomputed series terms; draws one sample per call.
class SeriesSampler {
public:
  explicit SeriesSampler(const SeriesSpec& spec) : spec_(spec) {
    validate(spec_);
    require<NotEvaluableError>(spec_.system.evaluable(), "series needs an evaluable system");
    terms_ = detail::active_terms(spec_);
    if (spec_.system.is_fourier()) {
      const double amp = std::pow(spec_.grid.length(), -0.5 * spec_.grid.dim());
      for (const auto& t : terms_) slots_.emplace_back(detail::fourier_slot(spec_.grid, t.index.k), amp * t.mu);
    } else {
      for (const auto& t : terms_) {
        auto f = spec_.system.render(t.index, spec_.grid);
        f *= t.mu;
        rendered_.push_back(std::move(f));
      }
    }
  }

  const SeriesSpec& spec() const { return spec_; }

  SpectralField sample(rng::Stream& stream) const {
    const bool real = spec_.system.real_valued();
    std::vector<Complex> gammas(spec_.truncation);
    for (auto& z : gammas) z = real ? Complex(stream.gaussian(), 0.0) : stream.complex_gaussian();
    auto sum = SpectralField::zero(spec_.grid, real);
    if (spec_.system.is_fourier()) {
      auto c = sum.coeffs();
      for (std::size_t i = 0; i < terms_.size(); ++i) c[slots_[i].first] += slots_[i].second * gammas[terms_[i].position];
      sum.set_real(false);
    } else {
      for (std::size_t i = 0; i < terms_.size(); ++i) sum.axpy(gammas[terms_[i].position], rendered_[i]);
    }
    if (spec_.g) return multiply(*spec_.g, sum, spec_.oversample);
    return sum;
  }

  /// ||sample||_{H^{-s,q}}; q = 2 through Plancherel.
  double norm(const SpectralField& sample) const {
    if (spec_.q == 2.0) return std::sqrt(bessel_apply(sample, -spec_.s).squared_l2_norm());
    return hsq_norm(sample, -spec_.s, spec_.q);
  }

private:
  SeriesSpec spec_;
  std::vector<detail::ActiveTerm> terms_;
  std::vector<std::pair<std::size_t, double>> slots_;
  std::vector<SpectralField> rendered_;
};

inline SpectralField sample_series(const SeriesSpec& spec, rng::Stream& stream) { return SeriesSampler(spec).sample(stream); }

/// Monte Carlo estimate of E||g sum gamma_n mu_n f_n||^2_{H^{-s,q}}.
/// Sample i draws from stream derive_stream(seed, i).
inline MCEstimate mc_gamma_norm(const SeriesSpec& spec, std::size_t M, std::uint64_t seed, unsigned workers = 1) {
  require(M >= 2, "Monte Carlo needs at least two samples");
  const SeriesSampler sampler(spec);
  std::vector<double> sq(M), nm(M);
  parallel_for(M, workers, [&](std::size_t i) {
    rng::Stream stream(rng::derive_stream(seed, i));
    const double v = sampler.norm(sampler.sample(stream));
    nm[i] = v;
    sq[i] = v * v;
  });
  const auto ms = mean_and_stderr(sq);
  return {ms.mean, ms.stderr_of_mean, M, seed, compensated_sum(nm) / static_cast<double>(M)};
}

/// || (sum_n |(1 - Delta)^{-s/2}(g mu_n f_n)|^2)^{1/2} ||_{L^q}.
inline double sq_function_gamma_norm(const SeriesSpec& spec) {
  validate(spec);
  require<NotEvaluableError>(spec.system.evaluable(), "series needs an evaluable system");
  const auto terms = detail::active_terms(spec);
  const Grid& grid = spec.grid;
  if (spec.system.is_fourier() && !spec.g) {
    NeumaierSum acc;
    for (const auto& t : terms) acc.add(t.mu * t.mu * bessel_symbol(t.index.wavenumber_sq, -2.0 * spec.s));
    return std::sqrt(acc.value() / grid.volume()) * std::pow(grid.volume(), 1.0 / spec.q);
  }
  const Grid fine = spec.g ? grid.refined(spec.oversample) : grid;
  std::vector<double> S(fine.size(), 0.0);
  for (const auto& t : terms) {
    auto f = spec.system.render(t.index, grid);
    f *= t.mu;
    if (spec.g) f = multiply(*spec.g, f, spec.oversample);
    const auto v = bessel_apply(f, -spec.s).values();
    for (std::size_t i = 0; i < S.size(); ++i) S[i] += std::norm(v[i]);
  }
  NeumaierSum acc;
  for (double x : S) acc.add(std::pow(x, 0.5 * spec.q));
  return std::pow(acc.value() * fine.cell_measure(), 1.0 / spec.q);
}

/// Hilbert-Schmidt value (sum_n mu_n^2 ||(1 - Delta)^{-s/2}(g f_n)||_2^2)^{1/2}.
inline double hs_gamma_norm_exact(const SeriesSpec& spec) {
  validate(spec);
  require<ContractError>(spec.q == 2.0, "exact Hilbert-Schmidt value needs q = 2");
  const auto terms = detail::active_terms(spec);
  const Grid& grid = spec.grid;
  NeumaierSum acc;
  if (spec.system.is_fourier()) {
    const double inv_l2 = 1.0 / (grid.length() * grid.length());
    for (const auto& t : terms) {
      if (!spec.g) {
        acc.add(t.mu * t.mu * bessel_symbol(t.index.wavenumber_sq, -2.0 * spec.s));
        continue;
      }
      NeumaierSum inner;
      const auto c = spec.g->coeffs();
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double a = std::norm(c[i]);
        if (a == 0.0) continue;
        const Lattice m = grid.frequency(i);
        double k2 = 0.0;
        for (int ax = 0; ax < grid.dim(); ++ax) k2 += static_cast<double>(m[ax] + t.index.k[ax]) * (m[ax] + t.index.k[ax]);
        inner.add(a * bessel_symbol(k2 * inv_l2, -2.0 * spec.s));
      }
      acc.add(t.mu * t.mu * inner.value());
    }
    return std::sqrt(acc.value());
  }
  require<NotEvaluableError>(spec.system.evaluable(), "series needs an evaluable system");
  for (const auto& t : terms) {
    auto f = spec.system.render(t.index, grid);
    if (spec.g) f = multiply(*spec.g, f, spec.oversample);
    acc.add(t.mu * t.mu * bessel_apply(f, -spec.s).squared_l2_norm());
  }
  return std::sqrt(acc.value());
}

} // namespace gammanoise
