#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace gammanoise::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream key H(seed, task) = mix64(seed ^ mix64(task + golden_gamma)).
///
/// Every Monte Carlo sample, trajectory and time step draws from its own key,
/// so results never depend on scheduling.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t task) {
  return mix64(seed ^ mix64(task + golden_gamma));
}

/// Counter-based splitmix64 generator.
class Stream {
public:
  explicit constexpr Stream(std::uint64_t key) : state_(key) {}

  constexpr std::uint64_t next() {
    state_ += golden_gamma;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the second variate is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  /// Circular complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double a = gaussian();
    const double b = gaussian();
    return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace gammanoise::rng
