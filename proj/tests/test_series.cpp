#include <gtest/gtest.h>

#include "gammanoise/bumps.hpp"
#include "gammanoise/gaussian_series.hpp"
#include "support.hpp"

using namespace gammanoise;

namespace {

SeriesSpec fourier_spec(std::size_t truncation, double alpha, double s = 0.5) {
  SeriesSpec spec;
  spec.grid = Grid(1, 64, 2.0);
  spec.system = OrthonormalSystem::fourier(1, 2.0);
  spec.coloring = Coloring::power_law(alpha);
  spec.truncation = truncation;
  spec.s = s;
  return spec;
}

SpectralField bump_multiplier(const Grid& g) {
  return SpectralField::from_function(g, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - 0.5 * g.length()) * (x[a] - 0.5 * g.length());
    return bump_profile(std::sqrt(r2), 0.4 * g.length());
  });
}

} // namespace

TEST(Series, FourierSampleCoefficientsFollowTheDraws) {
  const auto spec = fourier_spec(21, 0.6);
  rng::Stream a(17), b(17);
  const auto f = sample_series(spec, a);
  const auto sys = OrthonormalSystem::fourier(1, 2.0);
  std::vector<Complex> gammas(21);
  for (auto& z : gammas) z = b.complex_gaussian();
  for (std::size_t n = 1; n <= 21; ++n) {
    const auto k = sys.index(n).k;
    const Complex expect = gammas[n - 1] * std::pow(static_cast<double>(n), -0.6) / std::sqrt(2.0);
    EXPECT_LT(std::abs(f.coeff(k) - expect), 1e-15);
  }
}

TEST(Series, LinearInTheColoring) {
  auto spec = fourier_spec(31, 0.8);
  rng::Stream a(3), b(3);
  const auto f1 = sample_series(spec, a);
  spec.coloring = spec.coloring.scaled(-2.5);
  const auto f2 = sample_series(spec, b);
  for (std::size_t i = 0; i < f1.coeffs().size(); ++i) EXPECT_LT(std::abs(f2.coeffs()[i] + 2.5 * f1.coeffs()[i]), 1e-14);
}

TEST(Series, MonteCarloAgreesWithExactValue) {
  auto spec = fourier_spec(31, 0.4);
  spec.g = bump_multiplier(spec.grid);
  const double exact = std::pow(hs_gamma_norm_exact(spec), 2);
  const auto mc = mc_gamma_norm(spec, 2000, 99);
  EXPECT_LE(std::abs(mc.mean - exact), 4.0 * mc.stderr_of_mean);
  EXPECT_LE(mc.mean_norm * mc.mean_norm, mc.mean * (1 + 1e-12));
}

TEST(Series, MonteCarloAgreesOnHaarSystem) {
  SeriesSpec spec;
  spec.grid = Grid(1, 128, 1.0);
  spec.system = OrthonormalSystem::haar(1, 0, 4);
  spec.coloring = Coloring::haar(0.3, 1.0);
  spec.truncation = *spec.system.size();
  spec.s = 0.4;
  const double exact = std::pow(hs_gamma_norm_exact(spec), 2);
  const auto mc = mc_gamma_norm(spec, 2000, 5);
  EXPECT_LE(std::abs(mc.mean - exact), 4.0 * mc.stderr_of_mean);
}

TEST(Series, SquareFunctionMatchesHilbertSchmidtAtQTwo) {
  auto spec = fourier_spec(25, 0.5, 0.3);
  EXPECT_NEAR(sq_function_gamma_norm(spec), hs_gamma_norm_exact(spec), 1e-12);
  spec.g = bump_multiplier(spec.grid);
  const double hs = hs_gamma_norm_exact(spec);
  EXPECT_NEAR(sq_function_gamma_norm(spec), hs, 1e-8 * hs); // Nyquist split of g on the fine grid
}

TEST(Series, UnimodularMultiplierLeavesSquareFunction) {
  auto spec = fourier_spec(9, 0.5, 0.0);
  spec.q = 3.0;
  const double plain = sq_function_gamma_norm(spec);
  spec.g = SpectralField::mode(spec.grid, {3, 0, 0});
  EXPECT_NEAR(sq_function_gamma_norm(spec), plain, 1e-10 * plain);
}

TEST(Series, NormsIncreaseWithTruncation) {
  double prev_hs = 0.0, prev_sq = 0.0;
  for (std::size_t N = 1; N <= 41; N += 4) {
    auto spec = fourier_spec(N, 0.3);
    spec.g = bump_multiplier(spec.grid);
    const double hs = hs_gamma_norm_exact(spec);
    spec.q = 4.0;
    const double sq = sq_function_gamma_norm(spec);
    EXPECT_GE(hs, prev_hs);
    EXPECT_GE(sq, prev_sq);
    prev_hs = hs;
    prev_sq = sq;
  }
}

TEST(Series, ErrorsOnBadSpecs) {
  auto spec = fourier_spec(200, 0.5);
  EXPECT_THROW(SeriesSampler{spec}, ResourceError);
  spec.truncation = 4;
  spec.system = OrthonormalSystem::fourier(2);
  EXPECT_THROW(SeriesSampler{spec}, DimensionError);
  spec = fourier_spec(4, 0.5);
  spec.oversample = 3;
  EXPECT_THROW(SeriesSampler{spec}, ParameterError);
  spec = fourier_spec(4, 0.5);
  spec.q = 3.0;
  EXPECT_THROW(hs_gamma_norm_exact(spec), ContractError);
  spec.system = OrthonormalSystem::synthetic_growth(1);
  EXPECT_THROW(SeriesSampler{spec}, NotEvaluableError);
}

TEST(Series, WorkerCountDoesNotChangeResult) {
  auto spec = fourier_spec(17, 0.5);
  spec.q = 3.0;
  const auto a = mc_gamma_norm(spec, 40, 11, 1);
  const auto b = mc_gamma_norm(spec, 40, 11, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_of_mean, b.stderr_of_mean);
  EXPECT_EQ(a.mean_norm, b.mean_norm);
}
