#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>

#include "gammanoise/heat_spde.hpp"

using namespace gammanoise;

namespace {

SpdeConfig matern_config(std::size_t n, double alpha, double T, double dt, Integrator integ) {
  SpdeConfig c;
  c.grid = Grid(1, n, 1.0);
  c.noise = noise::Matern{alpha};
  c.horizon = T;
  c.dt = dt;
  c.integrator = integ;
  return c;
}

} // namespace

TEST(Spde, TimeStepsCoverHorizon) {
  auto c = matern_config(8, 0.5, 1.0, 0.3, Integrator::ExactOu);
  const auto st = time_steps(c);
  ASSERT_EQ(st.size(), 4u);
  EXPECT_NEAR(st.back(), 0.1, 1e-15);
  c.dt = 0.25;
  EXPECT_EQ(time_steps(c).size(), 4u);
}

TEST(Spde, ExactOuFollowsDocumentedStreamLayout) {
  const auto c = matern_config(16, 0.5, 0.02, 0.005, Integrator::ExactOu);
  const auto tr = simulate(c, 77, 3);
  const std::size_t mode = 3;
  const double lam = laplace_eigenvalue(c.grid.wavenumber_sq(mode));
  const double mu = bessel_symbol(c.grid.wavenumber_sq(mode), -0.5);
  Complex u = 0.0;
  const std::uint64_t key = rng::derive_stream(77, 3);
  for (std::size_t m = 0; m < 4; ++m) {
    rng::Stream st(rng::derive_stream(key, m));
    Complex z;
    for (std::size_t i = 0; i <= mode; ++i) z = st.complex_gaussian();
    u = std::exp(-lam * 0.005) * u + std::sqrt(mu * mu * -std::expm1(-2 * lam * 0.005) / (2 * lam)) * z;
    EXPECT_LT(std::abs(tr.states[m + 1].coeffs()[mode] - u), 1e-15);
  }
}

TEST(Spde, EnergyIdentityOfClosedForm) {
  // E||u(T)||^2 + 2 int_0^T E||grad u||^2 dt = T sum_k mu_k^2
  const auto c = matern_config(16, 0.7, 0.05, 0.01, Integrator::ExactOu);
  constexpr int steps = 2000;
  std::vector<double> t(steps + 1);
  for (int i = 0; i <= steps; ++i) t[i] = 0.05 * i / steps;
  const auto h1 = second_moment_closed_form(c, t, 0.0);
  const auto l2 = second_moment_closed_form(c, t, 1.0);
  double integral = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * (h1[i] - l2[i]);
  }
  integral *= 0.05 / steps / 3.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < c.grid.size(); ++i) trace += std::pow(bessel_symbol(c.grid.wavenumber_sq(i), -0.7), 2);
  EXPECT_NEAR(l2.back() + 2.0 * integral, 0.05 * trace, 1e-9 * trace);
}

TEST(Spde, ExactOuMonteCarloMatchesClosedForm) {
  const auto c = matern_config(32, 0.4, 0.05, 0.0125, Integrator::ExactOu);
  const auto mc = mc_moments(c, 0.7, 1000, 8);
  const double exact = second_moment_closed_form(c, 0.05, 0.7);
  EXPECT_LE(std::abs(mc.final_moment.mean - exact), 4.0 * mc.final_moment.stderr_of_mean);
  const double st = time_integrated_second_moment(c, 0.7);
  EXPECT_LE(std::abs(mc.spacetime_moment.mean - st), 4.0 * mc.spacetime_moment.stderr_of_mean);
  ASSERT_EQ(mc.mean_path.size(), 5u);
  EXPECT_EQ(mc.mean_path.front(), 0.0);
}

TEST(Spde, ExpEulerMonteCarloMatchesSchemeMoment) {
  const auto c = matern_config(16, 0.5, 0.05, 0.01, Integrator::ExpEuler);
  const auto mc = mc_moments(c, 0.8, 1500, 21);
  const double scheme = exp_euler_second_moment(c, 0.8);
  EXPECT_LE(std::abs(mc.final_moment.mean - scheme), 4.0 * mc.final_moment.stderr_of_mean);
}

TEST(Spde, ExpEulerMomentConvergesToClosedForm) {
  auto c = matern_config(64, 0.5, 0.1, 0.1, Integrator::ExpEuler);
  const double exact = second_moment_closed_form(c, 0.1, 0.9);
  double prev = INFINITY;
  for (int k = 3; k <= 8; ++k) {
    c.dt = 0.1 / (1 << k);
    const double err = std::abs(exp_euler_second_moment(c, 0.9) - exact);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev / exact, 0.05);
}

TEST(Spde, NoiseSwitchOffGivesPureHeatFlow) {
  auto c = matern_config(32, 0.5, 0.1, 0.01, Integrator::ExpEuler);
  c.noise_off_after = 0.05;
  const auto tr = simulate(c, 4);
  for (std::size_t m = 0; m + 1 < tr.states.size(); ++m) {
    if (tr.times[m] < 0.05 - 1e-12) continue;
    EXPECT_LE(tr.states[m + 1].squared_l2_norm(), tr.states[m].squared_l2_norm());
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const Complex expect = std::exp(-laplace_eigenvalue(c.grid.wavenumber_sq(i)) * 0.01) * tr.states[m].coeffs()[i];
      EXPECT_LT(std::abs(tr.states[m + 1].coeffs()[i] - expect), 1e-15);
    }
  }
}

TEST(Spde, ConstantMultiplierScalesTheSolution) {
  auto c = matern_config(32, 0.5, 0.04, 0.01, Integrator::ExpEuler);
  const auto plain = simulate(c, 9);
  c.g = {SpectralField::constant(c.grid, 2.0)};
  const auto scaled = simulate(c, 9);
  for (std::size_t m = 0; m < plain.states.size(); ++m)
    for (std::size_t i = 0; i < c.grid.size(); ++i)
      EXPECT_LT(std::abs(scaled.states[m].coeffs()[i] - 2.0 * plain.states[m].coeffs()[i]), 1e-12);
}

TEST(Spde, SystemNoiseRuns) {
  SpdeConfig c;
  c.grid = Grid(1, 64, 1.0);
  c.noise = noise::System{OrthonormalSystem::haar(1, 0, 3), Coloring::haar(0.5, 1.0), 15};
  c.horizon = 0.01;
  c.dt = 0.005;
  c.integrator = Integrator::ExpEuler;
  const auto tr = simulate(c, 1);
  EXPECT_EQ(tr.states.size(), 3u);
  EXPECT_GT(tr.states.back().squared_l2_norm(), 0.0);
  EXPECT_THROW(second_moment_closed_form(c, 0.01, 0.5), ContractError);
}

TEST(Spde, DeterministicAcrossWorkers) {
  const auto c = matern_config(16, 0.5, 0.02, 0.005, Integrator::ExactOu);
  const auto a = mc_moments(c, 0.5, 30, 3, 1);
  const auto b = mc_moments(c, 0.5, 30, 3, 2);
  EXPECT_EQ(a.final_moment.mean, b.final_moment.mean);
  EXPECT_EQ(a.spacetime_moment.mean, b.spacetime_moment.mean);
  EXPECT_EQ(a.mean_path, b.mean_path);
}

TEST(Spde, TrajectoryDumpRoundTrips) {
  SpdeConfig c;
  c.grid = Grid(2, 8, 2.0);
  c.noise = noise::Matern{0.5};
  c.horizon = 0.01;
  c.dt = 0.0025;
  const auto tr = simulate(c, 12);
  const auto path = (std::filesystem::temp_directory_path() / "gammanoise_traj_test.bin").string();
  write_trajectory(path, tr);
  EXPECT_EQ(std::filesystem::file_size(path), 16u + tr.states.size() * 64u * 16u);
  const auto back = read_trajectory(path, 2.0);
  ASSERT_EQ(back.size(), tr.states.size());
  for (std::size_t m = 0; m < back.size(); ++m) {
    EXPECT_TRUE(back[m].grid() == c.grid);
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(back[m].coeffs()[i], tr.states[m].coeffs()[i]);
  }
  std::filesystem::resize_file(path, 100);
  EXPECT_THROW(read_trajectory(path, 2.0), IoError);
  std::filesystem::remove(path);
}

TEST(Spde, ConfigValidation) {
  auto c = matern_config(16, 0.5, 0.1, 0.2, Integrator::ExactOu);
  EXPECT_THROW(SpdeStepper{c}, ConfigError);
  c.dt = 0.01;
  c.g = {SpectralField::constant(c.grid, 1.0)};
  EXPECT_THROW(SpdeStepper{c}, ConfigError);
  c.g.clear();
  c.noise_off_after = 0.05;
  EXPECT_THROW(SpdeStepper{c}, ConfigError);
  c.noise_off_after.reset();
  c.noise = noise::Matern{-1.0};
  EXPECT_THROW(SpdeStepper{c}, ConfigError);
  c.noise = noise::System{OrthonormalSystem::synthetic_growth(1), Coloring::constant(1.0), 4};
  c.integrator = Integrator::ExpEuler;
  EXPECT_THROW(SpdeStepper{c}, ConfigError);
}
