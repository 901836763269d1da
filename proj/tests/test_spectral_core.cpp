#include <gtest/gtest.h>

#include <numbers>

#include "gammanoise/spectral.hpp"
#include "support.hpp"

using namespace gammanoise;
using gammanoise::testing::naive_coefficients;
using gammanoise::testing::random_field;

constexpr double pi = std::numbers::pi;

TEST(Grid, FrequencyLayoutAssignsNyquistToPositive) {
  const Grid g(1, 8);
  std::vector<int> k;
  for (std::size_t i = 0; i < 8; ++i) k.push_back(g.signed_frequency(i));
  EXPECT_EQ(k, (std::vector<int>{0, 1, 2, 3, 4, -3, -2, -1}));
}

TEST(Grid, FlatIndexRoundTrips) {
  const Grid g(3, 8, 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat_index(g.frequency(i)), i);
  EXPECT_THROW(g.flat_index({-4, 0, 0}), RangeError);
}

TEST(Grid, RowMajorWithAxisZeroSlowest) {
  const Grid g(2, 4, 1.0);
  const auto m = g.multi_index(1);
  EXPECT_EQ(m[0], 0);
  EXPECT_EQ(m[1], 1);
  const auto x = g.point(4);
  EXPECT_DOUBLE_EQ(x[0], 0.25);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(4, 8), DimensionError);
  EXPECT_THROW(Grid(1, 6), ParameterError);
  EXPECT_THROW(Grid(1, 8, -1.0), ParameterError);
}

TEST(SpectralField, CoefficientsMatchNaiveDft) {
  const Grid g(2, 8, 3.0);
  rng::Stream st(7);
  std::vector<Complex> v(g.size());
  for (auto& z : v) z = st.complex_gaussian();
  const auto f = SpectralField::from_values(g, v);
  const auto ref = naive_coefficients(g, v);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(f.coeffs()[i] - ref[i]), 1e-13);
  const auto back = f.values();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(back[i] - v[i]), 1e-13);
}

TEST(SpectralField, ModeIsPlaneWave) {
  const Grid g(1, 16, 2.0);
  const auto f = SpectralField::mode(g, {3, 0, 0});
  const auto v = f.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i)[0];
    EXPECT_LT(std::abs(v[i] - std::polar(1.0, 2 * pi * 3 * x / 2.0)), 1e-13);
  }
}

TEST(SpectralField, PlancherelProperty) {
  for (int d = 1; d <= 3; ++d) {
    const Grid g(d, d == 3 ? 8 : 32, 1.5);
    rng::Stream st(11 + d);
    const auto f = random_field(g, 4, st, false);
    const auto v = f.values();
    double direct = 0.0;
    for (const auto& z : v) direct += std::norm(z);
    direct *= g.cell_measure();
    EXPECT_NEAR(f.squared_l2_norm() / direct, 1.0, 1e-10);
    EXPECT_NEAR(std::pow(lq_norm(f, 2.0), 2) / f.squared_l2_norm(), 1.0, 1e-10);
  }
}

TEST(SpectralField, ResampleKeepsBandLimitedFields) {
  const Grid g(2, 16, 1.0);
  rng::Stream st(3);
  const auto f = random_field(g, 5, st, true);
  const auto up = resample(f, 64);
  const auto down = resample(up, 16);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(down.coeffs()[i] - f.coeffs()[i]), 1e-14);
  EXPECT_NEAR(up.squared_l2_norm(), f.squared_l2_norm(), 1e-12 * f.squared_l2_norm());
}

TEST(SpectralField, ResampleSplitsRealNyquistMode) {
  const Grid g(1, 8, 1.0);
  const auto f = SpectralField::from_function(g, [](const std::array<double, 3>& x) { return std::cos(2 * pi * 4 * x[0]); });
  const auto up = resample(f, 32);
  for (double v : up.real_values()) EXPECT_LE(std::abs(v), 1.0 + 1e-12);
  const auto vals = up.values();
  for (std::size_t i = 0; i < 32; ++i) EXPECT_LT(std::abs(vals[i].imag()), 1e-13);
}

TEST(SpectralField, MultiplyIsPointwiseOnFineGrid) {
  const Grid g(1, 32, 1.0);
  rng::Stream st(5);
  const auto a = random_field(g, 6, st, false);
  const auto b = random_field(g, 6, st, false);
  const auto p = multiply(a, b, 2);
  const auto av = resample(a, 64).values(), bv = resample(b, 64).values(), pv = p.values();
  for (std::size_t i = 0; i < 64; ++i) EXPECT_LT(std::abs(pv[i] - av[i] * bv[i]), 1e-12);
}

TEST(SpectralField, ConvolutionTheorem) {
  const Grid g(1, 16, 2.0);
  rng::Stream st(9);
  const auto a = random_field(g, 7, st, false);
  const auto b = random_field(g, 7, st, false);
  const auto c = convolve(a, b).values();
  const auto av = a.values(), bv = b.values();
  for (std::size_t i = 0; i < 16; ++i) {
    Complex direct = 0.0;
    for (std::size_t j = 0; j < 16; ++j) direct += av[j] * bv[(i + 16 - j) % 16];
    direct *= g.spacing();
    EXPECT_LT(std::abs(c[i] - direct), 1e-12);
  }
}

TEST(Norms, ConstantAndSine) {
  const Grid g(1, 64, 1.0);
  EXPECT_NEAR(lq_norm(SpectralField::constant(g, 2.0), 3.0), 2.0, 1e-14);
  const auto s = SpectralField::from_function(g, [](const std::array<double, 3>& x) { return std::sin(2 * pi * x[0]); });
  EXPECT_NEAR(lq_norm(s, 4.0), std::pow(3.0 / 8.0, 0.25), 1e-12);
  EXPECT_NEAR(sup_norm(s, 4), 1.0, 1e-12);
  EXPECT_NEAR(lq_norm(s, 2.0), std::sqrt(0.5), 1e-14);
}

TEST(Norms, HsqAtZeroEqualsLq) {
  const Grid g(2, 32, 1.0);
  rng::Stream st(1);
  const auto f = random_field(g, 6, st, true);
  for (double q : {1.0, 2.0, 3.5, 8.0}) EXPECT_NEAR(hsq_norm(f, 0.0, q), lq_norm(f, q), 1e-12 * lq_norm(f, q));
}

TEST(Norms, HsqMonotoneInSmoothness) {
  const Grid g(1, 128, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    rng::Stream st(100 + trial);
    const auto f = random_field(g, 30, st, trial % 2 == 0);
    const double q = 1.0 + 4.0 * st.uniform();
    double prev = hsq_norm(f, 0.0, q);
    for (double s : {0.25, 0.5, 1.0, 2.0}) {
      const double cur = hsq_norm(f, -s, q);
      EXPECT_LE(cur, prev * (1 + 1e-12));
      prev = cur;
    }
  }
}

TEST(Norms, WeakBelowStrong) {
  const Grid g(1, 256, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    rng::Stream st(200 + trial);
    const auto f = random_field(g, 40, st, false);
    for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_LE(weak_lp_norm(f, p), lq_norm(f, p) * (1 + 1e-12));
  }
}

TEST(Norms, WeakNormOfIndicatorLikeField) {
  // |f| = 1 on a set of measure a, 0 elsewhere: weak norm = a^{1/p}
  const Grid g(1, 64, 1.0);
  std::vector<double> v(64, 0.0);
  for (int i = 0; i < 16; ++i) v[i] = 1.0;
  const auto f = SpectralField::from_real_values(g, v);
  EXPECT_NEAR(weak_lp_norm(f, 2.0), 0.5, 1e-12);
}

TEST(LittlewoodPaley, BlocksPartitionCoefficients) {
  const Grid g(2, 64, 1.0);
  rng::Stream st(4);
  const auto f = random_field(g, 31, st, true);
  auto sum = SpectralField::zero(g, false);
  for (int j = 0; j <= 6; ++j) sum += lp_block(f, j);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(sum.coeffs()[i], f.coeffs()[i]);
}

TEST(LittlewoodPaley, SingleBlockSupport) {
  const Grid g(1, 64, 1.0);
  const auto b = lp_block(SpectralField::mode(g, {5, 0, 0}), 3);
  EXPECT_GT(b.squared_l2_norm(), 0.0);
  EXPECT_EQ(lp_block(SpectralField::mode(g, {5, 0, 0}), 2).squared_l2_norm(), 0.0);
}

TEST(Kernels, BesselKernelHasUnitMassAndInvertsPotential) {
  const Grid g(1, 256, 2.0);
  const auto G = bessel_kernel(g, 0.5);
  EXPECT_NEAR((G.coeff({0, 0, 0}) * g.volume()).real(), 1.0, 1e-14);
  rng::Stream st(8);
  const auto f = random_field(g, 20, st, true);
  const auto a = convolve(G, f);
  const auto b = bessel_apply(f, -0.5);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(a.coeffs()[i] - b.coeffs()[i]), 1e-13);
}

TEST(Kernels, BesselApplyRoundTrips) {
  const Grid g(2, 16, 1.0);
  rng::Stream st(12);
  const auto f = random_field(g, 7, st, false);
  const auto back = bessel_apply(bessel_apply(f, 1.3), -1.3);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(back.coeffs()[i] - f.coeffs()[i]), 1e-12);
}

TEST(Kernels, HeatSemigroupProperty) {
  const Grid g(1, 128, 1.0);
  rng::Stream st(2);
  const auto f = random_field(g, 40, st, true);
  const auto a = heat_apply(heat_apply(f, 0.001), 0.002);
  const auto b = heat_apply(f, 0.003);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(a.coeffs()[i] - b.coeffs()[i]), 1e-14);
  const auto k = heat_kernel(g, 0.01);
  EXPECT_NEAR(lq_norm(k, 1.0), 1.0, 1e-10);
}

TEST(Kernels, HeatKernelMatchesGaussianImageSum) {
  const Grid g(1, 256, 1.0);
  const double t = 0.002;
  const auto v = heat_kernel(g, t).real_values();
  for (std::size_t i = 0; i < g.size(); i += 17) {
    const double x = g.point(i)[0];
    double ref = 0.0;
    for (int m = -3; m <= 3; ++m) ref += std::exp(-(x - m) * (x - m) / (4 * t)) / std::sqrt(4 * pi * t);
    EXPECT_NEAR(v[i], ref, 1e-9 * std::max(1.0, ref));
  }
}

TEST(Kernels, DirichletKernelNorms) {
  const Grid g(1, 1024, 1.0);
  const auto D = dirichlet_kernel(g, 16);
  EXPECT_NEAR(std::pow(lq_norm(D, 2.0), 2), 33.0, 1e-9);
  EXPECT_NEAR(sup_norm(D), 33.0, 1e-9);
}

TEST(Kernels, InnerProductOfOrthogonalModes) {
  const Grid g(2, 8, 1.0);
  const auto a = SpectralField::mode(g, {1, 2, 0});
  const auto b = SpectralField::mode(g, {1, -2, 0});
  EXPECT_LT(std::abs(inner_product(a, b)), 1e-14);
  EXPECT_NEAR(inner_product(a, a).real(), 1.0, 1e-14);
}
