#include <gtest/gtest.h>

#include <numbers>

#include "gammanoise/experiments.hpp"

using namespace gammanoise;

constexpr double pi = std::numbers::pi;

TEST(FrequencyBlock, RightSideAtInfiniteZetaIsTheMultiplierNorm) {
  const ParamTuple t{1, 0.5, 6.0, 4.0, infinite_exponent, std::nullopt};
  const std::vector<int> range{2, 3};
  const auto r = frequency_block_test(t, range);
  ASSERT_EQ(r.records.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    const int lo = 1 << range[j], hi = 3 * (1 << range[j]) / 2;
    // |g|^4 is a trigonometric polynomial of degree < 256, so 1024 nodes are exact
    double acc = 0.0;
    for (int p = 0; p < 1024; ++p) {
      Complex g = 0.0;
      for (int k = lo; k <= hi; ++k) g += std::polar(1.0, 2 * pi * k * p / 1024.0);
      acc += std::pow(std::abs(g), 4);
    }
    EXPECT_NEAR(r.records[j].rhs, std::pow(acc / 1024.0, 0.25), 1e-10);
    double hs = 0.0;
    for (int n = lo; n <= hi; ++n)
      for (int k = lo; k <= hi; ++k) hs += std::pow(1 + 4 * pi * pi * (k + n) * (k + n), -0.5);
    EXPECT_NEAR(r.records[j].lhs_hs, std::sqrt(hs), 1e-10 * std::sqrt(hs));
    EXPECT_DOUBLE_EQ(r.records[j].ratio, r.records[j].lhs / r.records[j].rhs);
  }
  EXPECT_NEAR(r.predicted, -0.5 + (0.5 - 1.0 / 6 + 0.25), 1e-15);
}

TEST(FrequencyBlock, RejectsThreeDimensions) {
  const std::vector<int> range{2, 3};
  EXPECT_THROW(frequency_block_test({3, 1.0, 4.0, 2.0, 4.0, std::nullopt}, range), DimensionError);
}

TEST(Dirichlet, L2NormsAreExact) {
  const std::vector<int> N{1, 2, 4, 8, 16};
  const auto r = dirichlet_norm_test(2.0, N);
  for (const auto& [n, v] : r.values) EXPECT_NEAR(v, std::sqrt(2.0 * n + 1), 1e-10);
  EXPECT_NEAR(r.predicted, 0.5, 1e-15);
  EXPECT_THROW(dirichlet_norm_test(2.0, std::vector<int>{1, 3, 4}), ParameterError);
}

TEST(RescaledBump, RecordsAreConsistent) {
  const ParamTuple t{1, 0.35, 4.0, 2.5, 10.0 / 3.0, std::nullopt};
  const std::vector<int> m{0, 1, 2};
  const auto r = rescaled_bump_test(t, m, {4096, 0.25});
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& rec : r.records) {
    EXPECT_GT(rec.rhs, 0.0);
    EXPECT_DOUBLE_EQ(rec.ratio, rec.lhs / rec.rhs);
  }
  EXPECT_NEAR(r.predicted, predicted_exponent(t, Construction::RescaledBump), 0.0);
}

TEST(Scaling, RequiresCriticalZeta) {
  const std::vector<int> m{0, 1};
  EXPECT_THROW(scaling_diagnostic(0.5, {1, 1.0 / 6, 2.0, 1.5, 3.0, std::nullopt}, m), ParameterError);
  const auto r = scaling_diagnostic(0.5, {1, 1.0 / 6, 2.0, 1.5, 2.0, std::nullopt}, m, {6, 256, 1.0, 0.5});
  ASSERT_EQ(r.records.size(), 2u);
  for (const auto& rec : r.records) EXPECT_DOUBLE_EQ(rec.ratio, rec.lhs / rec.rhs);
}

TEST(Sweep, ErrorsStayInTheirCells) {
  const std::vector<ParamTuple> tuples{{1, 0.6, 4.0, 2.0, 4.0, std::nullopt}, {3, 1.0, 4.0, 2.0, 4.0, std::nullopt}};
  SweepOptions opt;
  opt.freq_block_range = {2, 3, 4, 5};
  const auto cells = boundary_sweep(tuples, Construction::FrequencyBlock, opt);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_NE(cells[0].label, "error");
  EXPECT_EQ(cells[1].label, "error");
  EXPECT_FALSE(cells[1].error.empty());
  EXPECT_NEAR(cells[0].slack, -cells[0].predicted, 1e-15);
  EXPECT_EQ(cells[0].classification, cells[0].slack > 0 ? Classification::Strict : Classification::Violated);
}

TEST(Sweep, WorkerCountDoesNotChangeCells) {
  std::vector<ParamTuple> tuples;
  for (double s : {0.2, 0.5, 0.9}) tuples.push_back({1, s, 4.0, 2.0, 4.0, std::nullopt});
  SweepOptions opt;
  opt.freq_block_range = {2, 3, 4};
  const auto a = boundary_sweep(tuples, Construction::FrequencyBlock, opt, 1);
  const auto b = boundary_sweep(tuples, Construction::FrequencyBlock, opt, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].fit.exponent, b[i].fit.exponent);
    EXPECT_EQ(a[i].fit.r2, b[i].fit.r2);
    EXPECT_EQ(a[i].label, b[i].label);
  }
}

TEST(Fit, FlatDataIsConclusive) {
  const std::vector<double> x{0, 1, 2, 3}, y{0.001, -0.002, 0.0, 0.001};
  const auto f = fit_exponent(x, y);
  EXPECT_LT(f.r2, 0.9);
  EXPECT_TRUE(f.conclusive);
  const std::vector<double> noisy{0.0, 0.5, -0.4, 0.2};
  EXPECT_FALSE(fit_exponent(x, noisy).conclusive);
}
