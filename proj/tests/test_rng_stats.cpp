#include <gtest/gtest.h>

#include <atomic>
#include <set>

#include "gammanoise/parallel.hpp"
#include "gammanoise/rng.hpp"
#include "gammanoise/stats.hpp"

using namespace gammanoise;

TEST(Rng, Mix64ReferenceValues) {
  // splitmix64 outputs for seed 0, from the published reference implementation
  rng::Stream st(0);
  EXPECT_EQ(st.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(st.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(st.next(), 0x06C45D188009454FULL);
}

TEST(Rng, DerivedStreamsAreDistinctAndStable) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t t = 0; t < 10000; ++t) keys.insert(rng::derive_stream(42, t));
  EXPECT_EQ(keys.size(), 10000u);
  EXPECT_EQ(rng::derive_stream(42, 7), rng::mix64(42 ^ rng::mix64(7 + rng::golden_gamma)));
  EXPECT_NE(rng::derive_stream(1, 0), rng::derive_stream(2, 0));
}

TEST(Rng, UniformAndGaussianMoments) {
  rng::Stream st(rng::derive_stream(1, 1));
  constexpr int n = 200000;
  double su = 0, sg = 0, sg2 = 0, sg4 = 0, sc2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = st.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double g = st.gaussian();
    sg += g;
    sg2 += g * g;
    sg4 += g * g * g * g;
    sc2 += std::norm(st.complex_gaussian());
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sg / n, 0.0, 0.01);
  EXPECT_NEAR(sg2 / n, 1.0, 0.01);
  EXPECT_NEAR(sg4 / n, 3.0, 0.06);
  EXPECT_NEAR(sc2 / n, 1.0, 0.01);
}

TEST(Stats, NeumaierRecoversCancelledTerms) {
  const std::vector<double> xs{1.0, 1e100, 1.0, -1e100};
  EXPECT_EQ(compensated_sum(xs), 2.0);
}

TEST(Stats, MeanAndStderr) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto m = mean_and_stderr(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.stderr_of_mean, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  const std::vector<double> one{1.0};
  EXPECT_THROW(mean_and_stderr(one), ParameterError);
}

TEST(Stats, LeastSquaresExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-14);
  const std::vector<double> N{2, 4, 8, 16}, v{4, 16, 64, 256};
  EXPECT_NEAR(loglog_fit(N, v).slope, 2.0, 1e-12);
}

TEST(Parallel, EveryIndexVisitedOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(100, 3, [](std::size_t i) {
                 if (i == 57) throw RangeError("boom");
               }),
               RangeError);
}

TEST(Parallel, WorkerResolution) {
  EXPECT_EQ(resolve_workers(3), 3u);
  ::setenv("GAMMANOISE_WORKERS", "2", 1);
  EXPECT_EQ(resolve_workers(0), 2u);
  ::setenv("GAMMANOISE_WORKERS", "zero", 1);
  EXPECT_THROW(resolve_workers(0), ConfigError);
  ::unsetenv("GAMMANOISE_WORKERS");
  EXPECT_EQ(resolve_workers(0), 1u);
}
