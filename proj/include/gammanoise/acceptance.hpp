#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "gamma_operator.hpp"
#include "gaussian_series.hpp"
#include "heat_spde.hpp"
#include "io/csv.hpp"
#include "io/manifest.hpp"

namespace gammanoise::acceptance {

struct Verdict {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0; // wall time, never serialized
};

struct Options {
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
  unsigned alt_workers = 3; // second run of criterion 12
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Random band-limited field with Gaussian coefficients on |k|_inf <= kmax.
inline SpectralField random_band_field(const Grid& grid, int kmax, rng::Stream& st, bool real) {
  std::vector<Complex> c(grid.size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Lattice k = grid.frequency(i);
    if (lattice_sup_norm(k, grid.dim()) > kmax) continue;
    c[i] = st.complex_gaussian();
  }
  if (real) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == Complex(0.0, 0.0)) continue;
      Lattice k = grid.frequency(i);
      for (int a = 0; a < grid.dim(); ++a) k[a] = -k[a];
      const std::size_t j = grid.flat_index(k);
      if (j < i) continue;
      if (j == i) c[i] = c[i].real();
      else c[j] = std::conj(c[i]);
    }
  }
  return SpectralField(grid, std::move(c), real);
}

inline double max_over_min(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

inline Verdict make(int id, std::string name) {
  Verdict v;
  v.id = id;
  v.name = std::move(name);
  return v;
}

} // namespace detail

/// 1. Monte Carlo squared norm against the exact Hilbert-Schmidt value.
inline Verdict criterion_1(const Options& o) {
  auto v = detail::make(1, "mc_vs_exact_hs");
  constexpr int specs = 20;
  constexpr std::size_t M = 2000;
  constexpr double z_tol = 3.0;
  constexpr int allowed_failures = 1;
  constexpr double time_budget_s = 120.0;
  const Grid grid(1, 1024, 1.0);
  io::Stopwatch sw;
  int failures = 0;
  double max_z = 0.0;
  for (int i = 0; i < specs; ++i) {
    rng::Stream st(rng::derive_stream(o.seed, 0xC1000 + i));
    const double s = 0.2 + 0.8 * st.uniform();
    const double alpha = 0.2 + 0.8 * st.uniform();
    Coloring mu = i % 3 == 0 ? Coloring::power_law(alpha) : i % 3 == 1 ? Coloring::matern(alpha) : Coloring::constant(1.0);
    std::optional<SpectralField> g;
    if (i % 2 == 1) {
      auto f = detail::random_band_field(grid, 8, st, true);
      f *= 0.25;
      f += SpectralField::constant(grid, 1.0);
      g = std::move(f);
    }
    SeriesSpec spec{grid, OrthonormalSystem::fourier(1), mu, g, 256, s, 2.0, 2};
    const double exact = hs_gamma_norm_exact(spec);
    const auto mc = mc_gamma_norm(spec, M, rng::derive_stream(o.seed, i), o.workers);
    const double z = std::abs(mc.mean - exact * exact) / mc.stderr_of_mean;
    max_z = std::max(max_z, z);
    if (z > z_tol) ++failures;
    v.metrics.emplace_back("spec" + std::to_string(i) + ".mc_mean", mc.mean);
    v.metrics.emplace_back("spec" + std::to_string(i) + ".exact_sq", exact * exact);
  }
  const double t = sw.seconds();
  v.metrics.emplace_back("max_z", max_z);
  v.metrics.emplace_back("failures", failures);
  v.passed = failures <= allowed_failures && t < time_budget_s;
  v.detail = std::to_string(failures) + "/" + std::to_string(specs) + " specs beyond 3 stderr, max z " + detail::fmt(max_z) +
             ", " + detail::fmt(t) + " s";
  return v;
}

/// 2. Closed-form A_{f,g} norm against the brute-force Hilbert-Schmidt matrix.
inline Verdict criterion_2(const Options& o) {
  auto v = detail::make(2, "afg_vs_bruteforce");
  constexpr double tol = 1e-8;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    rng::Stream st(rng::derive_stream(o.seed, 0xC2000 + i));
    const int d = i % 2 == 0 ? 1 : 2;
    const Grid grid(d, 64, d == 1 ? 1.0 : 2.0);
    const int kmax = d == 1 ? 12 : 6;
    const ConvPair pair{detail::random_band_field(grid, kmax, st, false), detail::random_band_field(grid, kmax, st, false), 2.0, 1};
    const double a = afg_gamma_norm(pair);
    const double b = afg_bruteforce_hs(pair);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  v.metrics.emplace_back("max_rel_err", worst);
  v.passed = worst <= tol;
  v.detail = "max relative error " + detail::fmt(worst);
  return v;
}

/// 3. A_{f,g} at q = 2 equals ||f||_2 ||g||_2.
inline Verdict criterion_3(const Options& o) {
  auto v = detail::make(3, "afg_q2_product");
  constexpr double tol = 1e-8;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    rng::Stream st(rng::derive_stream(o.seed, 0xC3000 + i));
    const int d = i % 2 == 0 ? 1 : 2;
    const Grid grid(d, d == 1 ? 256 : 32, 1.0 + st.uniform());
    const int kmax = d == 1 ? 40 : 6;
    const ConvPair pair{detail::random_band_field(grid, kmax, st, i % 4 < 2), detail::random_band_field(grid, kmax, st, false), 2.0, 1};
    const double a = afg_gamma_norm(pair);
    const double b = std::sqrt(pair.f.squared_l2_norm() * pair.g.squared_l2_norm());
    worst = std::max(worst, std::abs(a - b) / b);
  }
  v.metrics.emplace_back("max_rel_err", worst);
  v.passed = worst <= tol;
  v.detail = "max relative error " + detail::fmt(worst);
  return v;
}

/// 4. White noise in d = 1, q = 2: exact sum, Monte Carlo agreement and growth class.
inline Verdict criterion_4(const Options& o) {
  auto v = detail::make(4, "white_noise_identity");
  constexpr double sum_tol = 1e-12;
  const Grid grid(1, 1024, 1.0);
  const int Ks[] = {16, 32, 64, 128, 256};
  bool ok = true;
  double worst = 0.0;
  std::string labels;
  for (double s : {0.3, 0.7}) {
    std::vector<std::pair<double, double>> series;
    for (int K : Ks) {
      SeriesSpec spec{grid, OrthonormalSystem::fourier(1), Coloring::constant(1.0), std::nullopt, 2 * static_cast<std::size_t>(K) + 1, s, 2.0, 2};
      const double e = hs_gamma_norm_exact(spec);
      double direct = 1.0;
      for (int k = K; k >= 1; --k) direct += 2.0 * std::pow(1.0 + 4.0 * std::numbers::pi * std::numbers::pi * k * k, -s);
      worst = std::max(worst, std::abs(e * e - direct) / direct);
      series.emplace_back(K, e * e);
      if (K == 64) {
        const auto mc = mc_gamma_norm(spec, 400, rng::derive_stream(o.seed, 0xC4000 + static_cast<int>(10 * s)), o.workers);
        const double z = std::abs(mc.mean - e * e) / mc.stderr_of_mean;
        v.metrics.emplace_back("s" + detail::fmt(s) + ".mc_z", z);
        ok = ok && z <= 3.0;
      }
    }
    const auto rep = classify_growth(series);
    v.metrics.emplace_back("s" + detail::fmt(s) + ".loglog_slope", rep.slope);
    labels += " s=" + detail::fmt(s) + ":" + to_string(rep.classification);
    if (s == 0.3) ok = ok && rep.classification == GrowthClass::Divergent && std::abs(rep.slope - (1.0 - 2.0 * s)) <= 0.1;
    else ok = ok && rep.classification == GrowthClass::Convergent;
  }
  v.metrics.emplace_back("max_rel_err_sum", worst);
  v.passed = ok && worst <= sum_tol;
  v.detail = "sum error " + detail::fmt(worst) + labels;
  return v;
}

/// 5. ||D_N||_eta ~ N^{1 - 1/eta}.
inline Verdict criterion_5(const Options&) {
  auto v = detail::make(5, "dirichlet_exponent");
  constexpr double tol = 0.05;
  constexpr double time_budget_s = 10.0;
  const int Ns[] = {8, 16, 32, 64, 128, 256};
  io::Stopwatch sw;
  bool ok = true;
  for (double eta : {2.0, 3.0, 4.0}) {
    const auto r = dirichlet_norm_test(eta, Ns);
    v.metrics.emplace_back("eta" + detail::fmt(eta) + ".exponent", r.fit.exponent);
    v.detail += "eta=" + detail::fmt(eta) + ":" + detail::fmt(r.fit.exponent) + " ";
    ok = ok && std::abs(r.fit.exponent - r.predicted) <= tol;
  }
  const double t = sw.seconds();
  v.passed = ok && t < time_budget_s;
  v.detail += detail::fmt(t) + " s";
  return v;
}

namespace detail {

inline bool sign_matches(const ExponentFit& fit, double predicted, double tol) {
  if (!fit.conclusive) return false;
  if (std::abs(fit.exponent - predicted) > tol) return false;
  if (std::abs(predicted) <= 1e-12) return true;
  return predicted > 0.0 ? fit.exponent > 0.0 : fit.exponent < 0.0;
}

template <class Run>
Verdict construction_verdict(int id, std::string name, const std::vector<ParamTuple>& tuples, Run run) {
  constexpr double tol = 0.15;
  auto v = make(id, std::move(name));
  v.passed = true;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const ConstructionResult r = run(tuples[i]);
    const std::string tag = "s" + fmt(tuples[i].s);
    v.metrics.emplace_back(tag + ".fitted", r.fit.exponent);
    v.metrics.emplace_back(tag + ".predicted", r.predicted);
    v.metrics.emplace_back(tag + ".r2", r.fit.r2);
    v.detail += tag + ": fit " + fmt(r.fit.exponent) + " vs " + fmt(r.predicted) + "; ";
    v.passed = v.passed && sign_matches(r.fit, r.predicted, tol);
  }
  return v;
}

} // namespace detail

/// 6. Frequency-block construction: strict, equality and violated tuples.
inline Verdict criterion_6(const Options&) {
  const std::vector<ParamTuple> tuples{{1, 0.9, 4.0, 2.0, 4.0, std::nullopt}, {1, 0.5, 4.0, 2.0, 4.0, std::nullopt}, {1, 0.2, 4.0, 2.0, 4.0, std::nullopt}};
  const std::vector<int> Ns{3, 4, 5, 6, 7};
  return detail::construction_verdict(6, "freq_block_exponent", tuples, [&](const ParamTuple& t) { return frequency_block_test(t, Ns); });
}

/// 7. Rescaled-bump construction on the same three classes.
inline Verdict criterion_7(const Options&) {
  const std::vector<ParamTuple> tuples{{1, 0.65, 4.0, 2.5, 10.0 / 3.0, std::nullopt}, {1, 0.35, 4.0, 2.5, 10.0 / 3.0, std::nullopt}, {1, 0.05, 4.0, 2.5, 10.0 / 3.0, std::nullopt}};
  const std::vector<int> ms{0, 1, 2, 3, 4, 5};
  return detail::construction_verdict(7, "rescaled_bump_exponent", tuples, [&](const ParamTuple& t) { return rescaled_bump_test(t, ms); });
}

/// 8. Bessel kernel in weak L^{d/(d-s)}: finite and stable under refinement.
inline Verdict criterion_8(const Options&) {
  auto v = detail::make(8, "bessel_weak_lp");
  constexpr double max_ratio = 2.0;
  v.passed = true;
  for (double s : {0.6, 0.75, 0.9}) {
    std::vector<double> vals;
    for (std::size_t n : {1024u, 4096u}) {
      const double w = weak_lp_norm(bessel_kernel(Grid(1, n, 1.0), s), 1.0 / (1.0 - s));
      vals.push_back(w);
      v.metrics.emplace_back("s" + detail::fmt(s) + ".n" + std::to_string(n), w);
      v.passed = v.passed && std::isfinite(w) && w > 0.0;
    }
    const double ratio = detail::max_over_min(vals);
    v.passed = v.passed && ratio <= max_ratio;
    v.detail += "s=" + detail::fmt(s) + " ratio " + detail::fmt(ratio) + "; ";
  }
  return v;
}

/// 9. ||S(t)||_{S^2} t^{d/4} bounded and the witness decays like t^{-d/4}.
inline Verdict criterion_9(const Options&) {
  auto v = detail::make(9, "schatten_heat");
  constexpr double max_ratio = 2.0;
  constexpr double exp_tol = 0.05;
  v.passed = true;
  for (int d : {1, 2}) {
    const Grid grid(d, d == 1 ? 1024 : 256, 1.0);
    const auto one = SpectralField::constant(grid, 1.0);
    std::vector<double> scaled;
    for (int i = 0; i <= 8; ++i) {
      const double t = 1e-3 * std::pow(10.0, i / 4.0);
      scaled.push_back(schatten_heat_norm(one, t) * std::pow(t, 0.25 * d));
    }
    const double ratio = detail::max_over_min(scaled);
    std::vector<double> lt, lw;
    const int lo = d == 1 ? -14 : -12;
    for (int e = lo; e <= -6; ++e) {
      const double t = std::exp2(e);
      lt.push_back(std::log2(t));
      lw.push_back(std::log2(heat_sharpness_witness(grid, t)));
    }
    const auto fit = least_squares(lt, lw);
    const std::string tag = "d" + std::to_string(d);
    v.metrics.emplace_back(tag + ".scaled_ratio", ratio);
    v.metrics.emplace_back(tag + ".witness_exponent", fit.slope);
    v.detail += tag + ": ratio " + detail::fmt(ratio) + ", witness exponent " + detail::fmt(fit.slope) + "; ";
    v.passed = v.passed && ratio <= max_ratio && std::abs(fit.slope + 0.25 * d) <= exp_tol;
  }
  return v;
}

/// 10. Heat SPDE: exact_ou second moment at T and exp_euler strong order.
inline Verdict criterion_10(const Options& o) {
  auto v = detail::make(10, "heat_spde_moments");
  constexpr double z_tol = 3.0;
  constexpr double min_order = 0.8;
  constexpr double s = 0.9;
  constexpr double T = 0.1;
  SpdeConfig c;
  c.grid = Grid(1, 64, 1.0);
  c.noise = noise::Matern{0.3};
  c.horizon = T;
  c.dt = T / 16.0;
  c.integrator = Integrator::ExactOu;
  const auto mom = mc_moments(c, s, 500, rng::derive_stream(o.seed, 0xC10), o.workers);
  const double exact = second_moment_closed_form(c, T, s);
  const double z = std::abs(mom.final_moment.mean - exact) / mom.final_moment.stderr_of_mean;
  const double st_exact = time_integrated_second_moment(c, s);
  const double st_z = std::abs(mom.spacetime_moment.mean - st_exact) / mom.spacetime_moment.stderr_of_mean;

  c.integrator = Integrator::ExpEuler;
  std::vector<double> ldt, lerr, scheme;
  for (int e = 4; e <= 9; ++e) {
    c.dt = T * std::exp2(-e);
    scheme.push_back(exp_euler_second_moment(c, s));
    if (e == 9) break;
    ldt.push_back(std::log2(c.dt));
    lerr.push_back(std::log2(std::abs(scheme.back() - exact)));
  }
  std::vector<double> lself;
  for (std::size_t i = 0; i + 1 < scheme.size(); ++i) lself.push_back(std::log2(std::abs(scheme[i] - scheme[i + 1])));
  const auto fit = least_squares(ldt, lerr);
  const auto self_fit = least_squares(ldt, lself);
  v.metrics.emplace_back("final_mc_mean", mom.final_moment.mean);
  v.metrics.emplace_back("final_exact", exact);
  v.metrics.emplace_back("final_z", z);
  v.metrics.emplace_back("spacetime_z", st_z);
  v.metrics.emplace_back("exp_euler_order", fit.slope);
  v.metrics.emplace_back("exp_euler_self_order", self_fit.slope);
  v.passed = z <= z_tol && fit.slope >= min_order && self_fit.slope >= min_order;
  v.detail = "z " + detail::fmt(z) + ", exp_euler order " + detail::fmt(fit.slope) + " (self " + detail::fmt(self_fit.slope) + ", needs >= 0.8)";
  return v;
}

/// 11. Haar partial sums: affine in J at zeta = d/alpha, geometric increments off it.
inline Verdict criterion_11(const Options&) {
  auto v = detail::make(11, "haar_level_growth");
  constexpr double affine_r2 = 0.99;
  constexpr double alpha = 0.5;
  constexpr double beta = 2.0;
  constexpr int J = 12;
  const auto sys = OrthonormalSystem::haar(1, -J, J, std::exp2(J));
  const Coloring mu = Coloring::haar(alpha, beta);
  v.passed = true;
  for (double zeta : {2.0, 1.5, 3.0}) {
    const auto levels = haar_level_power_sums(mu, sys, zeta);
    std::vector<double> Js, S, inc;
    double total = 0.0;
    for (int k = 0; k <= J; ++k) {
      double add = 0.0;
      for (const auto& [j, val] : levels)
        if (std::abs(j) == k) add += val;
      total += add;
      if (k >= 1) {
        Js.push_back(k);
        S.push_back(total);
        inc.push_back(std::log2(add));
      }
    }
    const std::string tag = "zeta" + detail::fmt(zeta);
    if (zeta == 2.0) {
      const auto fit = least_squares(Js, S);
      v.metrics.emplace_back(tag + ".affine_r2", fit.r2);
      v.detail += tag + " affine r2 " + detail::fmt(fit.r2) + "; ";
      v.passed = v.passed && fit.r2 >= affine_r2;
    } else {
      const std::vector<double> x(Js.begin() + 6, Js.end()), y(inc.begin() + 6, inc.end());
      const auto fit = least_squares(x, y);
      const double rate = std::abs(1.0 - alpha * zeta);
      v.metrics.emplace_back(tag + ".increment_log2_rate", fit.slope);
      v.detail += tag + " increment rate " + detail::fmt(fit.slope) + " vs " + detail::fmt(rate) + "; ";
      v.passed = v.passed && fit.r2 >= affine_r2 && fit.slope >= 0.5 * rate;
    }
  }
  return v;
}

using CriterionFn = Verdict (*)(const Options&);

inline const std::vector<CriterionFn>& criteria() {
  static const std::vector<CriterionFn> fns{criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
                                            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
  return fns;
}

/// Serialized verdict table: one row per metric plus one per criterion.
inline io::CsvTable verdict_table(const std::vector<Verdict>& vs, const std::string& run_id) {
  io::CsvTable t;
  t.header = {"run_id", "criterion", "name", "passed", "metric", "value"};
  for (const auto& v : vs) {
    t.add_row({run_id, std::int64_t{v.id}, v.name, std::int64_t{v.passed}, std::string("passed"), double(v.passed)});
    for (const auto& [k, x] : v.metrics) t.add_row({run_id, std::int64_t{v.id}, v.name, std::int64_t{v.passed}, k, x});
  }
  return t;
}

inline std::vector<Verdict> run_criteria(const Options& o, const std::function<void(const Verdict&)>& on_done = {}) {
  std::vector<Verdict> out;
  for (auto fn : criteria()) {
    io::Stopwatch sw;
    Verdict v;
    try {
      v = fn(o);
    } catch (const std::exception& e) {
      v = detail::make(static_cast<int>(out.size()) + 1, "error");
      v.detail = e.what();
    }
    v.seconds = sw.seconds();
    if (on_done) on_done(v);
    out.push_back(std::move(v));
  }
  return out;
}

/// 12. Rerun 1-11 with another worker count; metrics and serialized bytes must agree.
inline Verdict criterion_12(const Options& o, const std::vector<Verdict>& first) {
  auto v = detail::make(12, "worker_reproducibility");
  constexpr double tol = 1e-12;
  Options alt = o;
  alt.workers = o.alt_workers;
  const auto second = run_criteria(alt);
  double worst = 0.0;
  bool shape = first.size() == second.size();
  for (std::size_t i = 0; shape && i < first.size(); ++i) {
    shape = first[i].metrics.size() == second[i].metrics.size();
    for (std::size_t k = 0; shape && k < first[i].metrics.size(); ++k) {
      const double a = first[i].metrics[k].second, b = second[i].metrics[k].second;
      if (std::isnan(a) && std::isnan(b)) continue;
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
  }
  const bool bytes = io::to_csv_string(verdict_table(first, "")) == io::to_csv_string(verdict_table(second, ""));
  v.metrics.emplace_back("max_rel_diff", worst);
  v.metrics.emplace_back("identical_bytes", bytes);
  v.passed = shape && bytes && worst <= tol;
  v.detail = "workers " + std::to_string(o.workers) + " vs " + std::to_string(alt.workers) + ": max diff " + detail::fmt(worst) +
             (bytes ? ", identical CSV bytes" : ", CSV bytes differ");
  return v;
}

/// Criteria 1-11, then 12 if requested.
inline std::vector<Verdict> run_suite(const Options& o, bool reproducibility = true,
                                      const std::function<void(const Verdict&)>& on_done = {}) {
  auto out = run_criteria(o, on_done);
  if (reproducibility) {
    io::Stopwatch sw;
    auto v = criterion_12(o, out);
    v.seconds = sw.seconds();
    if (on_done) on_done(v);
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace gammanoise::acceptance
