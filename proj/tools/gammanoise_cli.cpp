#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "gammanoise/acceptance.hpp"
#include "gammanoise/gammanoise.hpp"
#include "gammanoise/io/builders.hpp"

namespace fs = std::filesystem;
using namespace gammanoise;
using io::Json;

namespace {

enum Exit { kOk = 0, kRuntime = 1, kConfig = 2, kPartial = 3 };

struct Context {
  Json cfg;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string run_id;
  io::RunManifest manifest;
};

struct Outcome {
  io::CsvTable table;
  int exit_code = kOk;
};

using Runner = std::function<Outcome(Context&)>;

struct Command {
  std::string name;
  std::string help;
  Json defaults;
  Runner run;
};

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

io::CsvTable table(std::vector<std::string> cols) {
  io::CsvTable t;
  t.header.push_back("run_id");
  for (auto& c : cols) t.header.push_back(std::move(c));
  return t;
}

Json fit_json(const ExponentFit& f) {
  return {{"exponent", f.exponent}, {"r2", f.r2}, {"residual_rms", f.residual_rms}, {"points", f.points}, {"conclusive", f.conclusive}};
}

Outcome run_series_norm(Context& c) {
  const Grid grid = io::build_grid(c.cfg["grid"]);
  SeriesSpec spec{grid, io::build_system(c.cfg["system"], grid), io::build_coloring(c.cfg["coloring"]),
                  io::build_multiplier(c.cfg["g"], grid), io::get_as<std::size_t>(c.cfg, "truncation"),
                  io::number(c.cfg["s"], "s"), io::number(c.cfg["q"], "q"), io::get_as<std::size_t>(c.cfg, "oversample")};
  const auto M = io::get_as<std::size_t>(c.cfg, "samples");
  const auto mc = mc_gamma_norm(spec, M, c.seed, c.workers);
  const double sq = sq_function_gamma_norm(spec);
  const double hs = spec.q == 2.0 ? hs_gamma_norm_exact(spec) : nan_v;
  Outcome o{table({"system", "coloring", "truncation", "s", "q", "samples", "seed", "mc_mean_sq", "mc_stderr", "mc_mean_norm",
                   "sq_function_norm", "hs_exact"})};
  o.table.add_row({c.run_id, spec.system.name(), spec.coloring.name(), static_cast<std::int64_t>(spec.truncation), spec.s, spec.q,
                   static_cast<std::int64_t>(M), std::to_string(c.seed), mc.mean, mc.stderr_of_mean, mc.mean_norm, sq, hs});
  return o;
}

std::vector<ParamTuple> sweep_tuples(const Json& cfg) {
  std::vector<ParamTuple> out;
  if (!cfg["tuples"].empty()) {
    for (const auto& t : cfg["tuples"]) out.push_back(io::build_params(t));
    return out;
  }
  const Json& p = cfg["product"];
  for (int d : io::int_list(p, "d"))
    for (double s : io::number_list(p, "s"))
      for (double q : io::number_list(p, "q"))
        for (double eta : io::number_list(p, "eta"))
          for (double zeta : io::number_list(p, "zeta")) out.push_back({d, s, q, eta, zeta, std::nullopt});
  return out;
}

Outcome run_sweep(Context& c) {
  const auto construction = construction_from_string(io::get_as<std::string>(c.cfg, "construction"));
  SweepOptions opt;
  const Json& r = c.cfg["ranges"];
  opt.freq_block_range = io::int_list(r, "freq_block");
  opt.rescaled_bump_range = io::int_list(r, "rescaled_bump");
  opt.shifted_bump_range = io::int_list(r, "shifted_bump");
  opt.scaling_range = io::int_list(r, "scaling");
  const auto tuples = sweep_tuples(c.cfg);
  require<ConfigError>(!tuples.empty(), "sweep has no parameter tuples");
  const auto cells = boundary_sweep(tuples, construction, opt, c.workers);
  Outcome o{table({"construction", "d", "s", "q", "eta", "zeta", "slack", "classification", "predicted_exponent", "fitted_exponent",
                   "r2", "residual_rms", "points", "conclusive", "label", "error"})};
  int errors = 0;
  for (const auto& cell : cells) {
    const auto& t = cell.params;
    o.table.add_row({c.run_id, cell.construction, std::int64_t{t.d}, t.s, t.q, t.eta, t.zeta, cell.slack,
                     std::string(to_string(cell.classification)), cell.predicted, cell.fit.exponent, cell.fit.r2,
                     cell.fit.residual_rms, static_cast<std::int64_t>(cell.fit.points), std::int64_t{cell.fit.conclusive}, cell.label,
                     cell.error});
    if (cell.label == "error") ++errors;
  }
  c.manifest.summary["cells"] = cells.size();
  c.manifest.summary["failed_cells"] = errors;
  if (errors > 0) o.exit_code = kPartial;
  return o;
}

Outcome construction_outcome(Context& c, const ConstructionResult& r) {
  Outcome o{table({"construction", "scale", "lhs", "rhs", "ratio", "lhs_hs", "predicted_exponent", "fitted_exponent", "r2", "conclusive"})};
  for (const auto& rec : r.records)
    o.table.add_row({c.run_id, rec.construction, rec.scale, rec.lhs, rec.rhs, rec.ratio, rec.lhs_hs, r.predicted, r.fit.exponent,
                     r.fit.r2, std::int64_t{r.fit.conclusive}});
  c.manifest.summary["fit"] = fit_json(r.fit);
  c.manifest.summary["predicted_exponent"] = r.predicted;
  for (const auto& [k, v] : r.diagnostics) c.manifest.summary["diagnostics"][k] = v;
  return o;
}

Outcome run_freq_block(Context& c) {
  const auto range = io::int_list(c.cfg, "range");
  return construction_outcome(c, frequency_block_test(io::build_params(c.cfg["params"]), range));
}

Outcome run_rescaled_bump(Context& c) {
  const auto range = io::int_list(c.cfg, "range");
  RescaledBumpOptions opt;
  opt.n = io::get_as<std::size_t>(c.cfg, "n");
  opt.base_width = io::number(c.cfg["base_width"], "base_width");
  return construction_outcome(c, rescaled_bump_test(io::build_params(c.cfg["params"]), range, opt));
}

Outcome run_shifted_bump(Context& c) {
  const auto range = io::int_list(c.cfg, "range");
  ShiftedBumpOptions opt;
  opt.points_per_unit = io::get_as<std::size_t>(c.cfg, "points_per_unit");
  opt.bump_width = io::number(c.cfg["bump_width"], "bump_width");
  return construction_outcome(c, shifted_bump_test(io::build_params(c.cfg["params"]), range, opt));
}

Outcome run_dirichlet(Context& c) {
  const auto Ns = io::int_list(c.cfg, "N");
  Outcome o{table({"eta", "N", "norm", "predicted_exponent", "fitted_exponent", "r2", "power_law"})};
  for (double eta : io::number_list(c.cfg, "eta")) {
    const auto r = dirichlet_norm_test(eta, Ns);
    for (const auto& [N, v] : r.values)
      o.table.add_row({c.run_id, eta, std::int64_t{N}, v, r.predicted, r.fit.exponent, r.fit.r2, std::int64_t{r.power_law}});
  }
  return o;
}

Outcome run_gamma_young(Context& c) {
  const Grid grid = io::build_grid(c.cfg["grid"]);
  const double s = io::number(c.cfg["s"], "s"), q = io::number(c.cfg["q"], "q");
  const double r = io::number(c.cfg["r"], "r"), eta = io::number(c.cfg["eta"], "eta");
  const auto count = io::get_as<std::size_t>(c.cfg, "count");
  const int band = io::get_as<int>(c.cfg, "bandwidth");
  const auto kernel = bessel_kernel(grid, s);
  std::vector<YoungCheck> checks(count);
  parallel_for(count, c.workers, [&](std::size_t i) {
    rng::Stream st(rng::derive_stream(c.seed, i));
    checks[i] = gamma_young_check(kernel, acceptance::detail::random_band_field(grid, band, st, true), q, r, eta);
  });
  double lo = INFINITY, hi = 0.0;
  for (const auto& ch : checks) {
    lo = std::min(lo, ch.ratio);
    hi = std::max(hi, ch.ratio);
  }
  Outcome o{table({"index", "lhs", "rhs", "ratio", "ratio_spread"})};
  for (std::size_t i = 0; i < count; ++i)
    o.table.add_row({c.run_id, static_cast<std::int64_t>(i), checks[i].lhs, checks[i].rhs, checks[i].ratio, hi / lo});
  c.manifest.summary["ratio_min"] = lo;
  c.manifest.summary["ratio_max"] = hi;
  return o;
}

Outcome run_mg_sobolev(Context& c) {
  const Grid grid = io::build_grid(c.cfg["grid"]);
  const double s = io::number(c.cfg["s"], "s"), q = io::number(c.cfg["q"], "q"), eta = io::number(c.cfg["eta"], "eta");
  const double w0 = io::number(c.cfg["width"], "width") * grid.length();
  const ParamTuple t{grid.dim(), s, q, eta, infinite_exponent, std::nullopt};
  c.manifest.summary["condition_holds"] = multiplication_sobolev_condition(t);
  Outcome o{table({"m", "gamma_norm", "g_eta_norm", "ratio"})};
  std::vector<double> ratios;
  for (int m : io::int_list(c.cfg, "m")) {
    const double w = w0 * std::exp2(-m);
    require<ResourceError>(w >= 8.0 * grid.spacing(), "bump narrower than 8 cells; refine the grid");
    const double center = 0.5 * grid.length();
    const auto g = SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - center) * (x[a] - center);
      return bump_profile(std::sqrt(r2), w);
    });
    const double lhs = mg_sobolev_gamma_norm(g, s, q);
    const double rhs = lq_norm(g, eta);
    ratios.push_back(lhs / rhs);
    o.table.add_row({c.run_id, std::int64_t{m}, lhs, rhs, lhs / rhs});
  }
  if (!ratios.empty()) c.manifest.summary["ratio_spread"] = acceptance::detail::max_over_min(ratios);
  return o;
}

Outcome run_schatten_heat(Context& c) {
  const Grid grid = io::build_grid(c.cfg["grid"]);
  const auto one = SpectralField::constant(grid, 1.0);
  const double e = 0.25 * grid.dim();
  Outcome o{table({"kind", "t", "value", "scaled"})};
  for (double t : io::number_list(c.cfg, "t")) {
    const double v = schatten_heat_norm(one, t);
    o.table.add_row({c.run_id, std::string("schatten"), t, v, v * std::pow(t, e)});
  }
  std::vector<double> lt, lw;
  for (double t : io::number_list(c.cfg, "witness_t")) {
    const double v = heat_sharpness_witness(grid, t);
    o.table.add_row({c.run_id, std::string("witness"), t, v, v * std::pow(t, e)});
    lt.push_back(std::log2(t));
    lw.push_back(std::log2(v));
  }
  if (lt.size() >= 2) c.manifest.summary["witness_exponent"] = least_squares(lt, lw).slope;
  return o;
}

Noise build_noise(const Json& j, const Grid& grid) {
  const Json n = io::merge_config({{"kind", "matern"},
                                   {"alpha", 0.3},
                                   {"coloring", io::coloring_defaults()},
                                   {"system", io::system_defaults()},
                                   {"truncation", 16}},
                                  j);
  const auto kind = io::get_as<std::string>(n, "kind");
  if (kind == "matern") return noise::Matern{io::number(n["alpha"], "alpha")};
  if (kind == "diagonal") return noise::Diagonal{io::build_coloring(n["coloring"])};
  if (kind == "system")
    return noise::System{io::build_system(n["system"], grid), io::build_coloring(n["coloring"]), io::get_as<std::size_t>(n, "truncation")};
  throw ConfigError("unknown noise kind '" + kind + "'");
}

Outcome run_heat_sim(Context& c, const std::string& out_dir) {
  SpdeConfig sc;
  sc.grid = io::build_grid(c.cfg["grid"]);
  sc.noise = build_noise(c.cfg["noise"], sc.grid);
  if (auto g = io::build_multiplier(c.cfg["g"], sc.grid)) sc.g.push_back(std::move(*g));
  sc.horizon = io::number(c.cfg["T"], "T");
  sc.dt = io::number(c.cfg["dt"], "dt");
  const auto integ = io::get_as<std::string>(c.cfg, "integrator");
  if (integ == "exact_ou") sc.integrator = Integrator::ExactOu;
  else if (integ == "exp_euler") sc.integrator = Integrator::ExpEuler;
  else throw ConfigError("unknown integrator '" + integ + "'");
  if (!c.cfg["noise_off_after"].is_null()) sc.noise_off_after = io::number(c.cfg["noise_off_after"], "noise_off_after");
  validate(sc);
  const double s = io::number(c.cfg["s"], "s");
  const auto M = io::get_as<std::size_t>(c.cfg, "samples");
  const auto mom = mc_moments(sc, s, M, c.seed, c.workers);
  std::vector<double> closed(mom.times.size(), nan_v);
  const bool has_closed = is_diagonal(sc.noise) && sc.g.empty() && !sc.noise_off_after;
  if (has_closed) closed = second_moment_closed_form(sc, mom.times, s);
  Outcome o{table({"t", "mean_sq_norm", "closed_form"})};
  for (std::size_t m = 0; m < mom.times.size(); ++m) o.table.add_row({c.run_id, mom.times[m], mom.mean_path[m], closed[m]});
  auto& sm = c.manifest.summary;
  sm["final_moment"] = {{"mean", mom.final_moment.mean}, {"stderr", mom.final_moment.stderr_of_mean}};
  sm["spacetime_moment"] = {{"mean", mom.spacetime_moment.mean}, {"stderr", mom.spacetime_moment.stderr_of_mean}};
  if (has_closed) {
    sm["final_closed_form"] = closed.back();
    sm["spacetime_closed_form"] = time_integrated_second_moment(sc, s);
  }
  const auto dump = io::get_as<std::string>(c.cfg, "dump");
  if (!dump.empty()) {
    const std::string path = (fs::path(out_dir) / dump).string();
    write_trajectory(path, simulate(sc, c.seed, 0));
    c.manifest.artifacts.push_back({path, io::fnv1a64(io::read_text(path))});
  }
  return o;
}

Outcome run_scaling(Context& c) {
  ScalingOptions opt;
  opt.n = io::get_as<std::size_t>(c.cfg, "n");
  opt.level_max = io::get_as<int>(c.cfg, "level_max");
  opt.beta = io::number(c.cfg["beta"], "beta");
  opt.bump_width = io::number(c.cfg["bump_width"], "bump_width");
  const auto ms = io::int_list(c.cfg, "m");
  const auto r = scaling_diagnostic(io::number(c.cfg["alpha"], "alpha"), io::build_params(c.cfg["params"]), ms, opt);
  Outcome o{table({"m", "lhs", "rhs", "ratio", "predicted_exponent", "fitted_exponent", "r2", "conclusive"})};
  for (const auto& rec : r.records)
    o.table.add_row({c.run_id, std::int64_t{rec.m}, rec.lhs, rec.rhs, rec.ratio, r.predicted, r.fit.exponent, r.fit.r2,
                     std::int64_t{r.fit.conclusive}});
  c.manifest.summary["fit"] = fit_json(r.fit);
  return o;
}

Outcome run_haar_divergence(Context& c) {
  const int d = io::get_as<int>(c.cfg, "dim");
  const int J = io::get_as<int>(c.cfg, "levels");
  const auto sys = OrthonormalSystem::haar(d, -J, J, std::exp2(J));
  const Coloring mu = Coloring::haar(io::number(c.cfg["alpha"], "alpha"), io::number(c.cfg["beta"], "beta"));
  Outcome o{table({"zeta", "J", "level_sum", "partial_sum"})};
  for (double zeta : io::number_list(c.cfg, "zeta")) {
    const auto levels = haar_level_power_sums(mu, sys, zeta);
    double total = 0.0;
    std::vector<double> Js, S;
    for (int k = 0; k <= J; ++k) {
      double add = 0.0;
      for (const auto& [j, v] : levels)
        if (std::abs(j) == k) add += v;
      total += add;
      o.table.add_row({c.run_id, zeta, std::int64_t{k}, add, total});
      Js.push_back(k);
      S.push_back(total);
    }
    std::vector<double> logS;
    for (double x : S) logS.push_back(std::log2(x));
    c.manifest.summary["zeta_" + acceptance::detail::fmt(zeta)] = {{"affine_r2", least_squares(Js, S).r2},
                                                                    {"log_affine_r2", least_squares(Js, logS).r2}};
  }
  return o;
}

Outcome run_selftest(Context& c) {
  acceptance::Options opt;
  opt.seed = c.seed;
  opt.workers = c.workers;
  opt.alt_workers = io::get_as<unsigned>(c.cfg, "alt_workers");
  int failed = 0;
  const auto verdicts = acceptance::run_suite(opt, io::get_as<bool>(c.cfg, "reproducibility"), [&](const acceptance::Verdict& v) {
    std::printf("[%s] criterion %2d %-24s %s\n", v.passed ? "PASS" : "FAIL", v.id, v.name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    if (!v.passed) ++failed;
  });
  for (const auto& v : verdicts) {
    c.manifest.verdicts.push_back({{"criterion", v.id}, {"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
    c.manifest.timings.emplace_back("criterion_" + std::to_string(v.id), v.seconds);
  }
  Outcome o{acceptance::verdict_table(verdicts, c.run_id)};
  if (failed > 0) o.exit_code = kPartial;
  return o;
}

std::vector<Command> commands(std::string* out_dir) {
  auto J = [](const char* text) { return Json::parse(text); };
  return {
      {"series-norm", "gamma-radonifying norm of a truncated Gaussian series",
       Json{{"seed", 1},
            {"grid", io::grid_defaults()},
            {"system", io::system_defaults()},
            {"coloring", io::coloring_defaults()},
            {"g", io::multiplier_defaults()},
            {"truncation", 64},
            {"s", 0.5},
            {"q", 2.0},
            {"samples", 200},
            {"oversample", 2}},
       run_series_norm},
      {"sweep", "exponent fits over a parameter grid for one construction",
       J(R"({"seed":1,"construction":"freq_block","tuples":[],
             "product":{"d":[1],"s":[0.2,0.5,0.9],"q":[4.0],"eta":[2.0],"zeta":[4.0]},
             "ranges":{"freq_block":[3,4,5,6,7],"rescaled_bump":[0,1,2,3,4,5],"shifted_bump":[4,8,16,32],"scaling":[0,1,2,3,4]}})"),
       run_sweep},
      {"freq-block", "frequency-block construction",
       J(R"({"seed":1,"params":{"d":1,"s":0.9,"q":4.0,"eta":2.0,"zeta":4.0},"range":[3,4,5,6,7]})"), run_freq_block},
      {"rescaled-bump", "rescaled-bump construction",
       J(R"({"seed":1,"params":{"d":1,"s":0.35,"q":4.0,"eta":2.5,"zeta":3.3333333333333335},"range":[0,1,2,3,4,5],"n":0,"base_width":0.25})"),
       run_rescaled_bump},
      {"shifted-bump", "shifted-bump construction",
       J(R"({"seed":1,"params":{"d":1,"s":0.5,"q":2.0,"eta":4.0,"zeta":4.0},"range":[4,8,16,32],"points_per_unit":32,"bump_width":0.5})"),
       run_shifted_bump},
      {"dirichlet", "L^eta norms of the Dirichlet kernel", J(R"({"seed":1,"eta":[2.0,3.0,4.0],"N":[8,16,32,64,128,256]})"), run_dirichlet},
      {"gamma-young", "convolution gamma norm against the weak Young bound",
       J(R"({"seed":1,"grid":{"dim":1,"n":1024,"length":1.0},"s":0.75,"q":8.0,"r":4.0,"eta":2.6666666666666665,"count":100,"bandwidth":16})"),
       run_gamma_young},
      {"mg-sobolev", "gamma norm of M_g composed with the Bessel potential under dilation",
       J(R"({"seed":1,"grid":{"dim":1,"n":4096,"length":1.0},"s":0.75,"q":4.0,"eta":2.6666666666666665,"m":[0,1,2,3,4,5],"width":0.5})"),
       run_mg_sobolev},
      {"schatten-heat", "Hilbert-Schmidt norm of the heat semigroup",
       J(R"({"seed":1,"grid":{"dim":1,"n":1024,"length":1.0},
             "t":[0.001,0.0017782794100389228,0.0031622776601683794,0.005623413251903491,0.01,0.01778279410038923,0.03162277660168379,0.05623413251903491,0.1],
             "witness_t":[6.103515625e-05,0.0001220703125,0.000244140625,0.00048828125,0.0009765625,0.001953125,0.00390625,0.0078125,0.015625]})"),
       run_schatten_heat},
      {"heat-sim", "stochastic heat equation moments",
       Json{{"seed", 1},
            {"grid", Json{{"dim", 1}, {"n", 64}, {"length", 1.0}}},
            {"noise", Json{{"kind", "matern"}, {"alpha", 0.3}, {"coloring", io::coloring_defaults()}, {"system", io::system_defaults()}, {"truncation", 16}}},
            {"g", io::multiplier_defaults()},
            {"T", 0.1},
            {"dt", 0.00625},
            {"integrator", "exact_ou"},
            {"noise_off_after", nullptr},
            {"samples", 100},
            {"s", 0.9},
            {"dump", ""}},
       [out_dir](Context& c) { return run_heat_sim(c, *out_dir); }},
      {"scaling", "scaling exponent of Haar-driven noise",
       J(R"({"seed":1,"alpha":0.5,"params":{"d":1,"s":0.16666666666666666,"q":2.0,"eta":1.5,"zeta":2.0},"m":[0,1,2,3,4],
             "n":8192,"level_max":12,"beta":1.0,"bump_width":0.5})"),
       run_scaling},
      {"haar-divergence", "Haar level power sums", J(R"({"seed":1,"dim":1,"alpha":0.5,"beta":2.0,"levels":12,"zeta":[2.0,1.5,3.0]})"),
       run_haar_divergence},
      {"selftest", "acceptance criteria 1-12", J(R"({"seed":20240611,"alt_workers":3,"reproducibility":true})"), run_selftest},
  };
}

void emit_error(const char* kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int workers = 0;
  std::vector<std::string> overrides;
};

int execute(const Command& cmd, const Flags& f, std::string& out_dir) {
  Json cfg = cmd.defaults;
  if (!f.config.empty()) cfg = io::merge_config(cfg, io::load_config_file(f.config));
  for (const auto& o : f.overrides) io::apply_override(cfg, o);
  if (f.seed) cfg["seed"] = *f.seed;
  if (!cfg["seed"].is_number_integer() || cfg["seed"].get<std::int64_t>() < 0) throw ConfigError("'seed' must be a non-negative integer");
  out_dir = f.out;

  Context c;
  c.cfg = cfg;
  c.seed = cfg["seed"].get<std::uint64_t>();
  c.workers = resolve_workers(f.workers);
  const std::uint64_t h = io::config_hash(cfg);
  c.run_id = io::make_run_id(h, c.seed);
  c.manifest.command = cmd.name;
  c.manifest.run_id = c.run_id;
  c.manifest.seed = c.seed;
  c.manifest.config_hash = h;
  c.manifest.config = cfg;
  c.manifest.workers = static_cast<int>(c.workers);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  io::Stopwatch sw;
  Outcome o = cmd.run(c);
  c.manifest.timings.emplace_back("total", sw.seconds());
  const std::string csv_path = (fs::path(out_dir) / (cmd.name + "-" + c.run_id + ".csv")).string();
  const std::string text = io::to_csv_string(o.table);
  io::write_text(csv_path, text);
  c.manifest.artifacts.insert(c.manifest.artifacts.begin(), {csv_path, io::fnv1a64(text)});
  c.manifest.exit_code = o.exit_code;
  const std::string manifest_path = (fs::path(out_dir) / io::manifest_filename(c.run_id)).string();
  io::write_manifest(c.manifest, manifest_path);
  std::printf("%s\n%s\n", csv_path.c_str(), manifest_path.c_str());
  return o.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  std::string out_dir;
  const auto cmds = commands(&out_dir);
  CLI::App app{"Spectral laboratory for gamma-radonifying norms and Gaussian series on the torus"};
  app.set_version_flag("--version", GAMMANOISE_VERSION);
  app.require_subcommand(1);
  Flags flags;
  std::string seed_text;
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", flags.config, "JSON configuration file");
    sub->add_option("--seed", seed_text, "master seed (unsigned 64-bit)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--workers", flags.workers, "worker threads (0: GAMMANOISE_WORKERS or 1)");
    sub->add_option("--override", flags.overrides, "key.path=value, value parsed as JSON")->take_all();
    by_app[sub] = &cmd;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return kConfig;
  }
  const Command* cmd = nullptr;
  for (auto* sub : app.get_subcommands()) cmd = by_app.at(sub);
  try {
    if (!seed_text.empty()) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(seed_text, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != seed_text.size() || seed_text.front() == '-') throw ConfigError("--seed must be an unsigned 64-bit integer");
      flags.seed = v;
    }
    return execute(*cmd, flags, out_dir);
  } catch (const Error& e) {
    emit_error(e.kind(), e.what());
    const bool usage = dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
                       dynamic_cast<const DimensionError*>(&e);
    return usage ? kConfig : kRuntime;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return kRuntime;
  }
}
