#pragma once

#include <optional>
#include <string>
#include <vector>

#include "../bumps.hpp"
#include "../coloring.hpp"
#include "../params.hpp"
#include "../spectral_field.hpp"
#include "../systems.hpp"
#include "config.hpp"

namespace gammanoise::io {

inline Json grid_defaults() { return {{"dim", 1}, {"n", 256}, {"length", 1.0}}; }

inline Json params_defaults() { return {{"d", 1}, {"s", 0.5}, {"q", 2.0}, {"eta", 2.0}, {"zeta", 2.0}, {"p", nullptr}}; }

inline Json system_defaults() {
  return {{"kind", "fourier"}, {"level_min", 0}, {"level_max", 4}, {"extent", 2}, {"bump_width", 0.5}};
}

inline Json coloring_defaults() {
  return {{"kind", "power_law"}, {"value", 1.0}, {"alpha", 1.0}, {"N", 3}, {"beta", 1.0}, {"values", Json::array()}, {"scale", 1.0}};
}

inline Json multiplier_defaults() { return {{"kind", "one"}, {"width", 0.5}, {"center", 0.5}, {"k", Json::array({1})}}; }

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("'") + key + "': " + e.what());
  }
}

inline std::vector<int> int_list(const Json& j, const char* key) { return get_as<std::vector<int>>(j, key); }

inline std::vector<double> number_list(const Json& j, const char* key) {
  const Json& a = j.at(key);
  if (!a.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : a) out.push_back(number(v, key));
  return out;
}

inline Grid build_grid(const Json& j) {
  const Json g = merge_config(grid_defaults(), j);
  return Grid(get_as<int>(g, "dim"), get_as<std::size_t>(g, "n"), number(g["length"], "length"));
}

inline ParamTuple build_params(const Json& j) {
  const Json p = merge_config(params_defaults(), j);
  ParamTuple t;
  t.d = get_as<int>(p, "d");
  t.s = number(p["s"], "s");
  t.q = number(p["q"], "q");
  t.eta = number(p["eta"], "eta");
  t.zeta = number(p["zeta"], "zeta");
  if (!p["p"].is_null()) t.p = number(p["p"], "p");
  return t;
}

inline Json params_to_json(const ParamTuple& t) {
  Json j = {{"d", t.d}, {"s", t.s}, {"q", t.q}, {"eta", t.eta}};
  j["zeta"] = is_infinite_exponent(t.zeta) ? Json("inf") : Json(t.zeta);
  j["p"] = t.p ? Json(*t.p) : Json(nullptr);
  return j;
}

inline OrthonormalSystem build_system(const Json& j, const Grid& grid) {
  const Json s = merge_config(system_defaults(), j);
  const auto kind = get_as<std::string>(s, "kind");
  if (kind == "fourier") return OrthonormalSystem::fourier(grid.dim(), grid.length());
  if (kind == "haar") return OrthonormalSystem::haar(grid.dim(), get_as<int>(s, "level_min"), get_as<int>(s, "level_max"), grid.length());
  if (kind == "synthetic_growth") return OrthonormalSystem::synthetic_growth(grid.dim());
  if (kind == "shifted_bump")
    return OrthonormalSystem::shifted_bump(grid.dim(), get_as<int>(s, "extent"), grid.length(), number(s["bump_width"], "bump_width"));
  throw ConfigError("unknown system kind '" + kind + "'");
}

inline Coloring build_coloring(const Json& j) {
  const Json c = merge_config(coloring_defaults(), j);
  const auto kind = get_as<std::string>(c, "kind");
  Coloring out = Coloring::constant(1.0);
  if (kind == "constant") out = Coloring::constant(number(c["value"], "value"));
  else if (kind == "power_law") out = Coloring::power_law(number(c["alpha"], "alpha"));
  else if (kind == "matern") out = Coloring::matern(number(c["alpha"], "alpha"));
  else if (kind == "block") out = Coloring::block(get_as<int>(c, "N"));
  else if (kind == "haar") out = Coloring::haar(number(c["alpha"], "alpha"), number(c["beta"], "beta"));
  else if (kind == "explicit") out = Coloring::explicit_values(number_list(c, "values"));
  else throw ConfigError("unknown coloring kind '" + kind + "'");
  return out.scaled(number(c["scale"], "scale"));
}

/// Multiplier g: "one" (empty), "bump" (radial bump of given width at center), "mode" (e^{2 pi i k.x/L}).
inline std::optional<SpectralField> build_multiplier(const Json& j, const Grid& grid) {
  const Json m = merge_config(multiplier_defaults(), j);
  const auto kind = get_as<std::string>(m, "kind");
  if (kind == "one") return std::nullopt;
  if (kind == "bump") {
    const double w = number(m["width"], "width") * grid.length();
    const double c = number(m["center"], "center") * grid.length();
    return SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - c) * (x[a] - c);
      return bump_profile(std::sqrt(r2), w);
    });
  }
  if (kind == "mode") {
    const auto k = int_list(m, "k");
    if (static_cast<int>(k.size()) != grid.dim()) throw ConfigError("multiplier mode needs one integer per axis");
    Lattice lk{0, 0, 0};
    for (int a = 0; a < grid.dim(); ++a) lk[a] = k[a];
    return SpectralField::mode(grid, lk);
  }
  throw ConfigError("unknown multiplier kind '" + kind + "'");
}

} // namespace gammanoise::io
