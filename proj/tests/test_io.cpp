#include <gtest/gtest.h>

#include <filesystem>

#include "gammanoise/io/builders.hpp"
#include "gammanoise/io/csv.hpp"
#include "gammanoise/io/manifest.hpp"
#include "gammanoise/rng.hpp"

using namespace gammanoise;
using namespace gammanoise::io;

TEST(Csv, DoublesRoundTripBitwise) {
  rng::Stream st(1);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(st.gaussian(), static_cast<int>(st.next() % 200) - 100);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_TRUE(std::isinf(parse_double("inf")));
  EXPECT_TRUE(std::isnan(parse_double("nan")));
  EXPECT_THROW(parse_double("1.5x"), IoError);
}

TEST(Csv, QuotingRoundTrips) {
  CsvTable t{{"run_id", "label", "value"}, {}};
  t.add_row({std::string("abc"), std::string("a,b"), 1.25});
  t.add_row({std::string("abc"), std::string("say \"hi\"\nthere"), std::int64_t{7}});
  const auto text = to_csv_string(t);
  EXPECT_EQ(text.substr(0, 21), "run_id,label,value\nab");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  const auto rows = parse_csv(text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "a,b");
  EXPECT_EQ(rows[2][1], "say \"hi\"\nthere");
  EXPECT_EQ(rows[2][2], "7");
  EXPECT_THROW(t.add_row({1.0}), ContractError);
}

TEST(Csv, FileRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "gammanoise_io_test.csv").string();
  CsvTable t{{"run_id", "x"}, {}};
  t.add_row({std::string("r"), 0.1});
  write_csv(t, path);
  EXPECT_EQ(read_text(path), "run_id,x\nr,0.10000000000000001\n");
  EXPECT_EQ(read_csv(path)[1][1], "0.10000000000000001");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text(path), IoError);
}

TEST(Config, MergeRejectsUnknownKeys) {
  const Json defaults = {{"grid", grid_defaults()}, {"samples", 10}};
  try {
    merge_config(defaults, Json{{"grid", {{"size", 3}}}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.size"), std::string::npos);
  }
  EXPECT_THROW(merge_config(defaults, Json{{"samples", "many"}}), ConfigError);
  const auto m = merge_config(defaults, Json{{"grid", {{"n", 64}}}});
  EXPECT_EQ(m["grid"]["n"], 64);
  EXPECT_EQ(m["grid"]["dim"], 1);
}

TEST(Config, OverridesParseValues) {
  Json cfg = {{"params", params_defaults()}, {"label", "x"}};
  apply_override(cfg, "params.s=0.3");
  apply_override(cfg, "params.zeta=inf");
  apply_override(cfg, "label=hello");
  EXPECT_EQ(cfg["params"]["s"], 0.3);
  EXPECT_EQ(cfg["label"], "hello");
  EXPECT_TRUE(std::isinf(build_params(cfg["params"]).zeta));
  EXPECT_THROW(apply_override(cfg, "params.r=1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "novalue"), ConfigError);
}

TEST(Config, HashIgnoresOrderWorkersAndOut) {
  const Json a = Json::parse(R"({"b": 1, "a": {"y": 2, "x": 3}})");
  const Json b = Json::parse(R"({"a": {"x": 3, "y": 2}, "b": 1, "workers": 8, "out": "elsewhere"})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_NE(config_hash(a), config_hash(Json::parse(R"({"b": 2, "a": {"y": 2, "x": 3}})")));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Manifest, RunIdDerivation) {
  const auto id = make_run_id(0x1234, 5);
  EXPECT_EQ(id.size(), 16u);
  EXPECT_EQ(id, hex64(rng::mix64(0x1234 ^ rng::mix64(5))));
  EXPECT_NE(id, make_run_id(0x1234, 6));
  EXPECT_EQ(manifest_filename(id), "run-" + id + ".json");
  RunManifest m;
  m.command = "dirichlet";
  m.run_id = id;
  m.artifacts.push_back({"x.csv", 42});
  const auto j = m.to_json();
  EXPECT_EQ(j["command"], "dirichlet");
  EXPECT_EQ(j["run_id"], id);
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j["artifacts"].size(), 1u);
}

TEST(Builders, DefaultsAndErrors) {
  const Grid g = build_grid(Json{{"dim", 2}, {"n", 32}});
  EXPECT_EQ(g.dim(), 2);
  EXPECT_THROW(build_grid(Json{{"n", 48}}), ParameterError);
  EXPECT_EQ(build_system(Json{{"kind", "haar"}, {"level_max", 2}}, Grid(1, 64)).name(), "haar");
  EXPECT_THROW(build_system(Json{{"kind", "wavelet"}}, g), ConfigError);
  EXPECT_NEAR(build_coloring(Json{{"kind", "power_law"}, {"alpha", 0.5}, {"scale", 2.0}})(OrthonormalSystem::fourier(1).index(4)), 1.0, 1e-15);
  EXPECT_THROW(build_coloring(Json{{"kind", "nope"}}), ConfigError);
  EXPECT_FALSE(build_multiplier(Json::object(), g).has_value());
  EXPECT_THROW(build_multiplier(Json{{"kind", "mode"}, {"k", {1}}}, g), ConfigError);
  const auto bump = build_multiplier(Json{{"kind", "bump"}}, g);
  ASSERT_TRUE(bump.has_value());
  EXPECT_GT(bump->squared_l2_norm(), 0.0);
  EXPECT_EQ(params_to_json(build_params(Json{{"zeta", "inf"}}))["zeta"], "inf");
}
