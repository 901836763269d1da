#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "../rng.hpp"
#include "config.hpp"

#ifndef GAMMANOISE_VERSION
#define GAMMANOISE_VERSION "0.0.0"
#endif

namespace gammanoise::io {

/// Run identifier: depends on the resolved configuration and the seed only.
inline std::string make_run_id(std::uint64_t cfg_hash, std::uint64_t seed) {
  return hex64(rng::mix64(cfg_hash ^ rng::mix64(seed)));
}

struct Artifact {
  std::string path;
  std::uint64_t content_hash = 0;
};

struct RunManifest {
  std::string command;
  std::string run_id;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  Json config;
  int workers = 1;
  std::vector<std::pair<std::string, double>> timings; // seconds
  std::vector<Artifact> artifacts;
  Json verdicts = Json::array();
  Json summary = Json::object();
  int exit_code = 0;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["run_id"] = run_id;
    j["seed"] = seed;
    j["config_hash"] = hex64(config_hash);
    j["config"] = config;
    j["workers"] = workers;
    j["version"] = GAMMANOISE_VERSION;
    Json t = Json::object();
    for (const auto& [k, v] : timings) t[k] = v;
    j["timings_s"] = t;
    Json a = Json::array();
    for (const auto& art : artifacts) a.push_back({{"path", art.path}, {"fnv1a64", hex64(art.content_hash)}});
    j["artifacts"] = a;
    j["verdicts"] = verdicts;
    j["summary"] = summary;
    j["exit_code"] = exit_code;
    return j;
  }
};

inline std::string manifest_filename(const std::string& run_id) { return "run-" + run_id + ".json"; }

inline void write_manifest(const RunManifest& m, const std::string& path) { write_text(path, m.to_json().dump(2) + "\n"); }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace gammanoise::io
