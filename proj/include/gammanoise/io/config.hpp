#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "../error.hpp"
#include "csv.hpp"

namespace gammanoise::io {

using Json = nlohmann::json;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Objects dump with sorted keys, so this is a canonical form.
inline std::string canonical_dump(const Json& j) { return j.dump(); }

/// Hash of the resolved configuration; `workers` and `out` do not affect results.
inline std::uint64_t config_hash(const Json& config) {
  Json copy = config;
  if (copy.is_object()) {
    copy.erase("workers");
    copy.erase("out");
  }
  return fnv1a64(canonical_dump(copy));
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline Json load_config_file(const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  Json j = parse_json_text(text, path);
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");
  return j;
}

namespace detail {

inline bool is_infinity_literal(const Json& v) {
  return v.is_string() && (v == "inf" || v == "infinity" || v == "Infinity");
}

inline bool compatible(const Json& def, const Json& v) {
  if (def.is_null()) return true;
  if (def.is_number()) return v.is_number() || is_infinity_literal(v);
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return false;
}

inline void merge_into(Json& base, const Json& user, const std::string& path) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown configuration key '" + key + "'");
    Json& slot = base[it.key()];
    if (!compatible(slot, it.value())) throw ConfigError("configuration key '" + key + "' has the wrong type");
    if (slot.is_object() && !slot.empty()) {
      merge_into(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

} // namespace detail

/// Overlay `user` on the defaults. Keys absent from the defaults are rejected;
/// an empty object or null default accepts anything.
inline Json merge_config(const Json& defaults, const Json& user) {
  Json out = defaults;
  if (!user.is_object()) throw ConfigError("configuration must be a JSON object");
  detail::merge_into(out, user, "");
  return out;
}

/// `a.b.c=value`; the value is parsed as JSON, falling back to a plain string.
inline void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json user = Json::object();
  Json* cur = &user;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty key segment in override " + assignment);
    if (dot == std::string::npos) {
      (*cur)[part] = value;
      break;
    }
    cur = &(*cur)[part];
    start = dot + 1;
  }
  config = merge_config(config, user);
}

/// Numeric field reader accepting the "inf" literal.
inline double number(const Json& v, const std::string& name) {
  if (detail::is_infinity_literal(v)) return INFINITY;
  if (!v.is_number()) throw ConfigError("'" + name + "' must be a number");
  return v.get<double>();
}

} // namespace gammanoise::io
