#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "error.hpp"

namespace gammanoise {

/// Worker count: explicit value if positive, else GAMMANOISE_WORKERS, else 1.
inline unsigned resolve_workers(int requested = 0) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("GAMMANOISE_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("GAMMANOISE_WORKERS is not a positive integer: ") + env);
  }
  return 1;
}

/// Run fn(i) for i in [0, count) on `workers` threads with a strided split.
/// Callers write results into slot i, so the reduction order stays fixed.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned w = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::exception_ptr first;
  std::mutex m;
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += w) fn(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!first) first = std::current_exception();
        }
      });
    }
  }
  if (first) std::rethrow_exception(first);
}

} // namespace gammanoise
