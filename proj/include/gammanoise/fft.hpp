#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <tuple>

#include <fftw3.h>

#include "grid.hpp"

namespace gammanoise {

namespace detail {

// Plans are created once per (dim, n, sign) and never freed. FFTW_UNALIGNED
// lets one plan run on any buffer, so results do not depend on where a
// std::vector happened to land.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= n;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!scratch) throw ResourceError("fftw_malloc failed");
    int dims[3] = {static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
    fftw_plan plan = fftw_plan_dft(dim, dims, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) throw ResourceError("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

} // namespace detail

/// Unnormalized in-place DFT. sign = -1 is the forward transform.
inline void fft_inplace(const Grid& grid, std::span<std::complex<double>> data, int sign) {
  require<DimensionError>(data.size() == grid.size(), "fft buffer does not match grid");
  fftw_plan plan = detail::PlanCache::instance().get(grid.dim(), grid.n(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

} // namespace gammanoise
