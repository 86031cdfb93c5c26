#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace semigeo {

/// Run fn(i) for i in [0, count) on up to `threads` workers using static
/// contiguous chunks. fn must only write to per-index state. If any call
/// throws, the exception from the lowest failing chunk is rethrown.
template <typename Fn>
void parallel_for(Eigen::Index count, int threads, Fn&& fn) {
  const Eigen::Index workers =
      std::clamp<Eigen::Index>(threads, 1, std::max<Eigen::Index>(count, 1));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const Eigen::Index chunk = (count + workers - 1) / workers;
    for (Eigen::Index w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const Eigen::Index end = std::min(count, (w + 1) * chunk);
          for (Eigen::Index i = w * chunk; i < end; ++i) fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace semigeo
