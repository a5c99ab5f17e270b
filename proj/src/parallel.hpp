#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace euler_plane::detail {

/// Worker count: EULER_PLANE_THREADS if set and positive, else the hardware concurrency.
inline int worker_threads() {
  if (const char* env = std::getenv("EULER_PLANE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

/// f(0), ..., f(count - 1) on worker threads. Results come back in index order;
/// if any call throws, the exception of the lowest failing index is rethrown, so
/// the outcome does not depend on scheduling.
template <typename R, typename F>
std::vector<R> parallel_map(int count, F f) {
  std::vector<std::optional<R>> out(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  const int workers = std::clamp(worker_threads(), 1, std::max(count, 1));
  auto work = [&](int first) {
    for (int k = first; k < count; k += workers) {
      try {
        out[static_cast<std::size_t>(k)].emplace(f(k));
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> result;
  result.reserve(out.size());
  for (std::optional<R>& r : out) result.push_back(std::move(*r));
  return result;
}

}  // namespace euler_plane::detail
