#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace dico {

namespace detail {
inline std::atomic<unsigned>& jobs_setting() {
  static std::atomic<unsigned> jobs{1};
  return jobs;
}
}  // namespace detail

/// Worker count used by exhaustive checks. 0 selects hardware concurrency.
inline void set_default_jobs(unsigned n) {
  detail::jobs_setting() = n == 0 ? std::max(1u, std::thread::hardware_concurrency()) : n;
}
inline unsigned default_jobs() { return detail::jobs_setting(); }

/// Runs fn(i) for i in [0, n), stopping early once some fn returns true.
/// Returns the smallest i whose fn returned true, so the result does not depend on
/// scheduling. Indices beyond a known hit are skipped.
template <class Fn>
std::optional<std::size_t> parallel_find_first(std::size_t n, Fn&& fn, unsigned jobs = default_jobs()) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i)
      if (fn(i)) return i;
    return std::nullopt;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{n};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n && i < best.load(); i = next++) {
          if (fn(i)) {
            auto cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        best = 0;
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  if (best.load() == n) return std::nullopt;
  return best.load();
}

}  // namespace dico
