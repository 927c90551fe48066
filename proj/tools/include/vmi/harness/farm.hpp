#pragma once

// Trajectory farm: runs task(0..count-1) on `workers` threads.  Results are
// stored by index, so the output never depends on scheduling.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace vmi::harness {

template <class Task>
auto farm(std::uint64_t count, unsigned workers, Task&& task)
    -> std::vector<std::invoke_result_t<Task&, std::uint64_t>> {
  using Result = std::invoke_result_t<Task&, std::uint64_t>;
  std::vector<Result> results(count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        results[k] = task(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace vmi::harness
