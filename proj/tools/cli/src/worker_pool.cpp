#include "tabdoc/cli/worker_pool.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace tabdoc::cli {

std::vector<std::exception_ptr> run_parallel(std::size_t n, int workers,
                                             const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    drain();
    return errors;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  return errors;
}

}  // namespace tabdoc::cli
