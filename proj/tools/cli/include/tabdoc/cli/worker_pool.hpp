#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace tabdoc::cli {

/// Runs task(i) for i in [0, n) on up to `workers` threads. Returns one
/// exception slot per task; a task failure never stops the others.
std::vector<std::exception_ptr> run_parallel(std::size_t n, int workers,
                                             const std::function<void(std::size_t)>& task);

}  // namespace tabdoc::cli
