#pragma once

#include <exception>
#include <mutex>

namespace hollowfield::detail {

// Runs body(i) for i in [0, count) under OpenMP and rethrows the first
// exception raised by any iteration once the loop has finished.
template <class Body>
void parallel_for(long long count, Body&& body, bool dynamic = true) {
  std::exception_ptr error;
  std::mutex guard;
  const auto run = [&](long long i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  };
  if (dynamic) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) run(i);
  } else {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) run(i);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace hollowfield::detail
