#include "stabilis/harness.hpp"

#include <omp.h>

#include <exception>
#include <limits>

namespace stabilis {

int parallel_threads() { return omp_get_max_threads(); }

void for_each_index_parallel(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first_error;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::int64_t>(n);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(stabilis_first_error)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first_error = std::current_exception();
        }
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stabilis
