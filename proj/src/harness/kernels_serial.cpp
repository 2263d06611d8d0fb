#include "stabilis/harness.hpp"

namespace stabilis {

// Reference driver: plain loop in index order.
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution ex) {
  if (ex == Execution::parallel) {
    for_each_index_parallel(n, body);
  } else {
    for_each_index_serial(n, body);
  }
}

}  // namespace stabilis
