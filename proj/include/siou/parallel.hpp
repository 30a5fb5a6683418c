#ifndef SIOU_PARALLEL_HPP_
#define SIOU_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace siou {

/// Worker count: SIOU_THREADS if set to a positive integer, else the
/// hardware concurrency.
unsigned worker_count();

/// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace siou

#endif  // SIOU_PARALLEL_HPP_
