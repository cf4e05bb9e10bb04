#ifndef VMORT_PARALLEL_HPP
#define VMORT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace vmort {

// Runs fn(begin, end) over a partition of [0, n) on `threads` workers
// (0 = hardware concurrency). Each index is processed exactly once, so
// writing results into per-index slots keeps outputs independent of the
// partitioning.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace vmort

#endif
