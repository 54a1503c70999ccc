#ifndef PAULTRAP_PARALLEL_HPP
#define PAULTRAP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace paultrap {

// Worker cap: min(hardware_concurrency, PAULTRAP_THREADS) with a floor of 1.
std::size_t worker_count();

// Runs fn over [0, n) split into contiguous chunks, one per worker.
// fn(begin, end) must write only to disjoint output ranges.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace paultrap

#endif
