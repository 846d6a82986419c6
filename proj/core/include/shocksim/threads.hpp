#pragma once

#include <cstddef>
#include <functional>

namespace shocksim {

/// Number of workers used by parallel_for: min(hardware, SHOCKSIM_THREADS).
std::size_t worker_count();

/// Static range split across workers. Results must be written to disjoint
/// locations; reductions stay serial so output is thread-count independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace shocksim
