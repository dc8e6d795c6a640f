#pragma once

#include <cstddef>
#include <functional>

namespace layoutjudge {

/// Worker count: LAYOUTJUDGE_THREADS if set to a positive integer, otherwise
/// the number of logical cores.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Results must be written to per-index slots; iteration order is unspecified.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace layoutjudge
