#pragma once

#include <cstddef>
#include <functional>

namespace phasesep {

// Worker count for elementwise kernels. Reductions are always performed
// serially in index order, so results do not depend on this value.
void set_thread_count(int threads);
int thread_count();

/// Reads PHASESEP_THREADS if set; returns the value applied.
int configure_threads_from_env();

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body);

} // namespace phasesep
