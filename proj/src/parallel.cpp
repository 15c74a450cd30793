#include "phasesep/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace phasesep {

namespace {
int g_threads = 1;
constexpr std::ptrdiff_t kParallelThreshold = 4096;
} // namespace

void set_thread_count(int threads)
{
    g_threads = threads < 1 ? 1 : threads;
    omp_set_num_threads(g_threads);
}

int thread_count() { return g_threads; }

int configure_threads_from_env()
{
    if (const char* env = std::getenv("PHASESEP_THREADS")) {
        try {
            set_thread_count(std::stoi(env));
        } catch (const std::exception&) {
            set_thread_count(1);
        }
    }
    return g_threads;
}

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body)
{
    if (g_threads <= 1 || n < kParallelThreshold) {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            body(i);
        return;
    }
#pragma omp parallel for schedule(static) num_threads(g_threads)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        body(i);
}

} // namespace phasesep
