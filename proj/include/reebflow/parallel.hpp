#pragma once

// Execution policy shared by the data-parallel kernels (sample sweeps,
// per-triangle quadrature, multi-start integrations). Each kernel fills a
// per-index result array and reduces it in a fixed order, so the serial
// and OpenMP paths produce bit-identical results; the serial path is the
// reference the tests compare against.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace reebflow {

enum class Exec { serial, parallel };

// Global default, settable once by the CLI (--serial).
Exec& default_exec();

// Exceptions thrown by the body are captured (first one wins) and rethrown
// after the loop; they must not unwind through an OpenMP region.
template <class F>
void parallel_for(Exec exec, std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
        std::exception_ptr error;
        std::mutex error_mutex;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#else
    (void)exec;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

// Deterministic pairwise summation; independent of thread count.
double pairwise_sum(std::span<const double> v);

// max over per-index values (order-independent anyway, kept for symmetry)
double max_of(std::span<const double> v);

}  // namespace reebflow
