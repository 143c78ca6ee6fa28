#pragma once

#include <cstdint>
#include <exception>

#include "bootperc/engine.hpp"

namespace bootperc::detail {

// body(i) for i in [0, n). The parallel path distributes iterations over
// OpenMP threads; the first exception thrown by any iteration is rethrown
// on the calling thread after the loop.
template <class Body>
void parallel_for(std::int64_t n, Exec exec, Body&& body, int chunk = 1) {
    if (exec == Exec::Serial) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, chunk)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(bootperc_parallel_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace bootperc::detail
