// parallel.hpp: indexed parallel-for over independent work items, with a
// serial reference path. Results must be written by index so the outcome
// does not depend on scheduling.

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace cmat {

enum class Execution { Serial, Parallel };

/// Calls fn(i) for i in [0, n). Exceptions are captured per item and the
/// one with the lowest index is rethrown after all items finish.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline int max_threads() {
    return omp_get_max_threads();
}

} // namespace cmat
