#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace evlint {

enum class Execution { Serial, Parallel };

/// Calls body(i) for every i in [0, n). With Parallel, iterations run on an
/// OpenMP team; the first exception thrown by any iteration is rethrown after
/// the loop. Each iteration must only write its own slot of shared output.
template <class Body> void forEachIndex(std::size_t n, Execution exec, Body&& body)
{
    if (exec == Execution::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace evlint
