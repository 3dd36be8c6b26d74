#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace ultrafix {

/// How sample-heavy checks run. `serial` is the reference implementation;
/// `parallel` distributes indices over OpenMP threads. Both produce identical
/// reports because inputs are drawn up front and results merged by index.
enum class Execution { serial, parallel };

/// Calls body(i) for i in [0, n). An exception thrown for some index is
/// rethrown after the loop; when several indices throw, the lowest one wins,
/// so the outcome does not depend on scheduling.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
    if (exec == Execution::parallel) {
        const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < count; ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace ultrafix
