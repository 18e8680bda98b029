#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace morseflow {

/// Resolves a requested worker count; 0 or less means one per hardware thread.
inline int resolve_threads(int requested)
{
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls body(i) for i in [0, n) on up to `threads` workers.
///
/// Callers write results into slot i of a preallocated container, so the
/// outcome does not depend on scheduling. If bodies throw, the exception from
/// the smallest index is rethrown.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body)
{
    const int workers = std::min<int>(resolve_threads(threads), static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(run);
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace morseflow
