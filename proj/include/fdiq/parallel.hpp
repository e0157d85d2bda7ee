#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fdiq {

inline int resolve_workers(int requested)
{
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count). Work is handed out in fixed-size blocks;
/// callers write results into per-index slots so the outcome does not depend
/// on the worker count.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body&& body)
{
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), count);
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    constexpr std::size_t block = 256;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&] {
        try {
            for (;;) {
                const std::size_t start = next.fetch_add(block);
                if (start >= count) {
                    return;
                }
                const std::size_t stop = std::min(count, start + block);
                for (std::size_t i = start; i < stop; ++i) {
                    body(i);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next.store(count);
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(n_workers - 1);
    for (std::size_t w = 1; w < n_workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    pool.clear();

    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace fdiq
