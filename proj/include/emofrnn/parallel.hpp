#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace emofrnn {

/// Number of worker threads used by the batch operations. 0 selects
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail {
inline thread_local bool in_parallel_region = false;
}

/// Calls fn(i) for every i in [0, n) on the shared thread budget. Work items
/// are claimed dynamically; callers write results into pre-sized slots so the
/// output order never depends on scheduling. The first exception thrown by any
/// item is rethrown after all workers have joined. Nested calls run serially
/// on the calling worker.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const std::size_t workers = detail::in_parallel_region
        ? 1
        : std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        const bool outer = detail::in_parallel_region;
        detail::in_parallel_region = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n)
                break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(n, std::memory_order_relaxed);
            }
        }
        detail::in_parallel_region = outer;
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace emofrnn
