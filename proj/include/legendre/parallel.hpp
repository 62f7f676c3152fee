#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace legendre::parallel {

namespace detail {
inline std::atomic<int>& workers_slot()
{
    static std::atomic<int> n{static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
    return n;
}
} // namespace detail

inline int workers() { return detail::workers_slot().load(); }
inline void set_workers(int n) { detail::workers_slot().store(std::max(1, n)); }

// fn(i) for i in [0, n) on the worker pool. Results must be written to
// per-index slots; the exception of the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& fn)
{
    const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers()), n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < w; ++t)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace legendre::parallel
