#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace orthospec::detail {

// Worker count: ORTHOSPEC_THREADS if set, else the hardware concurrency.
inline int thread_count(int requested = 0) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("ORTHOSPEC_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n < 1 ? 1 : n;
}

// Runs fn(i) for i in [0, count); the first exception is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t count, F&& fn, int threads = 0) {
    const int workers = std::min<int>(thread_count(threads), static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!error) error = std::current_exception();
                    next.store(count);
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace orthospec::detail
