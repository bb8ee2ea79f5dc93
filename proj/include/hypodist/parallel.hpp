#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypodist {

/// Worker count; 0 means std::thread::hardware_concurrency().
struct Parallelism {
    unsigned threads = 0;

    unsigned resolved() const noexcept {
        if (threads > 0)
            return threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Calls body(i) for every i in [0, n). Indices are handed out dynamically, so
/// body must only write to slots owned by i. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, Parallelism par, Body&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(par.resolved(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace hypodist
