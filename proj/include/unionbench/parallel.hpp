#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace unionbench {

// Runs body(0..n-1) across up to `jobs` threads. Iterations must be
// independent; the first exception thrown by any of them is rethrown on the
// calling thread after all workers finish.
inline void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& body) {
    if (n == 0)
        return;
    size_t workers = jobs > 1 ? std::min<size_t>(static_cast<size_t>(jobs), n) : 1;
    if (workers == 1) {
        for (size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto run = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back(run);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace unionbench
