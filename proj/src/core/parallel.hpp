#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace apg {

/// Runs fn(index) for index in [0, count) on up to max_workers threads.
/// Work items are independent; callers write results into index-addressed
/// slots so completion order never affects the outcome. The first exception
/// wins and is rethrown after all workers join.
template <typename Fn>
void parallel_for(size_t count, int max_workers, Fn&& fn) {
    if (count == 0) return;
    size_t workers = static_cast<size_t>(max_workers > 0 ? max_workers : 1);
    workers = std::min({workers, count, static_cast<size_t>(std::max(
                                            1u, std::thread::hardware_concurrency()))});

    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace apg
