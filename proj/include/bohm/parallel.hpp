#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bohm {

/// Runs body(i) for i in [0, count) across n_threads workers (0 = hardware
/// concurrency). Work items must be independent; results keyed by index stay
/// deterministic regardless of scheduling.
inline void parallel_for(std::size_t count, int n_threads,
                         const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    unsigned workers = n_threads > 0 ? static_cast<unsigned>(n_threads)
                                     : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace bohm
