#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace conespec {

/// Worker count: CONESPEC_THREADS if set, else hardware concurrency, clamped to [1, 16].
inline int thread_count() {
    if (const char* env = std::getenv("CONESPEC_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 16);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<unsigned>(hc == 0 ? 1 : hc, 16));
}

// Runs fn(0..count-1) across a fixed pool; tasks are independent and write to
// disjoint slots, so the result does not depend on the schedule.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), count > 0 ? count : 1);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace conespec
