#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace convexity {

// Worker count: CONVEXITY_THREADS if set (0 = auto), otherwise hardware.
inline int worker_count() {
    if (const char* env = std::getenv("CONVEXITY_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static block partition of [0, count). Each worker sees a contiguous
// index range, so callers can keep per-worker accumulators and merge them
// in worker order for schedule-independent results.
template <typename Fn>
void parallel_blocks(long long count, const Fn& fn) {
    int workers = std::min<long long>(worker_count(), std::max(1LL, count));
    if (workers <= 1 || count <= 1) {
        fn(0, 0LL, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long long chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long long begin = w * chunk;
        long long end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace convexity
