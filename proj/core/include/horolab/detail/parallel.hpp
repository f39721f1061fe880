#pragma once

// Chunked parallel-for over an index range. Each index writes its own output
// slot, so results are assembled in input order and the outcome is identical
// for any thread count.

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace horolab::detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HOROLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

template <class Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n < 2 * threads) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace horolab::detail
