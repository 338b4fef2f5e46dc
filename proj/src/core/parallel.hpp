#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tsr {

// Worker count for row-blocked kernels. Capped by the TSREDUCE_THREADS
// environment variable when set.
inline std::size_t worker_count() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("TSREDUCE_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
    }
    return n;
}

// Runs fn(begin, end) over disjoint blocks of [0, total) on `workers`
// threads. Each output element is written by exactly one worker, so results
// do not depend on the worker count.
inline void parallel_blocks_n(std::size_t total, std::size_t workers,
                              const std::function<void(std::size_t, std::size_t)>& fn) {
    workers = std::min(workers, std::max<std::size_t>(total, 1));
    if (workers <= 1 || total < 2) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

inline void parallel_blocks(std::size_t total, const std::function<void(std::size_t, std::size_t)>& fn) {
    parallel_blocks_n(total, worker_count(), fn);
}

}  // namespace tsr
