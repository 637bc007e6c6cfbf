#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ribbonlim {

// Worker count: hardware parallelism capped by RIBBONLIM_THREADS.
inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RIBBONLIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

// Run f(i) for i in [0, n). Results must land in preallocated slots indexed
// by i so the outcome is identical whatever the interleaving.
template <class F>
void parallel_for(int n, F&& f) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) f(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

} // namespace ribbonlim
