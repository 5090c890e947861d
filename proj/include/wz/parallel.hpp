#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace wz {

/// Runs fn(0..n-1) on up to `jobs` worker threads. Callers write results
/// into preallocated per-index slots, so the outcome is independent of the
/// scheduling order.
template <class F>
void parallel_for(int n, int jobs, F&& fn) {
    if (jobs < 1) jobs = 1;
    if (jobs > n) jobs = n;
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(size_t(jobs));
    for (int t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            int i;
            while ((i = next.fetch_add(1)) < n) fn(i);
        });
    for (auto& w : workers) w.join();
}

inline int default_jobs() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

}  // namespace wz
