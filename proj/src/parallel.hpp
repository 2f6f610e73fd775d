#pragma once

// Tiny fork-join helper for independent pricing/subproblem solves.

#include <atomic>
#include <thread>
#include <vector>

namespace tfacpp::detail {

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> ts;
    int spawn = std::min(threads, n);
    ts.reserve(spawn);
    for (int t = 0; t < spawn; ++t) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
}

}  // namespace tfacpp::detail
