#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace nbwalk::detail {

// Runs fn(i) for i in [0, n) over up to `workers` threads in contiguous
// blocks. fn must only write to state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = n * w / workers;
        std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
}

inline std::size_t default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace nbwalk::detail
