#ifndef CVEPR_PARALLEL_UTIL_HPP
#define CVEPR_PARALLEL_UTIL_HPP

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cvepr::detail {

// Worker count: hardware concurrency capped by CV_EPR_THREADS and the job count.
inline std::size_t thread_budget(std::size_t jobs) {
    std::size_t budget = std::thread::hardware_concurrency();
    if (budget == 0) budget = 1;
    if (const char* env = std::getenv("CV_EPR_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1 && static_cast<std::size_t>(requested) < budget)
            budget = static_cast<std::size_t>(requested);
    }
    return budget < jobs ? budget : (jobs == 0 ? 1 : jobs);
}

// Strided index partition; bodies write disjoint preallocated slots, so the
// result is independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = thread_budget(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    for (std::thread& t : pool) t.join();
}

}  // namespace cvepr::detail

#endif  // CVEPR_PARALLEL_UTIL_HPP
