#ifndef RIESZLAB_PARALLEL_HPP
#define RIESZLAB_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rieszlab {

// Worker count: RIESZ_LAB_THREADS when set, else min(hardware, 8).
inline int configured_worker_count() {
    if (const char* env = std::getenv("RIESZ_LAB_THREADS")) {
        int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(hw > 8 ? 8 : hw);
}

// Runs fn(index) for index in [0, count) on up to `workers` threads.
// Callers write results into pre-sized slots by index, so the output
// never depends on the schedule.
inline void parallel_for_index(std::size_t count, int workers,
                               const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) /
                        static_cast<std::size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = begin + chunk < count ? begin + chunk : count;
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rieszlab

#endif
