#ifndef STABLE_STREAMS_PARALLEL_HPP
#define STABLE_STREAMS_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stable_streams {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count) on `workers` threads. Tasks must be
// independent; callers get determinism by writing results into
// index-addressed slots. The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    int spawn = workers;
    if (static_cast<std::size_t>(spawn) > count) spawn = static_cast<int>(count);
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace stable_streams

#endif
