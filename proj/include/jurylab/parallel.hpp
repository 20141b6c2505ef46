#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace jurylab {

/// Worker count: explicit request, else JURYLAB_THREADS, else hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("JURYLAB_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1U : hw;
}

/// Runs fn(i) for i in [0, count). Tasks write to their own slot, so results do not
/// depend on the worker count. The first exception thrown by a task is rethrown.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 0) {
    unsigned workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace jurylab
