#ifndef FJLAB_PARALLEL_HPP
#define FJLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace fjlab {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
/// claimed from a shared atomic counter, so each index runs exactly once and
/// writers must target disjoint slots for determinism. The first exception
/// thrown by any worker is rethrown on the caller.
template <typename Fn>
void parallelFor(int count, int threads, Fn&& fn) {
    if (count <= 0) return;
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fjlab

#endif
