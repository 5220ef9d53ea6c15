#ifndef KHOVERTURE_PARALLEL_HPP
#define KHOVERTURE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace khoverture {

// Runs fn(k) for k in [0, count) on up to `jobs` threads. The first exception is rethrown.
template <class Fn>
void parallel_for(int jobs, std::size_t count, Fn&& fn) {
    std::size_t workers = static_cast<std::size_t>(std::max(jobs, 1));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!err) err = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace khoverture

#endif
