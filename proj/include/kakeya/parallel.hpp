#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kakeya {

// Worker count used by the scan loops. Outputs never depend on it: work is
// split by index and results are reduced in index order afterwards.
void set_worker_count(int n);
int worker_count();

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = static_cast<std::size_t>(worker_count());
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t used = workers < n ? workers : n;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    pool.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += used) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace kakeya
