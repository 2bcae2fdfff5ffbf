#include "kakeya/parallel.hpp"

#include "kakeya/error.hpp"

#include <atomic>

namespace kakeya {

namespace {
std::atomic<int> g_workers{1};
}

void set_worker_count(int n) {
    if (n < 1) throw Error("worker count must be at least 1");
    g_workers.store(n);
}

int worker_count() { return g_workers.load(); }

} // namespace kakeya
