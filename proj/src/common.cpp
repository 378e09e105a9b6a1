#include "slk/common.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace slk {

namespace {
std::atomic<int> g_threads{0};  // 0 = auto
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
    int n = g_threads.load();
    if (n == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        n = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return n;
}

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (begin >= end) return;
    const std::size_t count = end - begin;
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
    if (nthreads <= 1) {
        fn(begin, end);
        return;
    }
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = begin + t * chunk;
        if (lo >= end) break;
        const std::size_t hi = std::min(end, lo + chunk);
        workers.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace slk
