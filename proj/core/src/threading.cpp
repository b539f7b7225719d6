#include "ringrec/threading.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace ringrec {

namespace {
int g_threads = 0;  // 0 = not set yet, resolve lazily to hardware count
}

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }

int thread_count() { return g_threads == 0 ? hardware_threads() : g_threads; }

void parallel_for(int64_t n, int64_t grain, const std::function<void(int64_t, int64_t)>& fn) {
    if (n <= 0) return;
    if (grain < 1) grain = 1;
    int64_t n_chunks = (n + grain - 1) / grain;
    int workers = thread_count();
    if (workers <= 1 || n_chunks == 1) {
        for (int64_t c = 0; c < n_chunks; ++c) {
            int64_t b = c * grain;
            fn(b, std::min(b + grain, n));
        }
        return;
    }
    if (static_cast<int64_t>(workers) > n_chunks) workers = static_cast<int>(n_chunks);
    std::atomic<int64_t> next{0};
    auto run = [&]() {
        for (;;) {
            int64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= n_chunks) break;
            int64_t b = c * grain;
            fn(b, std::min(b + grain, n));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 0; i < workers - 1; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace ringrec
