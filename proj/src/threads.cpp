#include "fusionkit/threads.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fusionkit {

int worker_count() {
    static int cached = [] {
        const char* env = std::getenv("FUSIONKIT_THREADS");
        if (env == nullptr) return 1;
        int n = std::atoi(env);
        return n < 1 ? 1 : n;
    }();
    return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace fusionkit
