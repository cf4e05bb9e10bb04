#include "vmort/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace vmort {

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t n_workers = threads > 0 ? static_cast<std::size_t>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, n);
    if (n_workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

} // namespace vmort
