#include "cbs/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace cbs {

void parallel_for(int count, const std::function<void(int)>& fn, bool enable) {
    if (!enable || count < 4) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(std::clamp(hw, 2u, 8u));
    workers = std::min(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace cbs
