// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/parallel.hpp"

#include <algorithm>
#include <cstdlib>

namespace plenoray {

int thread_count()
{
    if (const char* env = std::getenv("PLENORAY_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_tiles(int width, int height, const std::function<void(const TileRect&)>& fn)
{
    constexpr int kTile = 32;
    const int tx = (width + kTile - 1) / kTile;
    const int ty = (height + kTile - 1) / kTile;
    const int total = tx * ty;

    const int workers = std::min(thread_count(), total);
    std::atomic<int> next{0};
    auto run = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1, std::memory_order_relaxed);
            if (idx >= total) return;
            const int bx = idx % tx;
            const int by = idx / tx;
            TileRect r;
            r.x0 = bx * kTile;
            r.y0 = by * kTile;
            r.x1 = std::min(width, r.x0 + kTile);
            r.y1 = std::min(height, r.y0 + kTile);
            fn(r);
        }
    };

    if (workers <= 1) {
        run();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int i = 1; i < workers; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace plenoray
