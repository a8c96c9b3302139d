// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace plenoray {

// Worker count: PLENORAY_THREADS overrides hardware concurrency.
int thread_count();

struct TileRect {
    int x0, y0, x1, y1;  // half-open
};

// Runs fn over 32x32 tiles of a w*h raster. Tiles are claimed from an atomic
// counter; each tile writes to a disjoint output region, so results are
// independent of the thread count and claim order.
void parallel_tiles(int width, int height, const std::function<void(const TileRect&)>& fn);

}  // namespace plenoray
