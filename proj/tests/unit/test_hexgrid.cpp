// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/hexgrid.hpp"
#include "plenoray/rng.hpp"

#include <doctest.h>

using namespace plenoray;

TEST_CASE("microlens_type basics")
{
    CHECK(microlens_type({0, 0}) == 0);
    CHECK(microlens_type({1, 0}) == 1);
    CHECK(microlens_type({2, 0}) == 2);
    CHECK(microlens_type({0, 1}) == 2);  // Euclidean mod of -1
    CHECK(microlens_type({-4, 3}) == 2);
}

TEST_CASE("all six hexagonal neighbors have a different type")
{
    for (int i = -50; i <= 50; ++i) {
        for (int j = -50; j <= 50; ++j) {
            const int t = microlens_type({i, j});
            const HexIndex neighbors[6] = {{i + 1, j}, {i - 1, j},     {i, j + 1},
                                           {i, j - 1}, {i + 1, j - 1}, {i - 1, j + 1}};
            for (const HexIndex& nb : neighbors) REQUIRE(microlens_type(nb) != t);
        }
    }
}

TEST_CASE("nearest_lens_center: exact center and tie-break")
{
    HexGrid grid{0.25, Vec2(0.0, 0.0)};
    CHECK(nearest_lens_center(grid.center({3, -2}), grid) == HexIndex{3, -2});

    // Midpoint of (0,0) and (1,0): equal distances, smaller (j, i) wins.
    const Vec2 mid = 0.5 * (grid.center({0, 0}) + grid.center({1, 0}));
    CHECK(nearest_lens_center(mid, grid) == HexIndex{0, 0});
}

TEST_CASE("nearest_lens_center agrees with brute force over a 5x5 neighborhood")
{
    HexGrid grid{0.2173, Vec2(0.05, -0.033)};
    Pcg32 rng(99, 5);
    for (int trial = 0; trial < 100000; ++trial) {
        const Vec2 p(40.0 * (rng.next_double() - 0.5), 40.0 * (rng.next_double() - 0.5));
        const HexIndex fast = nearest_lens_center(p, grid);

        // Brute force around the rounded lattice coordinates.
        constexpr double kRow = 0.8660254037844386467637232;
        const Vec2 rel = p - grid.origin;
        const double jf = rel.y() / (grid.pitch * kRow);
        const double if_ = rel.x() / grid.pitch - 0.5 * jf;
        HexIndex best{0, 0};
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int dj = -2; dj <= 2; ++dj) {
            for (int di = -2; di <= 2; ++di) {
                const HexIndex cand{int(std::lround(if_)) + di, int(std::lround(jf)) + dj};
                const double d2 = (grid.center(cand) - p).squaredNorm();
                if (d2 < best_d2 ||
                    (d2 == best_d2 && std::tie(cand.j, cand.i) < std::tie(best.j, best.i))) {
                    best = cand;
                    best_d2 = d2;
                }
            }
        }
        REQUIRE(fast == best);
    }
}
