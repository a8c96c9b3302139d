// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/geometry.hpp"

#include <cstdint>
#include <functional>
#include <tuple>

namespace plenoray {

/// Integer coordinates in the hexagonal lens lattice.
struct HexIndex {
    int i = 0;
    int j = 0;

    friend bool operator==(const HexIndex&, const HexIndex&) = default;
    friend auto operator<=>(const HexIndex& a, const HexIndex& b)
    {
        return std::tie(a.i, a.j) <=> std::tie(b.i, b.j);
    }
};

/// Lens type t = (i - j) mod 3, Euclidean so negative indices are well-defined.
inline int microlens_type(HexIndex idx)
{
    const int m = (idx.i - idx.j) % 3;
    return m < 0 ? m + 3 : m;
}

/// Hexagonal lattice with basis e1 = (p, 0), e2 = (p/2, p*sqrt(3)/2) and a
/// configurable origin offset [mm].
struct HexGrid {
    double pitch = 1.0;
    Vec2 origin = Vec2::Zero();

    Vec2 center(HexIndex idx) const
    {
        constexpr double kRow = 0.8660254037844386467637232;  // sqrt(3)/2
        return origin + Vec2(pitch * (idx.i + 0.5 * idx.j), pitch * kRow * idx.j);
    }
};

// Lattice index whose center is nearest to a point on the lattice plane.
// Ties are broken toward smaller (j, then i); the 3x3 candidate scan keeps
// the tie-break explicit. Candidates are visited in (j, i) order so a plain
// strict < realizes it.
inline HexIndex nearest_lens_center(const Vec2& point, const HexGrid& grid)
{
    constexpr double kRow = 0.8660254037844386467637232;
    const Vec2 rel = point - grid.origin;
    const double jf = rel.y() / (grid.pitch * kRow);
    const double if_ = rel.x() / grid.pitch - 0.5 * jf;
    const int i0 = static_cast<int>(std::lround(if_));
    const int j0 = static_cast<int>(std::lround(jf));

    const Vec2 base = grid.center({i0, j0});
    const double p = grid.pitch;
    HexIndex best{i0 - 1, j0 - 1};
    double best_d2 = std::numeric_limits<double>::infinity();
    int idx = 0;
    for (int dj = -1; dj <= 1; ++dj) {
        const double oy = kRow * p * dj;
        for (int di = -1; di <= 1; ++di, ++idx) {
            const double ox = p * (di + 0.5 * dj);
            const double dx = base.x() + ox - point.x();
            const double dy = base.y() + oy - point.y();
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best = HexIndex{i0 + di, j0 + dj};
                best_d2 = d2;
            }
        }
    }
    return best;
}

}  // namespace plenoray

template <>
struct std::hash<plenoray::HexIndex> {
    size_t operator()(const plenoray::HexIndex& h) const noexcept
    {
        return std::hash<uint64_t>{}((uint64_t(uint32_t(h.i)) << 32) | uint32_t(h.j));
    }
};
