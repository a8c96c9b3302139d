// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace plenoray {

const char* to_string(FilterOutcome outcome)
{
    switch (outcome) {
        case FilterOutcome::Pass: return "pass";
        case FilterOutcome::FailBoundary: return "boundary";
        case FilterOutcome::FailInvalidPixel: return "invalid-pixel";
        case FilterOutcome::FailLength: return "length";
        case FilterOutcome::FailAngle: return "angle";
    }
    return "?";
}

MicrolensSplit split_microlens_images(const CameraRig& rig, int scale_k)
{
    const PixelGrid grid = make_pixel_grid(rig.sensor, scale_k);
    MicrolensSplit split;
    split.width = grid.width;
    split.height = grid.height;
    split.cell_of.assign(size_t(grid.width) * grid.height, 0);

    if (!rig.mla.enabled) {
        split.split = false;
        split.cells = {HexIndex{0, 0}};
        split.pixels.resize(1);
        auto& all = split.pixels[0];
        all.resize(split.cell_of.size());
        for (int32_t p = 0; p < int32_t(all.size()); ++p) all[p] = p;
        return split;
    }

    split.split = true;
    HexGrid hex{rig.mla.pitch, rig.mla.origin_offset};
    std::map<HexIndex, int32_t> index_of;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            // Orthographic projection of the lens centers onto the sensor
            // keeps their (x, y); nearest projected center wins.
            const HexIndex cell = nearest_lens_center(grid.pixel_center(x, y), hex);
            auto [it, inserted] = index_of.try_emplace(cell, int32_t(split.cells.size()));
            if (inserted) {
                split.cells.push_back(cell);
                split.pixels.emplace_back();
            }
            const int32_t ci = it->second;
            split.cell_of[size_t(y) * grid.width + x] = ci;
            split.pixels[size_t(ci)].push_back(int32_t(y) * grid.width + x);
        }
    }
    return split;
}

namespace {

inline bool valid_px(const FloatImage& img, int x, int y)
{
    return !std::isnan(img.at(x, y, 0));
}

// Local acceptance radius: half the diagonal of one J pixel's footprint on
// the board, estimated from the valid direct neighbors of the candidate.
double auto_lambda(const FloatImage& img, int x, int y)
{
    const Vec2 here(img.at(x, y, 0), img.at(x, y, 1));
    double dh = 0.0, dv = 0.0;
    int nh = 0, nv = 0;
    for (int dx : {-1, 1}) {
        const int xx = x + dx;
        if (xx >= 0 && xx < img.width && valid_px(img, xx, y)) {
            dh += (Vec2(img.at(xx, y, 0), img.at(xx, y, 1)) - here).norm();
            ++nh;
        }
    }
    for (int dy : {-1, 1}) {
        const int yy = y + dy;
        if (yy >= 0 && yy < img.height && valid_px(img, x, yy)) {
            dv += (Vec2(img.at(x, yy, 0), img.at(x, yy, 1)) - here).norm();
            ++nv;
        }
    }
    if (nh == 0 && nv == 0) return 0.0;
    if (nh == 0) dh = dv / nv, nh = 1;
    if (nv == 0) dv = dh / nh, nv = 1;
    return 0.5 * std::hypot(dh / nh, dv / nv);
}

}  // namespace

std::optional<SearchHit> naive_search(const FloatImage& j, const MicrolensSplit& split, int cell,
                                      const Vec2& target_uv, double lambda)
{
    const auto& pixels = split.pixels[size_t(cell)];
    double best_d2 = std::numeric_limits<double>::infinity();
    int32_t best = -1;
    for (const int32_t p : pixels) {  // row-major, so strict < keeps the tie-break order
        const float u = j.data[size_t(p) * 3];
        if (std::isnan(u)) continue;
        const float v = j.data[size_t(p) * 3 + 1];
        const double du = u - target_uv.x();
        const double dv = v - target_uv.y();
        const double d2 = du * du + dv * dv;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = p;
        }
    }
    if (best < 0) return std::nullopt;

    SearchHit hit;
    hit.x = best % split.width;
    hit.y = best / split.width;
    hit.distance = std::sqrt(best_d2);
    hit.lambda = lambda >= 0.0 ? lambda : auto_lambda(j, hit.x, hit.y);
    if (hit.distance >= hit.lambda) return std::nullopt;
    return hit;
}

GridStats compute_grid_stats(const std::array<Vec2, 16>& pts)
{
    GridStats stats;
    auto at = [&](int col, int row) -> const Vec2& { return pts[size_t(row) * 4 + col]; };

    int hi = 0, vi = 0;
    double hsum = 0.0, vsum = 0.0;
    std::array<double, 12> hlen{}, vlen{};
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 3; ++col) hsum += hlen[size_t(hi++)] = (at(col + 1, row) - at(col, row)).norm();
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 4; ++col) vsum += vlen[size_t(vi++)] = (at(col, row + 1) - at(col, row)).norm();
    stats.d_horiz = hsum / 12.0;
    stats.d_vert = vsum / 12.0;
    for (int e = 0; e < 12; ++e) {
        stats.horiz_dev[size_t(e)] = std::abs(1.0 - hlen[size_t(e)] / stats.d_horiz);
        stats.vert_dev[size_t(e)] = std::abs(1.0 - vlen[size_t(e)] / stats.d_vert);
        stats.max_horiz_dev = std::max(stats.max_horiz_dev, stats.horiz_dev[size_t(e)]);
        stats.max_vert_dev = std::max(stats.max_vert_dev, stats.vert_dev[size_t(e)]);
    }

    std::array<double, 9> angles{};
    double asum = 0.0;
    int ai = 0;
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col) {
            const Vec2 e1 = at(col + 1, row) - at(col, row);
            const Vec2 e2 = at(col, row + 1) - at(col, row);
            const double cosang =
                std::clamp(e1.dot(e2) / (e1.norm() * e2.norm()), -1.0, 1.0);
            asum += angles[size_t(ai++)] = std::acos(cosang);
        }
    stats.alpha = asum / 9.0;
    for (int aidx = 0; aidx < 9; ++aidx) {
        stats.angle_dev[size_t(aidx)] = std::abs(angles[size_t(aidx)] - stats.alpha);
        stats.max_angle_dev = std::max(stats.max_angle_dev, stats.angle_dev[size_t(aidx)]);
    }
    return stats;
}

std::pair<FilterOutcome, GridStats> grid_filter(const FloatImage& j, const MicrolensSplit& split,
                                                int cell, int x, int y, double lambda_d,
                                                double lambda_alpha)
{
    std::array<Vec2, 16> pts;
    for (int b = -1; b <= 2; ++b) {
        for (int a = -1; a <= 2; ++a) {
            const int xx = x + a;
            const int yy = y + b;
            if (xx < 0 || yy < 0 || xx >= j.width || yy >= j.height)
                return {FilterOutcome::FailBoundary, {}};
            if (split.cell_of[size_t(yy) * split.width + xx] != cell)
                return {FilterOutcome::FailBoundary, {}};
            if (!valid_px(j, xx, yy)) return {FilterOutcome::FailInvalidPixel, {}};
            pts[size_t(b + 1) * 4 + size_t(a + 1)] = Vec2(j.at(xx, yy, 0), j.at(xx, yy, 1));
        }
    }
    GridStats stats = compute_grid_stats(pts);
    if (stats.max_horiz_dev >= lambda_d || stats.max_vert_dev >= lambda_d)
        return {FilterOutcome::FailLength, stats};
    if (stats.max_angle_dev >= lambda_alpha) return {FilterOutcome::FailAngle, stats};
    return {FilterOutcome::Pass, stats};
}

namespace {

struct QuadSolve {
    bool ok = false;
    double s = 0.0, t = 0.0;
};

QuadSolve solve_quad(const FloatImage& j, const MicrolensSplit& split, int cell, int qx, int qy,
                     const Vec2& target)
{
    QuadSolve out;
    const int xs[4] = {qx, qx + 1, qx, qx + 1};
    const int ys[4] = {qy, qy, qy + 1, qy + 1};
    for (int c = 0; c < 4; ++c) {
        if (xs[c] < 0 || ys[c] < 0 || xs[c] >= j.width || ys[c] >= j.height) return out;
        if (split.cell_of[size_t(ys[c]) * split.width + xs[c]] != cell) return out;
        if (!valid_px(j, xs[c], ys[c])) return out;
    }
    const Vec2 j00(j.at(qx, qy, 0), j.at(qx, qy, 1));
    const Vec2 du = Vec2(j.at(qx + 1, qy, 0), j.at(qx + 1, qy, 1)) - j00;
    const Vec2 dv = Vec2(j.at(qx, qy + 1, 0), j.at(qx, qy + 1, 1)) - j00;
    const double det = du.x() * dv.y() - du.y() * dv.x();
    const double scale = std::max(du.squaredNorm(), dv.squaredNorm());
    if (std::abs(det) < 1e-12 * scale || scale == 0.0) return out;  // collinear edges
    const Vec2 rhs = target - j00;
    out.s = (rhs.x() * dv.y() - rhs.y() * dv.x()) / det;
    out.t = (du.x() * rhs.y() - du.y() * rhs.x()) / det;
    out.ok = true;
    return out;
}

}  // namespace

InterpolationOutput interpolate_corner(const FloatImage& j, const MicrolensSplit& split, int cell,
                                       int x, int y, const Vec2& target, int scale_k)
{
    InterpolationOutput out;
    constexpr double kEps = 1e-9;

    // The candidate is the globally nearest valid pixel, so among any quad
    // containing p it is automatically the closest corner; selection reduces
    // to the containment test plus the smallest-(s^2+t^2) tie-break.
    struct Candidate {
        int qx, qy;
        double s, t;
    };
    std::optional<Candidate> best;
    for (const auto& [dx, dy] : {std::pair{-1, -1}, {0, -1}, {-1, 0}, {0, 0}}) {
        const int qx = x + dx;
        const int qy = y + dy;
        const QuadSolve sol = solve_quad(j, split, cell, qx, qy, target);
        if (!sol.ok) continue;
        if (sol.s < -kEps || sol.s > 1.0 + kEps || sol.t < -kEps || sol.t > 1.0 + kEps) continue;
        if (!best || sol.s * sol.s + sol.t * sol.t < best->s * best->s + best->t * best->t)
            best = Candidate{qx, qy, sol.s, sol.t};
    }

    if (best) {
        out.contained = true;
        out.s = best->s;
        out.t = best->t;
        out.pixel = Vec2((best->qx + best->s) / scale_k, (best->qy + best->t) / scale_k);
        return out;
    }

    // No containing quad (noise folding): fall back to the candidate-anchored
    // solve, or to the bare pixel center if that quad is unusable.
    const QuadSolve sol = solve_quad(j, split, cell, x, y, target);
    if (sol.ok) {
        out.contained = false;
        out.s = sol.s;
        out.t = sol.t;
        out.pixel = Vec2((x + sol.s) / scale_k, (y + sol.t) / scale_k);
        return out;
    }
    out.contained = false;
    out.fallback_center = true;
    out.pixel = Vec2(double(x) / scale_k, double(y) / scale_k);
    return out;
}

Vec3 plane_point(const FloatImage& img, int x, int y)
{
    const int axis = img.meta.fixed_axis;
    const double u = img.at(x, y, 0);
    const double v = img.at(x, y, 1);
    switch (axis) {
        case 0: return Vec3(img.meta.fixed_value, u, v);
        case 1: return Vec3(u, img.meta.fixed_value, v);
        default: return Vec3(u, v, img.meta.fixed_value);
    }
}

std::optional<Ray> pixel_ray(const FloatImage& j_near, const FloatImage& j_far, int x, int y)
{
    if (!valid_px(j_near, x, y) || !valid_px(j_far, x, y)) return std::nullopt;
    const Vec3 p0 = plane_point(j_near, x, y);
    const Vec3 p1 = plane_point(j_far, x, y);
    const Vec3 d = p1 - p0;
    const double len = d.norm();
    if (len < 1e-9) return std::nullopt;  // degenerate
    return Ray{p0, d / len};
}

FloatImage positional_from_planes(const FloatImage& j_near, const FloatImage& j_far,
                                  const PatternBoard& board)
{
    FloatImage out(j_near.width, j_near.height, 3);
    out.meta = j_near.meta;
    out.meta.semantic = ImageSemantic::UvwPositional;
    out.meta.normalized = true;
    out.meta.fixed_axis = -1;
    out.meta.fixed_value = 0.0;

    const float nan = std::numeric_limits<float>::quiet_NaN();
    const Vec3 q = board.plane.q;
    const Vec3 n = board.plane.n;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            out.at(x, y, 2) = std::min(j_near.at(x, y, 2), j_far.at(x, y, 2));
            if (!valid_px(j_near, x, y) || !valid_px(j_far, x, y)) {
                out.at(x, y, 0) = nan;
                out.at(x, y, 1) = nan;
                continue;
            }
            const Vec3 p0 = plane_point(j_near, x, y);
            const Vec3 p1 = plane_point(j_far, x, y);
            const Vec3 d = p1 - p0;
            const double denom = d.dot(n);
            if (std::abs(denom) < 1e-12) {  // ray parallel to the board
                out.at(x, y, 0) = nan;
                out.at(x, y, 1) = nan;
                continue;
            }
            const double t = (q - p0).dot(n) / denom;
            const Vec2 uv = world_to_board(board, p0 + t * d);
            out.at(x, y, 0) = float(uv.x());
            out.at(x, y, 1) = float(uv.y());
        }
    }
    return out;
}

ExtractionResult extract(const FloatImage& j, const PatternBoard& board,
                         const MicrolensSplit& split, const ExtractionConfig& config)
{
    ExtractionResult result;
    for (int32_t cell = 0; cell < int32_t(split.cells.size()); ++cell) {
        const std::optional<HexIndex> lens =
            split.split ? std::optional<HexIndex>(split.cells[size_t(cell)]) : std::nullopt;
        for (size_t k = 0; k < board.points_uv.size(); ++k) {
            const Vec2& target = board.points_uv[k];
            const auto hit = naive_search(j, split, cell, target, config.lambda);
            if (!hit) {
                result.rejections.push_back({int(k), lens, "search"});
                continue;
            }
            bool filter_passed = false;
            if (config.filter_enabled) {
                const auto [outcome, stats] = grid_filter(j, split, cell, hit->x, hit->y,
                                                          config.lambda_d, config.lambda_alpha);
                if (outcome != FilterOutcome::Pass) {
                    result.rejections.push_back({int(k), lens,
                                                 std::string("filter-") + to_string(outcome)});
                    continue;
                }
                filter_passed = true;
            }
            const InterpolationOutput interp =
                interpolate_corner(j, split, cell, hit->x, hit->y, target, config.scale_k);

            Correspondence c;
            c.k = int(k);
            c.lens = lens;
            c.lens_type = lens ? microlens_type(*lens) : -1;
            c.pixel = interp.pixel;
            c.world = board.points_of_interest[k];
            c.board_uv = target;
            c.method = config.method;
            c.diag.filter_passed = filter_passed;
            c.diag.s = interp.s;
            c.diag.t = interp.t;
            c.diag.candidate_distance = hit->distance;
            c.diag.contained = interp.contained;
            c.diag.fallback_center = interp.fallback_center;
            result.correspondences.push_back(std::move(c));
        }
    }
    std::sort(result.correspondences.begin(), result.correspondences.end(),
              [](const Correspondence& a, const Correspondence& b) {
                  const HexIndex la = a.lens.value_or(HexIndex{0, 0});
                  const HexIndex lb = b.lens.value_or(HexIndex{0, 0});
                  return std::tie(la.i, la.j, a.k) < std::tie(lb.i, lb.j, b.k);
              });
    return result;
}

CompareStats compare_correspondences(const std::vector<Correspondence>& a,
                                     const std::vector<Correspondence>& b)
{
    using Key = std::tuple<int, int, int>;  // lens_i, lens_j, k
    auto key_of = [](const Correspondence& c) {
        const HexIndex lens = c.lens.value_or(HexIndex{0, 0});
        return Key{lens.i, lens.j, c.k};
    };
    std::map<Key, const Correspondence*> bmap;
    for (const auto& c : b) bmap[key_of(c)] = &c;

    CompareStats stats;
    std::vector<double> norms;
    double sum_dx = 0.0, sum_dy = 0.0;
    for (const auto& c : a) {
        const auto it = bmap.find(key_of(c));
        if (it == bmap.end()) {
            ++stats.only_a;
            continue;
        }
        const Vec2 d = it->second->pixel - c.pixel;
        norms.push_back(d.norm());
        sum_dx += d.x();
        sum_dy += d.y();
        stats.max_abs_px = std::max(stats.max_abs_px, d.norm());
        bmap.erase(it);
    }
    stats.only_b = int(bmap.size());
    stats.matched = int(norms.size());
    if (!a.empty()) stats.ratio_a = double(stats.matched) / double(a.size());
    if (!b.empty()) stats.ratio_b = double(stats.matched) / double(b.size());
    if (stats.matched == 0) return stats;

    for (const double n : norms) stats.mean_abs_px += n;
    stats.mean_abs_px /= stats.matched;
    stats.mean_dx = sum_dx / stats.matched;
    stats.mean_dy = sum_dy / stats.matched;
    if (stats.matched > 1) {
        double ss = 0.0;
        for (const double n : norms) ss += (n - stats.mean_abs_px) * (n - stats.mean_abs_px);
        stats.sem_px = std::sqrt(ss / (stats.matched - 1)) / std::sqrt(double(stats.matched));
    }
    return stats;
}

}  // namespace plenoray
