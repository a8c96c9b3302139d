// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/render.hpp"

#include "plenoray/parallel.hpp"

#include <cmath>
#include <limits>

namespace plenoray {

namespace {

// Precomputed frame solve: uv of a point already on the plane.
struct FrameSolver {
    Vec3 a, b, c;
    double inv_det, bb, cc, bc;
    bool orthonormal;

    explicit FrameSolver(const PlaneFrame& f) : a(f.a), b(f.b), c(f.c)
    {
        bb = b.squaredNorm();
        cc = c.squaredNorm();
        bc = b.dot(c);
        inv_det = 1.0 / (bb * cc - bc * bc);
        orthonormal = std::abs(bb - 1.0) < 1e-12 && std::abs(cc - 1.0) < 1e-12 &&
                      std::abs(bc) < 1e-12;
    }

    Vec2 uv(const Vec3& p) const
    {
        const Vec3 rel = p - a;
        const double rb = rel.dot(b);
        const double rc = rel.dot(c);
        if (orthonormal) return Vec2(rb, rc);
        return Vec2((rb * cc - rc * bc) * inv_det, (rc * bb - rb * bc) * inv_det);
    }
};

}  // namespace

FloatImage render_color(const Camera& camera, const PatternBoard& board, const RenderJob& job)
{
    const PixelGrid grid = make_pixel_grid(camera.rig().sensor, 1);
    FloatImage img(grid.width, grid.height, 3);
    img.meta.semantic = ImageSemantic::Color;
    img.meta.seed = job.seed;
    img.meta.samples = job.samples;
    img.meta.scale_k = 1;

    const double inv_n = 1.0 / job.samples;
    parallel_tiles(grid.width, grid.height, [&](const TileRect& tile) {
        for (int y = tile.y0; y < tile.y1; ++y) {
            for (int x = tile.x0; x < tile.x1; ++x) {
                Vec3 acc = Vec3::Zero();
                camera.trace_pixel_visit(grid, x, y, job.samples, job.seed,
                                         [&](const TraceResult& tr) {
                                             if (!tr.exited) return;
                                             const auto hit =
                                                 intersect_plane(tr.world, board.plane);
                                             if (!hit) return;
                                             acc += shade(board, hit->point);
                                         });
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = float(acc[c] * inv_n);
            }
        }
    });
    return img;
}

FloatImage render_positional(const Camera& camera, const PlaneGeom& target, const RenderJob& job,
                             ImageSemantic semantic)
{
    const PixelGrid grid = make_pixel_grid(camera.rig().sensor, job.scale_k);
    FloatImage img(grid.width, grid.height, 3);
    img.meta.semantic = semantic;
    img.meta.seed = job.seed;
    img.meta.samples = job.samples;
    img.meta.scale_k = job.scale_k;
    img.meta.ratio_min = 1.0 / job.samples;

    const FrameSolver solver(*target.frame);
    const double inv_n = 1.0 / job.samples;
    parallel_tiles(grid.width, grid.height, [&](const TileRect& tile) {
        for (int y = tile.y0; y < tile.y1; ++y) {
            for (int x = tile.x0; x < tile.x1; ++x) {
                double su = 0.0, sv = 0.0;
                int hits = 0;
                camera.trace_pixel_visit(grid, x, y, job.samples, job.seed,
                                         [&](const TraceResult& tr) {
                                             if (!tr.exited) return;
                                             const auto hit = intersect_plane(tr.world, target);
                                             if (!hit) return;  // counts as blocked here
                                             const Vec2 uv = solver.uv(hit->point);
                                             su += uv.x();
                                             sv += uv.y();
                                             ++hits;
                                         });
                img.at(x, y, 0) = float(su * inv_n);
                img.at(x, y, 1) = float(sv * inv_n);
                img.at(x, y, 2) = float(hits * inv_n);
            }
        }
    });
    return img;
}

FloatImage normalize_positional(const FloatImage& raw, double ratio_min)
{
    if (ratio_min < 0.0)
        ratio_min = raw.meta.samples > 0 ? 1.0 / raw.meta.samples : 0.0;

    FloatImage out = raw;
    out.meta.normalized = true;
    out.meta.ratio_min = ratio_min;
    const float nan = std::numeric_limits<float>::quiet_NaN();
    const float rmin = float(ratio_min);
    for (size_t p = 0; p < out.pixel_count(); ++p) {
        float* px = &out.data[p * 3];
        const float ratio = px[2];
        if (ratio > rmin) {
            px[0] /= ratio;
            px[1] /= ratio;
        } else {
            px[0] = nan;
            px[1] = nan;
        }
    }
    return out;
}

std::pair<FloatImage, FloatImage> render_proxy_planes(const Camera& camera,
                                                      const ProxyPlanePair& planes,
                                                      const RenderJob& job)
{
    const PixelGrid grid = make_pixel_grid(camera.rig().sensor, job.scale_k);
    FloatImage raw_near(grid.width, grid.height, 3);
    FloatImage raw_far(grid.width, grid.height, 3);
    for (FloatImage* img : {&raw_near, &raw_far}) {
        img->meta.semantic = ImageSemantic::PlanePositional;
        img->meta.seed = job.seed;
        img->meta.samples = job.samples;
        img->meta.scale_k = job.scale_k;
        img->meta.ratio_min = 1.0 / job.samples;
        img->meta.fixed_axis = planes.fixed_axis;
    }
    raw_near.meta.fixed_value = planes.near_value;
    raw_far.meta.fixed_value = planes.far_value;

    const FrameSolver near_solver(*planes.near.frame);
    const FrameSolver far_solver(*planes.far.frame);
    const double inv_n = 1.0 / job.samples;
    // One traced ray set feeds both planes.
    parallel_tiles(grid.width, grid.height, [&](const TileRect& tile) {
        for (int y = tile.y0; y < tile.y1; ++y) {
            for (int x = tile.x0; x < tile.x1; ++x) {
                double su_n = 0.0, sv_n = 0.0, su_f = 0.0, sv_f = 0.0;
                int hits_n = 0, hits_f = 0;
                camera.trace_pixel_visit(grid, x, y, job.samples, job.seed,
                                         [&](const TraceResult& tr) {
                                             if (!tr.exited) return;
                                             if (const auto h = intersect_plane(tr.world,
                                                                                planes.near)) {
                                                 const Vec2 uv = near_solver.uv(h->point);
                                                 su_n += uv.x();
                                                 sv_n += uv.y();
                                                 ++hits_n;
                                             }
                                             if (const auto h = intersect_plane(tr.world,
                                                                                planes.far)) {
                                                 const Vec2 uv = far_solver.uv(h->point);
                                                 su_f += uv.x();
                                                 sv_f += uv.y();
                                                 ++hits_f;
                                             }
                                         });
                raw_near.at(x, y, 0) = float(su_n * inv_n);
                raw_near.at(x, y, 1) = float(sv_n * inv_n);
                raw_near.at(x, y, 2) = float(hits_n * inv_n);
                raw_far.at(x, y, 0) = float(su_f * inv_n);
                raw_far.at(x, y, 1) = float(sv_f * inv_n);
                raw_far.at(x, y, 2) = float(hits_f * inv_n);
            }
        }
    });
    return {normalize_positional(raw_near), normalize_positional(raw_far)};
}

bool pixel_valid(const FloatImage& img, int x, int y)
{
    return !std::isnan(img.at(x, y, 0)) && !std::isnan(img.at(x, y, 1));
}

}  // namespace plenoray
