// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/camera.hpp"
#include "plenoray/hexgrid.hpp"
#include "plenoray/image.hpp"
#include "plenoray/pattern.hpp"
#include "plenoray/render.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plenoray {

enum class ExtractionMethod { Direct, TwoPlane };

struct ExtractionConfig {
    int scale_k = 1;                 // K of the positional source
    double lambda = -1.0;            // acceptance radius [board mm]; < 0 selects auto
    double lambda_d = 0.15;          // max relative grid-edge length deviation
    double lambda_alpha = 10.0 * M_PI / 180.0;  // max grid-angle deviation [rad]
    ExtractionMethod method = ExtractionMethod::Direct;
    bool filter_enabled = true;
};

/// Grid statistics of a 4x4 positional neighborhood.
struct GridStats {
    double d_vert = 0.0;   // mean vertical edge length [board mm]
    double d_horiz = 0.0;
    double alpha = 0.0;    // mean cell angle [rad]
    std::array<double, 12> vert_dev{};   // |1 - len/d_vert|
    std::array<double, 12> horiz_dev{};
    std::array<double, 9> angle_dev{};   // |alpha_ij - alpha| [rad]
    double max_vert_dev = 0.0;
    double max_horiz_dev = 0.0;
    double max_angle_dev = 0.0;
};

enum class FilterOutcome { Pass, FailBoundary, FailInvalidPixel, FailLength, FailAngle };

const char* to_string(FilterOutcome outcome);

/// One recovered ground-truth record.
struct Correspondence {
    int k = -1;
    std::optional<HexIndex> lens;  // empty for a conventional camera
    int lens_type = -1;
    Vec2 pixel = Vec2::Zero();     // sub-pixel position in the color image [px]
    Vec3 world = Vec3::Zero();     // p_k
    Vec2 board_uv = Vec2::Zero();
    ExtractionMethod method = ExtractionMethod::Direct;

    struct Diagnostics {
        bool filter_passed = false;
        double s = 0.0, t = 0.0;
        double candidate_distance = 0.0;  // naive-search distance [board mm]
        bool contained = true;            // p_k inside the chosen quad
        bool fallback_center = false;     // degenerate solve, pixel center used
    } diag;
};

struct Rejection {
    int k = -1;
    std::optional<HexIndex> lens;
    std::string reason;
};

struct ExtractionResult {
    std::vector<Correspondence> correspondences;  // sorted by (lens_i, lens_j, k)
    std::vector<Rejection> rejections;
};

/// Assignment of raster pixels to microlens images: each pixel belongs to
/// the cell whose center, orthographically projected onto the sensor, is
/// nearest. With the MLA disabled there is a single full-image cell.
struct MicrolensSplit {
    int width = 0, height = 0;
    bool split = false;
    std::vector<int32_t> cell_of;          // per pixel, index into cells
    std::vector<HexIndex> cells;           // only meaningful when split
    std::vector<std::vector<int32_t>> pixels;  // per cell, row-major linear indices
};

MicrolensSplit split_microlens_images(const CameraRig& rig, int scale_k);

struct SearchHit {
    int x = 0, y = 0;
    double distance = 0.0;  // [board mm]
    double lambda = 0.0;    // acceptance radius actually applied
};

// Valid masked pixel minimizing the board-plane distance to target_uv;
// ties break row-major. none when the minimum distance reaches lambda
// (auto lambda: half the local board-plane footprint of one J pixel).
std::optional<SearchHit> naive_search(const FloatImage& j_norm, const MicrolensSplit& split,
                                      int cell, const Vec2& target_uv, double lambda);

// Equidistant-grid constraint on the 4x4 neighborhood anchored at
// (x-1, y-1): relative edge-length deviations below lambda_d and cell-angle
// deviations below lambda_alpha. The angle at (i,j) is measured at vertex
// J(i,j) between the edges to J(i+1,j) and J(i,j+1).
std::pair<FilterOutcome, GridStats> grid_filter(const FloatImage& j_norm,
                                                const MicrolensSplit& split, int cell, int x,
                                                int y, double lambda_d, double lambda_alpha);

// Grid stats of 16 explicit board-plane points, row-major rows of 4.
GridStats compute_grid_stats(const std::array<Vec2, 16>& points);

struct InterpolationOutput {
    Vec2 pixel = Vec2::Zero();  // color-image coordinates
    double s = 0.0, t = 0.0;
    bool contained = false;
    bool fallback_center = false;
};

// Sub-pixel refinement: solves p = J(q) + s*(J(q+du) - J(q)) + t*(J(q+dv) - J(q))
// over the quad around the naive candidate that contains p (preferring the
// candidate as nearest corner, then smallest s^2 + t^2) and maps the result
// to color-image pixels by division by K.
InterpolationOutput interpolate_corner(const FloatImage& j_norm, const MicrolensSplit& split,
                                       int cell, int x, int y, const Vec2& target_uv, int scale_k);

// Viewing ray of a pixel from its two proxy-plane intersections.
std::optional<Ray> pixel_ray(const FloatImage& j_near, const FloatImage& j_far, int x, int y);

// Reconstructs the 3D point stored in a normalized plane-positional pixel.
Vec3 plane_point(const FloatImage& img, int x, int y);

// Synthesizes the board positional image by intersecting every pixel ray
// with the board plane; output channels are board (u, v) plus the smaller
// of the two ratio channels. Invalid pixels propagate as NaN.
FloatImage positional_from_planes(const FloatImage& j_near, const FloatImage& j_far,
                                  const PatternBoard& board);

// Full pipeline over every microlens image and every point of interest:
// naive search, optional grid filter, interpolation.
ExtractionResult extract(const FloatImage& j_norm, const PatternBoard& board,
                         const MicrolensSplit& split, const ExtractionConfig& config);

struct CompareStats {
    int matched = 0;
    int only_a = 0;
    int only_b = 0;
    double mean_abs_px = 0.0;  // mean Euclidean pixel difference
    double sem_px = 0.0;       // stddev / sqrt(matched)
    double max_abs_px = 0.0;
    double mean_dx = 0.0;
    double mean_dy = 0.0;
    double ratio_a = 0.0;      // matched / |A|
    double ratio_b = 0.0;
};

// Pairs records by (lens, k) and reports pixel-difference statistics.
CompareStats compare_correspondences(const std::vector<Correspondence>& a,
                                     const std::vector<Correspondence>& b);

}  // namespace plenoray
