// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/pattern.hpp"

#include <cmath>
#include <stdexcept>

namespace plenoray {

namespace {

const Color kWhite(1.0, 1.0, 1.0);
const Color kBlack(0.0, 0.0, 0.0);

PatternBoard board_base(const BoardPose& pose, double width, double height)
{
    PatternBoard board;
    PlaneFrame frame;
    frame.b = pose.rotation.col(0);
    frame.c = pose.rotation.col(1);
    frame.a = pose.center - 0.5 * width * frame.b - 0.5 * height * frame.c;
    board.plane.q = frame.a;
    board.plane.n = frame.b.cross(frame.c).normalized();
    board.plane.frame = frame;
    board.pattern_min = Vec2(0.0, 0.0);
    board.pattern_max = Vec2(width, height);
    return board;
}

}  // namespace

BoardPose make_pose(const Vec3& center, const Vec3& rotation_deg)
{
    const double d2r = M_PI / 180.0;
    BoardPose pose;
    pose.center = center;
    pose.rotation = (Eigen::AngleAxisd(rotation_deg.z() * d2r, Vec3::UnitZ()) *
                     Eigen::AngleAxisd(rotation_deg.y() * d2r, Vec3::UnitY()) *
                     Eigen::AngleAxisd(rotation_deg.x() * d2r, Vec3::UnitX()))
                        .toRotationMatrix();
    return pose;
}

Vec3 board_to_world(const PatternBoard& board, const Vec2& uv)
{
    const PlaneFrame& f = *board.plane.frame;
    return f.a + uv.x() * f.b + uv.y() * f.c;
}

Vec2 world_to_board(const PatternBoard& board, const Vec3& point, double* off_plane)
{
    const PlaneFrame& f = *board.plane.frame;
    const Vec3 rel = point - f.a;
    if (off_plane) *off_plane = rel.dot(board.plane.n);
    // Gram solve; exact for the orthonormal frames built here but also
    // correct for any independent b, c.
    const double bb = f.b.squaredNorm();
    const double cc = f.c.squaredNorm();
    const double bc = f.b.dot(f.c);
    const double rb = rel.dot(f.b);
    const double rc = rel.dot(f.c);
    const double det = bb * cc - bc * bc;
    return Vec2((rb * cc - rc * bc) / det, (rc * bb - rb * bc) / det);
}

Color shade(const PatternBoard& board, const Vec3& point)
{
    if (board.kind == PatternKind::Uniform) return board.uniform_color;

    const Vec2 uv = world_to_board(board, point);
    const Vec2 lo = board.pattern_min - Vec2(board.margin, board.margin);
    const Vec2 hi = board.pattern_max + Vec2(board.margin, board.margin);
    if (uv.x() < lo.x() || uv.x() > hi.x() || uv.y() < lo.y() || uv.y() > hi.y())
        return board.background;

    const bool in_pattern = uv.x() >= board.pattern_min.x() && uv.x() <= board.pattern_max.x() &&
                            uv.y() >= board.pattern_min.y() && uv.y() <= board.pattern_max.y();
    if (!in_pattern) return kWhite;  // quiet zone

    if (board.kind == PatternKind::Checkerboard) {
        const long cu = long(std::floor(uv.x() / board.square_size));
        const long cv = long(std::floor(uv.y() / board.square_size));
        return ((cu + cv) % 2 == 0) ? kBlack : kWhite;
    }

    // Dot grid: dark dots on white.
    const double s = board.square_size;
    const double gu = std::round(uv.x() / s) * s;
    const double gv = std::round(uv.y() / s) * s;
    const Vec2 nearest(std::clamp(gu, 0.0, (board.cols - 1) * s),
                       std::clamp(gv, 0.0, (board.rows - 1) * s));
    return ((uv - nearest).norm() <= board.dot_radius) ? kBlack : kWhite;
}

PatternBoard make_checkerboard(int rows, int cols, double square_size, const BoardPose& pose,
                               double margin, const Color& background)
{
    if (rows < 2 || cols < 2) throw std::invalid_argument("checkerboard needs rows, cols >= 2");
    if (square_size <= 0.0) throw std::invalid_argument("checkerboard square_size must be > 0");

    PatternBoard board = board_base(pose, cols * square_size, rows * square_size);
    board.kind = PatternKind::Checkerboard;
    board.rows = rows;
    board.cols = cols;
    board.square_size = square_size;
    board.margin = margin;
    board.background = background;

    board.points_uv.reserve(size_t(rows - 1) * size_t(cols - 1));
    for (int r = 1; r < rows; ++r)
        for (int c = 1; c < cols; ++c) {
            const Vec2 uv(c * square_size, r * square_size);
            board.points_uv.push_back(uv);
            board.points_of_interest.push_back(board_to_world(board, uv));
        }
    return board;
}

PatternBoard make_dot_grid(int rows, int cols, double spacing, double dot_radius,
                           const BoardPose& pose, double margin, const Color& background)
{
    if (rows < 1 || cols < 1) throw std::invalid_argument("dot grid needs rows, cols >= 1");
    if (spacing <= 0.0 || dot_radius <= 0.0)
        throw std::invalid_argument("dot grid spacing and dot_radius must be > 0");

    // Pattern area: half a spacing of white beyond the outermost dot centers.
    PatternBoard board = board_base(pose, (cols - 1) * spacing + spacing, (rows - 1) * spacing + spacing);
    board.kind = PatternKind::DotGrid;
    board.rows = rows;
    board.cols = cols;
    board.square_size = spacing;
    board.dot_radius = dot_radius;
    board.margin = margin;
    board.background = background;
    // Shift the frame so dot (0,0) sits at (u,v) = (0,0).
    PlaneFrame f = *board.plane.frame;
    f.a += 0.5 * spacing * f.b + 0.5 * spacing * f.c;
    board.plane.frame = f;
    board.plane.q = f.a;
    board.pattern_min = Vec2(-0.5 * spacing, -0.5 * spacing);
    board.pattern_max = Vec2((cols - 0.5) * spacing, (rows - 0.5) * spacing);

    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const Vec2 uv(c * spacing, r * spacing);
            board.points_uv.push_back(uv);
            board.points_of_interest.push_back(board_to_world(board, uv));
        }
    return board;
}

PatternBoard make_uniform_board(const Color& color, const BoardPose& pose, double half_extent)
{
    PatternBoard board = board_base(pose, 2.0 * half_extent, 2.0 * half_extent);
    board.kind = PatternKind::Uniform;
    board.uniform_color = color;
    return board;
}

ProxyPlanePair make_proxy_planes(int fixed_axis, double near_value, double far_value)
{
    if (fixed_axis < 0 || fixed_axis > 2) throw std::invalid_argument("fixed_axis must be 0..2");
    auto make_plane = [fixed_axis](double value) {
        PlaneGeom plane;
        plane.n = Vec3::Unit(fixed_axis);
        plane.q = value * plane.n;
        PlaneFrame frame;
        frame.a = plane.q;
        // Remaining world coordinates in ascending axis order.
        const int u_axis = fixed_axis == 0 ? 1 : 0;
        const int v_axis = fixed_axis == 2 ? 1 : 2;
        frame.b = Vec3::Unit(u_axis);
        frame.c = Vec3::Unit(v_axis);
        plane.frame = frame;
        return plane;
    };
    ProxyPlanePair pair;
    pair.fixed_axis = fixed_axis;
    pair.near_value = near_value;
    pair.far_value = far_value;
    pair.near = make_plane(near_value);
    pair.far = make_plane(far_value);
    return pair;
}

}  // namespace plenoray
