// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/geometry.hpp"

#include <Eigen/Geometry>

#include <vector>

namespace plenoray {

enum class PatternKind { Checkerboard, DotGrid, Uniform };

/// Rigid pose of a board: the board-local x/y axes map to world via
/// rotation, the board center to `center`.
struct BoardPose {
    Vec3 center = Vec3::Zero();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

// Euler angles in degrees, applied as Rz * Ry * Rx.
BoardPose make_pose(const Vec3& center, const Vec3& rotation_deg);

/// Planar calibration object. The plane frame (a, b, c) has b, c orthonormal
/// in millimeters, so board (u, v) coordinates are millimeters on the board
/// and distances in (u, v) equal 3D distances. u runs along columns,
/// v along rows.
struct PatternBoard {
    PlaneGeom plane;  // frame always set
    PatternKind kind = PatternKind::Uniform;

    int rows = 0, cols = 0;      // squares (checkerboard) / dots (dot grid)
    double square_size = 0.0;    // checkerboard square edge or dot spacing [mm]
    double dot_radius = 0.0;
    Color uniform_color = Color(0.5, 0.5, 0.5);
    Color background = Color::Zero();
    double margin = 0.0;         // white quiet zone around the pattern [mm]
    Vec2 pattern_min = Vec2::Zero();  // printed pattern extent in (u, v)
    Vec2 pattern_max = Vec2::Zero();

    std::vector<Vec3> points_of_interest;  // world positions p_k
    std::vector<Vec2> points_uv;           // matching board (u, v)
};

Vec3 board_to_world(const PatternBoard& board, const Vec2& uv);

// Inverse of board_to_world; off-plane points are projected along the
// normal first, with the signed offset reported through off_plane.
Vec2 world_to_board(const PatternBoard& board, const Vec3& point, double* off_plane = nullptr);

// Color of the board at a 3D point (projected onto the plane if needed).
// Outside the pattern but within the margin: white; outside the extent:
// the configured background.
Color shade(const PatternBoard& board, const Vec3& point);

// Checkerboard of rows x cols squares with the cell at (u, v) in
// [0, s) x [0, s) black. Points of interest are the (rows-1)*(cols-1)
// interior corners, enumerated row-major in (v, u):
// k = (r-1)*(cols-1) + (c-1) for the corner at (u, v) = (c*s, r*s).
PatternBoard make_checkerboard(int rows, int cols, double square_size, const BoardPose& pose,
                               double margin = 0.0, const Color& background = Color::Zero());

// Dot grid: rows x cols dots at spacing intervals, dot centers are the
// points of interest.
PatternBoard make_dot_grid(int rows, int cols, double spacing, double dot_radius,
                           const BoardPose& pose, double margin = 0.0,
                           const Color& background = Color::Zero());

PatternBoard make_uniform_board(const Color& color, const BoardPose& pose, double half_extent);

/// Two parallel axis-aligned planes used to represent every pixel's viewing
/// ray by its two intersection points. fixed_axis is the world coordinate
/// (0 = x, 1 = y, 2 = z) that is constant on each plane; the plane frames
/// expose the remaining two world coordinates, in ascending axis order,
/// as (u, v).
struct ProxyPlanePair {
    PlaneGeom near;
    PlaneGeom far;
    int fixed_axis = 2;
    double near_value = 0.0;
    double far_value = 0.0;
};

ProxyPlanePair make_proxy_planes(int fixed_axis, double near_value, double far_value);

}  // namespace plenoray
