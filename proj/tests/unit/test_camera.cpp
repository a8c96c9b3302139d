// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/camera.hpp"

#include <Eigen/Geometry>
#include <doctest.h>

#include <cmath>

using namespace plenoray;

namespace {

constexpr double kDeg = M_PI / 180.0;

SensorSpec small_sensor(DiffusorDistribution dist = DiffusorDistribution::None,
                        double max_angle_deg = 0.0)
{
    SensorSpec s;
    s.width_px = 16;
    s.height_px = 16;
    s.pixel_pitch = 0.01;
    s.diffusor_distribution = dist;
    s.diffusor_max_angle = max_angle_deg * kDeg;
    return s;
}

CameraRig null_rig()
{
    CameraRig rig;
    rig.sensor = small_sensor();
    rig.objective.distance_to_mla = 5.0;
    rig.objective.stop = {0.5, 1e6};
    SphericalSurface flat;
    flat.aperture_radius = 1e6;
    flat.ior_before = flat.ior_after = 1.0;
    flat.axial_position = 0.0;
    rig.objective.surfaces.push_back(flat);
    flat.axial_position = 1.0;
    rig.objective.surfaces.push_back(flat);
    return rig;
}

CameraRig mla_only_rig()
{
    CameraRig rig;
    rig.sensor = small_sensor();
    rig.mla.enabled = true;
    rig.mla.distance_to_sensor = 1.7;
    rig.mla.pitch = 0.2173;
    rig.mla.ior = 1.5;
    rig.mla.lens_radii = {0.95, 1.05, 1.15};
    rig.objective.distance_to_mla = 1e5;
    rig.objective.stop = {0.0, 1e6};
    return rig;
}

CameraRig pinhole_rig()
{
    CameraRig rig;
    rig.sensor = small_sensor();
    rig.objective.distance_to_mla = 10.0;
    SphericalSurface surf;
    surf.axial_position = 0.0;
    surf.radius = -200.0;
    surf.aperture_radius = 3.0;
    surf.ior_before = 1.5;
    surf.ior_after = 1.0;
    rig.objective.surfaces.push_back(surf);
    rig.objective.stop = {400.0, 0.001};
    return rig;
}

}  // namespace

TEST_CASE("generate_pixel_samples: distribution none is exactly axial")
{
    const CameraRig rig = null_rig();
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 1);
    const auto rays = cam.generate_pixel_samples(grid, 3, 4, 37, 123);
    REQUIRE(rays.size() == 37);
    for (const Ray& r : rays) {
        CHECK(r.dir == Vec3(0, 0, 1));
        CHECK(r.origin.z() == 0.0);
        // Origin inside the pixel footprint.
        const Vec2 c = grid.pixel_center(3, 4);
        CHECK(std::abs(r.origin.x() - c.x()) <= 0.5 * grid.footprint());
        CHECK(std::abs(r.origin.y() - c.y()) <= 0.5 * grid.footprint());
    }
}

TEST_CASE("generate_pixel_samples: deterministic in (seed, pixel, n)")
{
    CameraRig rig = null_rig();
    rig.sensor = small_sensor(DiffusorDistribution::UniformCone, 8.0);
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 2);
    const auto a = cam.generate_pixel_samples(grid, 7, 2, 100, 99);
    const auto b = cam.generate_pixel_samples(grid, 7, 2, 100, 99);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].origin == b[i].origin);
        CHECK(a[i].dir == b[i].dir);
    }
    // Different pixel or seed changes the set.
    const auto c = cam.generate_pixel_samples(grid, 8, 2, 100, 99);
    CHECK(a[0].origin != c[0].origin);
}

TEST_CASE("generate_pixel_samples: uniform cone statistics")
{
    CameraRig rig = null_rig();
    rig.sensor = small_sensor(DiffusorDistribution::UniformCone, 10.0);
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 1);
    const int n = 1000000;
    Vec3 mean = Vec3::Zero();
    double max_angle = 0.0;
    visit_pixel_samples(rig.sensor, grid, 5, 5, n, 2024, [&](const Ray& r) {
        mean += r.dir;
        max_angle = std::max(max_angle, std::acos(std::clamp(r.dir.z(), -1.0, 1.0)));
    });
    mean /= double(n);
    CHECK(max_angle <= 10.0 * kDeg + 1e-9);
    const double mean_angle = std::atan2(mean.head<2>().norm(), mean.z());
    CHECK(mean_angle < 0.1 * kDeg);
}

TEST_CASE("generate_pixel_samples: cosine cone stays inside the cone")
{
    CameraRig rig = null_rig();
    rig.sensor = small_sensor(DiffusorDistribution::CosineCone, 12.0);
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 1);
    double max_angle = 0.0;
    visit_pixel_samples(rig.sensor, grid, 1, 1, 100000, 5,
                        [&](const Ray& r) { max_angle = std::max(max_angle, std::acos(r.dir.z())); });
    CHECK(max_angle <= 12.0 * kDeg + 1e-9);
}

TEST_CASE("trace_through_camera: null optics leaves rays collinear")
{
    const Camera cam(null_rig());
    const Ray in{Vec3(0.02, -0.01, 0), Vec3(0.05, 0.02, 1.0).normalized()};
    const TraceResult res = cam.trace_through_camera(in);
    REQUIRE(res.exited);
    CHECK((res.world.dir - in.dir).norm() < 1e-12);
    // Origin advanced along the original line.
    const Vec3 rel = res.world.origin - in.origin;
    CHECK(rel.cross(in.dir).norm() < 1e-9);
}

TEST_CASE("trace_through_camera: microlens focal length matches R/(eta-1)")
{
    const CameraRig rig = mla_only_rig();
    const Camera cam(rig);
    const double z_front = rig.mla_front_z();

    // One lens per type: (0,0) -> 0, (1,0) -> 1, (2,0) -> 2.
    for (int type = 0; type < 3; ++type) {
        const HexIndex cell{type, 0};
        const Vec2 center = cam.hex_grid().center(cell);
        const double f_expected = rig.mla.lens_radii[size_t(type)] / (rig.mla.ior - 1.0);

        // Paraxial parallel bundle within 5% of the lens aperture.
        double f_sum = 0.0;
        int count = 0;
        for (const double frac : {0.01, 0.02, 0.03, 0.04, 0.05}) {
            const double h = frac * 0.5 * rig.mla.pitch;
            const Ray in{Vec3(center.x() + h, center.y(), 0.0), Vec3(0, 0, 1)};
            const TraceResult res = cam.trace_through_camera(in);
            REQUIRE(res.exited);
            const double t_cross = (center.x() - res.world.origin.x()) / res.world.dir.x();
            f_sum += res.world.origin.z() + t_cross * res.world.dir.z() - z_front;
            ++count;
        }
        const double f_measured = f_sum / count;
        CHECK(std::abs(f_measured - f_expected) / f_expected < 0.01);
    }
}

TEST_CASE("trace_through_camera: gap between microlenses blocks")
{
    CameraRig rig = mla_only_rig();
    const Camera cam(rig);
    // Hexagon corner: equidistant from (0,0), (1,0) and (0,1), beyond pitch/2.
    const Vec2 corner(0.5 * rig.mla.pitch, rig.mla.pitch / (2.0 * std::sqrt(3.0)));
    const Ray in{Vec3(corner.x(), corner.y(), 0.0), Vec3(0, 0, 1)};
    const TraceResult res = cam.trace_through_camera(in);
    CHECK_FALSE(res.exited);
    CHECK(res.reason == BlockReason::MlaGap);

    rig.mla.gap_passthrough = true;
    const Camera cam2(rig);
    const TraceResult res2 = cam2.trace_through_camera(in);
    REQUIRE(res2.exited);
    CHECK((res2.world.dir - Vec3(0, 0, 1)).norm() == 0.0);
}

TEST_CASE("trace_pixel: fully occluded pixel counts all samples as blocked")
{
    CameraRig rig = null_rig();
    rig.objective.stop.radius = 0.0;
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 1);
    const SampleBatch batch = cam.trace_pixel(grid, 4, 4, 256, 9);
    CHECK(batch.rays_world.empty());
    CHECK(batch.blocked_count == 256);
}

TEST_CASE("trace_pixel: pinhole rig passes all exits near the pinhole point")
{
    const CameraRig rig = pinhole_rig();
    const Camera cam(rig);
    const PixelGrid grid = make_pixel_grid(rig.sensor, 1);
    const Vec3 pin(0, 0, rig.objective_z0() + rig.objective.stop.axial_position);
    int exits = 0;
    for (int px : {0, 7, 15}) {
        const SampleBatch batch = cam.trace_pixel(grid, px, 11, 64, 3);
        for (const Ray& r : batch.rays_world) {
            const Vec3 rel = pin - r.origin;
            const double miss = (rel - rel.dot(r.dir) * r.dir).norm();
            CHECK(miss < 1.1 * rig.objective.stop.radius);
            ++exits;
        }
    }
    CHECK(exits > 0);
}

TEST_CASE("trace_pixel: sample accounting holds for random pixels and rigs")
{
    const CameraRig rigs[] = {null_rig(), mla_only_rig(), pinhole_rig()};
    for (const CameraRig& rig : rigs) {
        const Camera cam(rig);
        for (int scale : {1, 2}) {
            const PixelGrid grid = make_pixel_grid(rig.sensor, scale);
            Pcg32 rng(42, 7);
            for (int trial = 0; trial < 1500; ++trial) {
                const int px = int(rng.next_double() * grid.width);
                const int py = int(rng.next_double() * grid.height);
                const int n = 1 + int(rng.next_double() * 32);
                const SampleBatch batch = cam.trace_pixel(grid, px, py, n, trial);
                REQUIRE(int(batch.rays_world.size()) + batch.blocked_count == n);
            }
        }
    }
}

TEST_CASE("trace_through_camera: chief rays are antisymmetric about the axis")
{
    CameraRig rig;
    rig.sensor = small_sensor();
    rig.objective.distance_to_mla = 102.0;
    SphericalSurface front;
    front.axial_position = 0.0;
    front.radius = 100.0;
    front.aperture_radius = 4.0;
    front.ior_before = 1.0;
    front.ior_after = 1.5;
    SphericalSurface back = front;
    back.axial_position = 1.0;
    back.radius = -100.0;
    back.ior_before = 1.5;
    back.ior_after = 1.0;
    rig.objective.surfaces = {front, back};
    rig.objective.stop = {0.5, 3.0};
    const Camera cam(rig);

    const Vec3 stop_center(0, 0, rig.objective_z0() + 0.5);
    Pcg32 rng(17, 23);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 o(0.08 * (rng.next_double() - 0.5), 0.08 * (rng.next_double() - 0.5), 0.0);
        const Ray ray{o, (stop_center - o).normalized()};
        const Ray mirrored{-o, (stop_center + o).normalized()};
        const TraceResult a = cam.trace_through_camera(ray);
        const TraceResult b = cam.trace_through_camera(mirrored);
        REQUIRE(a.exited == b.exited);
        if (!a.exited) continue;
        CHECK((a.world.dir.head<2>() + b.world.dir.head<2>()).norm() < 1e-12);
        CHECK(std::abs(a.world.dir.z() - b.world.dir.z()) < 1e-12);
        CHECK((a.world.origin.head<2>() + b.world.origin.head<2>()).norm() < 1e-9);
    }
}
