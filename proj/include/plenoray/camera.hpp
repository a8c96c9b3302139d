// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/geometry.hpp"
#include "plenoray/hexgrid.hpp"
#include "plenoray/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace plenoray {

enum class DiffusorDistribution { None, UniformCone, CosineCone };

/// Orthographic sensor behind a diffusor plane. The diffusor plane sits at
/// z = 0 and is where pixel rays originate; the diffusor perturbs their
/// direction within diffusor_max_angle of the optical (+z) axis, emulating a
/// pixel's field of view.
struct SensorSpec {
    int width_px = 0;
    int height_px = 0;
    double pixel_pitch = 0.0;        // [mm]
    double diffusor_max_angle = 0.0; // [rad], in [0, pi/2)
    DiffusorDistribution diffusor_distribution = DiffusorDistribution::None;

    double physical_width() const { return width_px * pixel_pitch; }
    double physical_height() const { return height_px * pixel_pitch; }
};

/// Hexagonally packed microlens array, modeled as two parallel planes:
/// the back plane (sensor side) is a pass-through bookkeeping plane, all
/// refractive power lives in a single event at the front plane, using the
/// normal of a sphere of radius lens_radii[type] centered on the lens axis.
/// That reproduces a thin plano-convex lens with focal length R/(ior - 1).
struct MlaSpec {
    bool enabled = false;
    double distance_to_sensor = 0.0;          // sensor to back plane [mm]
    double pitch = 0.0;                       // lens pitch [mm]
    double thickness = 0.0;                   // back to front plane [mm]
    double ior = 1.5;
    std::array<double, 3> lens_radii = {0, 0, 0};  // R per lens type [mm]
    Vec2 origin_offset = Vec2::Zero();        // lattice origin on the MLA plane [mm]
    bool raytrix_constraint = true;           // require f_t > distance_to_sensor
    bool gap_passthrough = false;             // pass rays between lens apertures unrefracted

    double focal_length(int type) const { return lens_radii[size_t(type)] / (ior - 1.0); }
};

struct ApertureStop {
    double axial_position = 0.0;  // objective-local z [mm]
    double radius = 0.0;          // [mm]
};

/// Fully modeled objective: an ordered stack of spherical interfaces plus an
/// aperture stop, in objective-local coordinates. Local z = 0 is placed
/// distance_to_mla beyond the MLA front plane (or beyond the sensor when the
/// MLA is disabled).
struct ObjectiveSpec {
    std::vector<SphericalSurface> surfaces;  // ascending axial_position
    ApertureStop stop;
    double distance_to_mla = 0.0;  // [mm]
};

struct CameraRig {
    SensorSpec sensor;
    MlaSpec mla;
    ObjectiveSpec objective;

    double mla_back_z() const { return mla.distance_to_sensor; }
    double mla_front_z() const { return mla.distance_to_sensor + mla.thickness; }
    double objective_z0() const
    {
        return (mla.enabled ? mla_front_z() : 0.0) + objective.distance_to_mla;
    }
};

/// Raster-to-sensor-plane mapping, shared by rendering and extraction.
/// Pixel centers of the base raster sit at integer coordinates with the
/// origin at the top-left pixel center; i is the column (x, rightward),
/// j the row (y, downward). A raster scaled by K has K*width x K*height
/// pixels whose centers sit at base coordinates (i/K, j/K), so a position
/// in a scaled raster maps to base-image pixels by plain division by K.
struct PixelGrid {
    int width = 0;        // raster width (K * base width)
    int height = 0;
    int scale = 1;        // K
    double base_pitch = 0.0;
    double cx = 0.0;      // principal point, base-pixel units
    double cy = 0.0;

    Vec2 pixel_center(int i, int j) const
    {
        return {(double(i) / scale - cx) * base_pitch, (double(j) / scale - cy) * base_pitch};
    }
    double footprint() const { return base_pitch / scale; }
};

inline PixelGrid make_pixel_grid(const SensorSpec& sensor, int scale_k)
{
    PixelGrid g;
    g.width = sensor.width_px * scale_k;
    g.height = sensor.height_px * scale_k;
    g.scale = scale_k;
    g.base_pitch = sensor.pixel_pitch;
    g.cx = (sensor.width_px - 1) * 0.5;
    g.cy = (sensor.height_px - 1) * 0.5;
    return g;
}

enum class BlockReason { None, MlaGap, Stop, Mount, Tir };

struct TraceResult {
    bool exited = false;
    BlockReason reason = BlockReason::None;
    Ray world;  // valid when exited
};

/// Per-pixel bundle after tracing: the rays that left the camera plus the
/// count of blocked ones; their sum is always the requested sample count.
struct SampleBatch {
    int px = 0, py = 0;
    std::vector<Ray> rays_world;
    int blocked_count = 0;
};

// Deterministic sensor-side sample generation: origins are stratified over
// the pixel's footprint on the diffusor plane (ceil(sqrt(n))^2 strata,
// truncated to n, row-major), directions drawn from the diffusor
// distribution. Each sample is a pure function of (seed, pixel, index).
template <typename Fn>
void visit_pixel_samples(const SensorSpec& sensor, const PixelGrid& grid, int px, int py, int n,
                         uint64_t seed, Fn&& fn)
{
    const Vec2 center = grid.pixel_center(px, py);
    const double fp = grid.footprint();
    const int m = static_cast<int>(std::ceil(std::sqrt(double(n))));
    const uint64_t pixel_key = mix64(seed ^ mix64((uint64_t(uint32_t(px)) << 32) | uint32_t(py)));

    const double cos_max = std::cos(sensor.diffusor_max_angle);
    const double sin2_max = 1.0 - cos_max * cos_max;
    const double inv_m = 1.0 / m;

    int sx = 0, sy = 0;
    for (int s = 0; s < n; ++s) {
        Pcg32 rng(pixel_key, uint64_t(s));
        const double jx = rng.next_double();
        const double jy = rng.next_double();
        Ray ray;
        ray.origin = Vec3(center.x() + fp * ((sx + jx) * inv_m - 0.5),
                          center.y() + fp * ((sy + jy) * inv_m - 0.5), 0.0);
        if (++sx == m) {
            sx = 0;
            ++sy;
        }
        switch (sensor.diffusor_distribution) {
            case DiffusorDistribution::None:
                ray.dir = Vec3::UnitZ();
                break;
            case DiffusorDistribution::UniformCone: {
                const double cos_t = 1.0 - rng.next_double() * (1.0 - cos_max);
                const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
                const double phi = 2.0 * M_PI * rng.next_double();
                ray.dir = Vec3(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
                break;
            }
            case DiffusorDistribution::CosineCone: {
                const double sin2 = rng.next_double() * sin2_max;
                const double sin_t = std::sqrt(sin2);
                const double cos_t = std::sqrt(1.0 - sin2);
                const double phi = 2.0 * M_PI * rng.next_double();
                ray.dir = Vec3(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
                break;
            }
        }
        fn(ray);
    }
}

/// Traceable camera assembled from a rig. Immutable after construction and
/// shareable across threads; all tracing is pure.
class Camera {
  public:
    explicit Camera(const CameraRig& rig);

    const CameraRig& rig() const { return rig_; }
    const HexGrid& hex_grid() const { return hex_; }

    // Traces one sensor-side ray out of the camera, mutating it in place.
    // Sequential refraction only: MLA front-plane event first (if enabled),
    // then every objective interface in axial order, with the stop applied
    // between them. The ray is meaningful only when BlockReason::None comes
    // back. This is the innermost rendering loop; it avoids any temporary
    // result structs.
    BlockReason trace_inplace(Ray& ray) const
    {
        if (ray.dir.z() <= 1e-12) return BlockReason::Mount;

        if (rig_.mla.enabled) {
            // Back plane: bookkeeping only, no refraction.
            const double t_front = (mla_front_z_ - ray.origin.z()) / ray.dir.z();
            const Vec3 p = ray.at(t_front);
            const HexIndex cell = nearest_lens_center(p.head<2>(), hex_);
            const Vec2 c = hex_.center(cell);
            const double r2 = (p.head<2>() - c).squaredNorm();
            if (r2 > half_pitch_sq_) {
                if (!rig_.mla.gap_passthrough) return BlockReason::MlaGap;
                ray.origin = p;
            } else {
                const int type = microlens_type(cell);
                const double radius = rig_.mla.lens_radii[size_t(type)];
                // Normal of the lens sphere evaluated at the front plane.
                const Vec3 sphere_center(c.x(), c.y(), mla_front_z_ - radius);
                Vec3 normal = p - sphere_center;
                normal *= 1.0 / normal.norm();
                ray.origin = p;
                if (!refract_inplace(ray.dir, normal, rig_.mla.ior)) return BlockReason::Tir;
            }
        }

        for (const Element& el : elements_) {
            if (std::abs(ray.dir.z()) < 1e-12) return BlockReason::Mount;
            if (el.is_stop) {
                const double t = (el.surf.axial_position - ray.origin.z()) / ray.dir.z();
                if (t < 1e-12) return BlockReason::Mount;
                const Vec3 p = ray.at(t);
                if (p.head<2>().squaredNorm() > el.stop_radius_sq) return BlockReason::Stop;
                ray.origin = p;
                continue;
            }

            if (el.surf.flat()) {
                const double t = (el.surf.axial_position - ray.origin.z()) / ray.dir.z();
                if (t < 1e-12) return BlockReason::Mount;
                const Vec3 p = ray.at(t);
                if (p.head<2>().squaredNorm() > el.aperture_sq) return BlockReason::Mount;
                ray.origin = p;
                if (el.eta_fwd != 1.0) {
                    const Vec3 normal(0.0, 0.0, ray.dir.z() > 0 ? -1.0 : 1.0);
                    const double eta = ray.dir.z() >= 0.0 ? el.eta_fwd : el.eta_rev;
                    if (!refract_inplace(ray.dir, normal, eta)) return BlockReason::Tir;
                }
                continue;
            }

            // Spherical interface; same math as intersect_sphere_surface.
            const Vec3 center(0.0, 0.0, el.surf.axial_position + el.surf.radius);
            const Vec3 oc = ray.origin - center;
            const double b = 2.0 * ray.dir.dot(oc);
            const double c = oc.squaredNorm() - el.surf.radius * el.surf.radius;
            const double disc = b * b - 4.0 * c;
            if (disc < 0.0) return BlockReason::Mount;
            const double sq = std::sqrt(disc);
            const bool closer = (ray.dir.z() > 0.0) != (el.surf.radius < 0.0);
            const double t = closer ? 0.5 * (-b - sq) : 0.5 * (-b + sq);
            if (t < 1e-12) return BlockReason::Mount;
            const Vec3 p = ray.at(t);
            if (p.head<2>().squaredNorm() > el.aperture_sq) return BlockReason::Mount;
            ray.origin = p;
            if (el.eta_fwd != 1.0) {
                Vec3 normal = (p - center) * el.inv_radius;
                if (normal.dot(ray.dir) > 0.0) normal = -normal;
                const double eta = ray.dir.z() >= 0.0 ? el.eta_fwd : el.eta_rev;
                if (!refract_inplace(ray.dir, normal, eta)) return BlockReason::Tir;
            }
        }
        return BlockReason::None;
    }

    TraceResult trace_through_camera(const Ray& sensor_ray) const
    {
        TraceResult res;
        res.world = sensor_ray;
        res.reason = trace_inplace(res.world);
        res.exited = res.reason == BlockReason::None;
        return res;
    }

    template <typename Fn>  // Fn(const TraceResult&)
    void trace_pixel_visit(const PixelGrid& grid, int px, int py, int n, uint64_t seed,
                           Fn&& fn) const
    {
        TraceResult res;
        visit_pixel_samples(rig_.sensor, grid, px, py, n, seed, [&](const Ray& r) {
            res.world = r;
            res.reason = trace_inplace(res.world);
            res.exited = res.reason == BlockReason::None;
            fn(res);
        });
    }

    std::vector<Ray> generate_pixel_samples(const PixelGrid& grid, int px, int py, int n,
                                            uint64_t seed) const
    {
        std::vector<Ray> rays;
        rays.reserve(size_t(n));
        visit_pixel_samples(rig_.sensor, grid, px, py, n, seed,
                            [&](const Ray& r) { rays.push_back(r); });
        return rays;
    }

    SampleBatch trace_pixel(const PixelGrid& grid, int px, int py, int n, uint64_t seed) const
    {
        SampleBatch batch;
        batch.px = px;
        batch.py = py;
        trace_pixel_visit(grid, px, py, n, seed, [&](const TraceResult& tr) {
            if (tr.exited)
                batch.rays_world.push_back(tr.world);
            else
                ++batch.blocked_count;
        });
        return batch;
    }

  private:
    struct Element {
        bool is_stop = false;
        SphericalSurface surf;      // world coordinates
        double stop_radius_sq = 0;  // stops only
        double eta_fwd = 1.0;       // ior_before / ior_after
        double eta_rev = 1.0;
        double aperture_sq = 0.0;
        double inv_radius = 0.0;
    };

    static bool refract_inplace(Vec3& dir, const Vec3& normal, double eta)
    {
        const auto refr = refract_ratio<double>(dir, normal, eta);
        if (!refr) return false;
        dir = *refr;
        return true;
    }

    CameraRig rig_;
    HexGrid hex_;
    double mla_front_z_ = 0.0;
    double half_pitch_sq_ = 0.0;
    std::vector<Element> elements_;
};

}  // namespace plenoray
