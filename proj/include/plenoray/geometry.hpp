// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>

namespace plenoray {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Color = Eigen::Vector3d;

/// A ray with unit direction. All lengths are millimeters.
struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 dir = Vec3::UnitZ();

    Vec3 at(double t) const { return origin + t * dir; }
};

/// In-plane parametrization p(u,v) = a + u*b + v*c.
struct PlaneFrame {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::UnitX();
    Vec3 c = Vec3::UnitY();
};

/// Plane through q with unit normal n, optionally carrying a (u,v) frame.
struct PlaneGeom {
    Vec3 q = Vec3::Zero();
    Vec3 n = Vec3::UnitZ();
    std::optional<PlaneFrame> frame;
};

/// Spherical refracting interface centered on the optical (z) axis.
/// radius is the signed curvature radius with the center of curvature at
/// axial_position + radius; radius == 0 encodes a flat interface.
/// ior_before is the medium on the -z side, ior_after on the +z side.
struct SphericalSurface {
    double axial_position = 0.0;  // vertex z [mm]
    double radius = 0.0;          // signed, 0 = flat
    double aperture_radius = 1.0; // clear semi-diameter [mm]
    double ior_before = 1.0;
    double ior_after = 1.0;

    bool flat() const { return radius == 0.0; }
};

// Snell refraction with the precomputed index ratio eta1/eta2; see refract.
template <typename Scalar>
std::optional<Eigen::Matrix<Scalar, 3, 1>> refract_ratio(const Eigen::Matrix<Scalar, 3, 1>& dir,
                                                         const Eigen::Matrix<Scalar, 3, 1>& normal,
                                                         Scalar eta)
{
    Eigen::Matrix<Scalar, 3, 1> n = normal;
    Scalar cos1 = -n.dot(dir);
    if (cos1 < Scalar(0)) {
        n = -n;
        cos1 = -cos1;
    }
    const Scalar sin2_sq = eta * eta * (Scalar(1) - cos1 * cos1);
    if (sin2_sq > Scalar(1)) return std::nullopt;  // total internal reflection
    const Scalar cos2 = std::sqrt(Scalar(1) - sin2_sq);
    return (eta * dir + (eta * cos1 - cos2) * n).eval();
}

// Snell refraction of a unit direction at an interface with unit normal.
// eta1 is the index on the incident side, eta2 on the transmitted side.
// The normal may point to either side of the interface; it is reoriented
// against the incident direction. Returns nullopt on total internal
// reflection. The result is unit length and lies in the plane of incidence.
template <typename Scalar>
std::optional<Eigen::Matrix<Scalar, 3, 1>> refract(const Eigen::Matrix<Scalar, 3, 1>& dir,
                                                   const Eigen::Matrix<Scalar, 3, 1>& normal,
                                                   Scalar eta1, Scalar eta2)
{
    return refract_ratio(dir, normal, eta1 / eta2);
}

struct PlaneHit {
    double t = 0.0;
    Vec3 point = Vec3::Zero();
};

// Ray/plane intersection; nullopt for rays parallel to the plane and,
// with forward_only, for intersections behind the origin.
inline std::optional<PlaneHit> intersect_plane(const Ray& ray, const PlaneGeom& plane,
                                               bool forward_only = true)
{
    const double denom = ray.dir.dot(plane.n);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    const double t = (plane.q - ray.origin).dot(plane.n) / denom;
    if (forward_only && t < 0.0) return std::nullopt;
    return PlaneHit{t, ray.at(t)};
}

struct SurfaceHit {
    enum class Status { Hit, NoHit, Blocked };
    Status status = Status::NoHit;
    double t = 0.0;
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::Zero();  // oriented against the incoming ray
};

// Nearest forward intersection with the spherical cap (or flat disk) of the
// given clear aperture. Blocked means the ray crossed the interface outside
// the aperture, i.e. it hits the opaque mount.
inline SurfaceHit intersect_sphere_surface(const Ray& ray, const SphericalSurface& surf)
{
    SurfaceHit out;
    if (surf.flat()) {
        if (std::abs(ray.dir.z()) < 1e-12) return out;
        const double t = (surf.axial_position - ray.origin.z()) / ray.dir.z();
        if (t < 1e-12) return out;
        const Vec3 p = ray.at(t);
        out.t = t;
        out.point = p;
        out.normal = Vec3(0, 0, ray.dir.z() > 0 ? -1.0 : 1.0);
        out.status = (p.head<2>().squaredNorm() > surf.aperture_radius * surf.aperture_radius)
                         ? SurfaceHit::Status::Blocked
                         : SurfaceHit::Status::Hit;
        return out;
    }

    const Vec3 center(0.0, 0.0, surf.axial_position + surf.radius);
    const Vec3 oc = ray.origin - center;
    const double b = 2.0 * ray.dir.dot(oc);
    const double c = oc.squaredNorm() - surf.radius * surf.radius;
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double t0 = 0.5 * (-b - sq);
    const double t1 = 0.5 * (-b + sq);
    // Root on the hemisphere containing the vertex.
    const bool closer = (ray.dir.z() > 0.0) != (surf.radius < 0.0);
    const double t = closer ? t0 : t1;
    if (t < 1e-12) return out;
    const Vec3 p = ray.at(t);
    out.t = t;
    out.point = p;
    // p lies on the sphere, so |p - center| = |radius| exactly.
    Vec3 n = (p - center) * (1.0 / surf.radius);
    if (n.dot(ray.dir) > 0.0) n = -n;
    out.normal = n;
    out.status = (p.head<2>().squaredNorm() > surf.aperture_radius * surf.aperture_radius)
                     ? SurfaceHit::Status::Blocked
                     : SurfaceHit::Status::Hit;
    return out;
}

}  // namespace plenoray
