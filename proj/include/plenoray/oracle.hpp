// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/camera.hpp"
#include "plenoray/geometry.hpp"

#include <optional>

namespace plenoray {

/// Analytic central-projection reference used to verify extraction results
/// on rigs that degenerate to a pinhole.
struct PinholeOracle {
    Vec3 pinhole = Vec3::Zero();   // [mm]
    double image_distance = 1.0;   // pinhole to image plane [mm], > 0
    double pixel_pitch = 1.0;      // [mm]
    Vec2 principal = Vec2::Zero(); // [px]
};

// Projection of a 3D point through the pinhole onto the image plane at
// image_distance, in pixels.
inline Vec2 pinhole_project(const PinholeOracle& oracle, const Vec3& p)
{
    const double denom = oracle.pinhole.z() - p.z();
    const double f = oracle.image_distance / denom;
    return oracle.principal + Vec2((p.x() - oracle.pinhole.x()) * f,
                                   (p.y() - oracle.pinhole.y()) * f) /
                                  oracle.pixel_pitch;
}

// Builds the oracle for a rig that degenerates to a pinhole: MLA off, no
// diffusor spread, a single refracting objective surface, and a stop of at
// most 10 um radius behind it. Pixel rays then leave the sensor parallel to
// the axis and all pass (essentially) through the stop center, so the stop
// center acts as the pinhole and the refracting surface plane as the image
// plane, with sensor pixels mapped onto it orthographically.
std::optional<PinholeOracle> pinhole_oracle_from_rig(const CameraRig& rig);

}  // namespace plenoray
