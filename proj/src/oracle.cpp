// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/oracle.hpp"

namespace plenoray {

std::optional<PinholeOracle> pinhole_oracle_from_rig(const CameraRig& rig)
{
    if (rig.mla.enabled) return std::nullopt;
    if (rig.sensor.diffusor_distribution != DiffusorDistribution::None &&
        rig.sensor.diffusor_max_angle > 0.0)
        return std::nullopt;

    const SphericalSurface* refracting = nullptr;
    for (const SphericalSurface& s : rig.objective.surfaces) {
        if (s.ior_before == s.ior_after) continue;  // null interface
        if (refracting) return std::nullopt;        // more than one refraction
        refracting = &s;
    }
    if (!refracting) return std::nullopt;
    if (rig.objective.stop.radius <= 0.0 || rig.objective.stop.radius > 0.01)
        return std::nullopt;

    const double z0 = rig.objective_z0();
    const double z_surface = z0 + refracting->axial_position;
    const double z_stop = z0 + rig.objective.stop.axial_position;
    if (z_stop <= z_surface) return std::nullopt;

    PinholeOracle oracle;
    oracle.pinhole = Vec3(0.0, 0.0, z_stop);
    oracle.image_distance = z_stop - z_surface;
    oracle.pixel_pitch = rig.sensor.pixel_pitch;
    oracle.principal = Vec2((rig.sensor.width_px - 1) * 0.5, (rig.sensor.height_px - 1) * 0.5);
    return oracle;
}

}  // namespace plenoray
