// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/camera.hpp"

#include <algorithm>

namespace plenoray {

Camera::Camera(const CameraRig& rig) : rig_(rig)
{
    hex_.pitch = rig_.mla.pitch > 0.0 ? rig_.mla.pitch : 1.0;
    hex_.origin = rig_.mla.origin_offset;
    mla_front_z_ = rig_.mla_front_z();
    half_pitch_sq_ = 0.25 * rig_.mla.pitch * rig_.mla.pitch;

    const double z0 = rig_.objective_z0();
    elements_.reserve(rig_.objective.surfaces.size() + 1);
    for (const SphericalSurface& s : rig_.objective.surfaces) {
        Element el;
        el.surf = s;
        el.surf.axial_position += z0;
        el.eta_fwd = s.ior_before / s.ior_after;
        el.eta_rev = s.ior_after / s.ior_before;
        el.aperture_sq = s.aperture_radius * s.aperture_radius;
        el.inv_radius = s.flat() ? 0.0 : 1.0 / s.radius;
        elements_.push_back(el);
    }
    Element stop;
    stop.is_stop = true;
    stop.surf.axial_position = rig_.objective.stop.axial_position + z0;
    stop.stop_radius_sq = rig_.objective.stop.radius * rig_.objective.stop.radius;
    elements_.push_back(stop);
    std::stable_sort(elements_.begin(), elements_.end(),
                     [](const Element& a, const Element& b) {
                         return a.surf.axial_position < b.surf.axial_position;
                     });
}

}  // namespace plenoray
