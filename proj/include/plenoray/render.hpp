// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/camera.hpp"
#include "plenoray/image.hpp"
#include "plenoray/pattern.hpp"

#include <utility>

namespace plenoray {

/// One render invocation. Positional targets are rendered at
/// scale_k * sensor resolution; color always at sensor resolution.
struct RenderJob {
    int scale_k = 1;
    int samples = 1;
    uint64_t seed = 0;
};

// Mean shaded color over all samples of each pixel; blocked rays and rays
// that miss the board plane contribute zero and the mean is over the full
// sample count, so vignetting darkens the image.
FloatImage render_color(const Camera& camera, const PatternBoard& board, const RenderJob& job);

// Packed positional image: ch0 = sum(u)/|R|, ch1 = sum(v)/|R|,
// ch2 = |R_hit|/|R| where a hit requires leaving the camera and meeting the
// target plane in forward direction. Accumulation in double, stored float32.
FloatImage render_positional(const Camera& camera, const PlaneGeom& target, const RenderJob& job,
                             ImageSemantic semantic = ImageSemantic::UvwPositional);

// Divides the positional channels by the ray-proportion channel where it
// exceeds ratio_min (default 1/samples); other pixels become quiet NaN.
// The ratio channel is preserved.
FloatImage normalize_positional(const FloatImage& raw, double ratio_min = -1.0);

// Renders both proxy planes from one set of traced rays (identical sample
// rays by construction) and returns them normalized, with the fixed
// axis/value recorded in the metadata.
std::pair<FloatImage, FloatImage> render_proxy_planes(const Camera& camera,
                                                      const ProxyPlanePair& planes,
                                                      const RenderJob& job);

bool pixel_valid(const FloatImage& normalized, int x, int y);

}  // namespace plenoray
