// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plenoray {

enum class ImageSemantic { Color, UvwPositional, PlanePositional, Ratio };

struct ImageMeta {
    ImageSemantic semantic = ImageSemantic::Color;
    uint64_t seed = 0;
    int samples = 0;
    int scale_k = 1;
    bool normalized = false;
    double ratio_min = 0.0;
    int fixed_axis = -1;       // plane-positional renders only
    double fixed_value = 0.0;
    std::string rig_fingerprint;
};

/// W x H x C float32 raster, row-major, top-left origin.
struct FloatImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;
    ImageMeta meta;

    FloatImage() = default;
    FloatImage(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c), data(size_t(w) * size_t(h) * size_t(c), fill)
    {
    }

    float& at(int x, int y, int c) { return data[(size_t(y) * width + x) * channels + c]; }
    float at(int x, int y, int c) const { return data[(size_t(y) * width + x) * channels + c]; }
    size_t pixel_count() const { return size_t(width) * size_t(height); }
};

}  // namespace plenoray
