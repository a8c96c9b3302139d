// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/camera.hpp"
#include "plenoray/extract.hpp"
#include "plenoray/pattern.hpp"
#include "plenoray/render.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plenoray {

struct PoseConfig {
    Vec3 center = Vec3::Zero();
    Vec3 rotation_deg = Vec3::Zero();
};

struct BoardConfig {
    PatternKind kind = PatternKind::Checkerboard;
    int rows = 0, cols = 0;
    double square_size = 0.0;  // square edge / dot spacing [mm]
    double dot_radius = 0.0;
    double margin = 0.0;
    Color background = Color::Zero();
    Color uniform_color = Color(0.5, 0.5, 0.5);
};

struct PlanesConfig {
    bool present = false;
    int fixed_axis = 2;  // config surface accepts z only
    double near_value = 0.0;
    double far_value = 0.0;
};

struct RunConfig {
    CameraRig rig;
    BoardConfig board;
    std::vector<PoseConfig> poses;
    RenderJob render;
    ExtractionConfig extraction;
    PlanesConfig planes;
    std::string rig_fingerprint;  // hash of the canonical camera section
};

struct ConfigLoadResult {
    std::optional<RunConfig> config;
    std::vector<std::string> violations;  // one named entry per invalid field

    bool ok() const { return violations.empty() && config.has_value(); }
};

// Parses and validates a JSON run configuration. All violations are
// collected and reported together.
ConfigLoadResult load_config(const std::string& path);
ConfigLoadResult parse_config(const std::string& json_text);

PatternBoard make_board(const RunConfig& config, size_t pose_index);
ProxyPlanePair make_planes(const RunConfig& config);

}  // namespace plenoray
