// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/config.hpp"

#include "plenoray/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace plenoray {

using nlohmann::json;

namespace {

constexpr double kDeg = M_PI / 180.0;

class Validator {
  public:
    explicit Validator(std::vector<std::string>& out) : violations_(out) {}

    void fail(const std::string& field, const std::string& rule)
    {
        violations_.push_back(field + ": " + rule);
    }

    bool require(bool ok, const std::string& field, const std::string& rule)
    {
        if (!ok) fail(field, rule);
        return ok;
    }

  private:
    std::vector<std::string>& violations_;
};

Vec3 parse_vec3(const json& arr) { return Vec3(arr.at(0), arr.at(1), arr.at(2)); }

DiffusorDistribution parse_distribution(const std::string& s, Validator& val)
{
    if (s == "none") return DiffusorDistribution::None;
    if (s == "uniform-cone") return DiffusorDistribution::UniformCone;
    if (s == "cosine-cone") return DiffusorDistribution::CosineCone;
    val.fail("camera.sensor.diffusor_distribution",
             "must be one of none, uniform-cone, cosine-cone");
    return DiffusorDistribution::None;
}

void parse_sensor(const json& j, SensorSpec& sensor, Validator& val)
{
    sensor.width_px = j.value("width_px", 0);
    sensor.height_px = j.value("height_px", 0);
    sensor.pixel_pitch = j.value("pixel_pitch_mm", 0.0);
    sensor.diffusor_max_angle = j.value("diffusor_max_angle_deg", 0.0) * kDeg;
    sensor.diffusor_distribution =
        parse_distribution(j.value("diffusor_distribution", "none"), val);

    val.require(sensor.width_px >= 1, "camera.sensor.width_px", "must be >= 1");
    val.require(sensor.height_px >= 1, "camera.sensor.height_px", "must be >= 1");
    val.require(sensor.pixel_pitch > 0.0, "camera.sensor.pixel_pitch_mm", "must be > 0");
    val.require(sensor.diffusor_max_angle >= 0.0 && sensor.diffusor_max_angle < M_PI / 2,
                "camera.sensor.diffusor_max_angle_deg", "must be in [0, 90)");
}

void parse_mla(const json& j, MlaSpec& mla, Validator& val)
{
    mla.enabled = j.value("enabled", false);
    mla.distance_to_sensor = j.value("distance_to_sensor_mm", 0.0);
    mla.pitch = j.value("pitch_mm", 0.0);
    mla.thickness = j.value("thickness_mm", 0.0);
    mla.ior = j.value("ior", 1.5);
    if (j.contains("lens_radii_mm")) {
        const json& r = j["lens_radii_mm"];
        if (r.is_array()) {
            if (!val.require(r.size() == 3, "camera.mla.lens_radii_mm",
                             "must be a single radius or three radii"))
                return;
            mla.lens_radii = {r.at(0).get<double>(), r.at(1).get<double>(),
                              r.at(2).get<double>()};
        } else {
            const double radius = r.get<double>();
            mla.lens_radii = {radius, radius, radius};
        }
    }
    if (j.contains("origin_offset_mm"))
        mla.origin_offset = Vec2(j["origin_offset_mm"].at(0), j["origin_offset_mm"].at(1));
    mla.raytrix_constraint = j.value("raytrix_constraint", true);
    mla.gap_passthrough = j.value("gap_passthrough", false);

    if (!mla.enabled) return;
    val.require(mla.distance_to_sensor > 0.0, "camera.mla.distance_to_sensor_mm", "must be > 0");
    val.require(mla.pitch > 0.0, "camera.mla.pitch_mm", "must be > 0");
    val.require(mla.thickness >= 0.0, "camera.mla.thickness_mm", "must be >= 0");
    val.require(mla.ior > 1.0, "camera.mla.ior", "must be > 1");
    for (int t = 0; t < 3; ++t) {
        if (!val.require(mla.lens_radii[size_t(t)] > 0.0, "camera.mla.lens_radii_mm",
                         "each radius must be > 0"))
            return;
    }
    if (mla.raytrix_constraint && mla.ior > 1.0) {
        for (int t = 0; t < 3; ++t)
            val.require(mla.focal_length(t) > mla.distance_to_sensor, "camera.mla.lens_radii_mm",
                        "focal length of type " + std::to_string(t) +
                            " must exceed distance_to_sensor_mm (raytrix_constraint)");
    }
}

void parse_objective(const json& j, ObjectiveSpec& objective, Validator& val)
{
    objective.distance_to_mla = j.value("distance_to_mla_mm", 0.0);
    if (j.contains("stop")) {
        objective.stop.axial_position = j["stop"].value("axial_position_mm", 0.0);
        objective.stop.radius = j["stop"].value("radius_mm", 0.0);
    }
    val.require(objective.stop.radius > 0.0, "camera.objective.stop.radius_mm", "must be > 0");

    double prev = -std::numeric_limits<double>::infinity();
    size_t idx = 0;
    for (const json& js : j.value("surfaces", json::array())) {
        const std::string field = "camera.objective.surfaces[" + std::to_string(idx) + "]";
        SphericalSurface s;
        s.axial_position = js.value("axial_position_mm", 0.0);
        s.radius = js.value("radius_mm", 0.0);
        s.aperture_radius = js.value("aperture_radius_mm", 0.0);
        s.ior_before = js.value("ior_before", 1.0);
        s.ior_after = js.value("ior_after", 1.0);

        val.require(s.axial_position >= prev, field + ".axial_position_mm",
                    "surfaces must be ordered by axial position");
        prev = s.axial_position;
        val.require(s.aperture_radius > 0.0, field + ".aperture_radius_mm", "must be > 0");
        if (!s.flat())
            val.require(std::abs(s.radius) > s.aperture_radius, field + ".radius_mm",
                        "|radius| must exceed the aperture radius");
        val.require(std::isfinite(s.ior_before) && s.ior_before >= 1.0, field + ".ior_before",
                    "must be finite and >= 1");
        val.require(std::isfinite(s.ior_after) && s.ior_after >= 1.0, field + ".ior_after",
                    "must be finite and >= 1");
        objective.surfaces.push_back(s);
        ++idx;
    }
}

void parse_board(const json& j, BoardConfig& board, Validator& val)
{
    const std::string pattern = j.value("pattern", "checkerboard");
    if (pattern == "checkerboard")
        board.kind = PatternKind::Checkerboard;
    else if (pattern == "dot-grid")
        board.kind = PatternKind::DotGrid;
    else if (pattern == "uniform")
        board.kind = PatternKind::Uniform;
    else
        val.fail("scene.board.pattern", "must be checkerboard, dot-grid or uniform");

    board.rows = j.value("rows", 0);
    board.cols = j.value("cols", 0);
    board.square_size = j.value(board.kind == PatternKind::DotGrid ? "spacing_mm"
                                                                   : "square_size_mm",
                                0.0);
    board.dot_radius = j.value("dot_radius_mm", 0.0);
    board.margin = j.value("margin_mm", 0.0);
    if (j.contains("background")) board.background = parse_vec3(j["background"]);
    if (j.contains("color")) board.uniform_color = parse_vec3(j["color"]);

    if (board.kind == PatternKind::Checkerboard) {
        val.require(board.rows >= 2 && board.cols >= 2, "scene.board.rows",
                    "checkerboard needs rows, cols >= 2");
        val.require(board.square_size > 0.0, "scene.board.square_size_mm", "must be > 0");
    } else if (board.kind == PatternKind::DotGrid) {
        val.require(board.rows >= 1 && board.cols >= 1, "scene.board.rows",
                    "dot grid needs rows, cols >= 1");
        val.require(board.square_size > 0.0, "scene.board.spacing_mm", "must be > 0");
        val.require(board.dot_radius > 0.0, "scene.board.dot_radius_mm", "must be > 0");
    }
    val.require(board.margin >= 0.0, "scene.board.margin_mm", "must be >= 0");
}

}  // namespace

ConfigLoadResult parse_config(const std::string& text)
{
    ConfigLoadResult result;
    Validator val(result.violations);

    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        val.fail("<root>", std::string("JSON parse error: ") + e.what());
        return result;
    }

    RunConfig cfg;
    try {
        if (!root.contains("camera")) {
            val.fail("camera", "section is required");
            return result;
        }
        const json& camera = root["camera"];
        if (camera.contains("sensor"))
            parse_sensor(camera["sensor"], cfg.rig.sensor, val);
        else
            val.fail("camera.sensor", "section is required");
        if (camera.contains("mla")) parse_mla(camera["mla"], cfg.rig.mla, val);
        if (camera.contains("objective")) parse_objective(camera["objective"], cfg.rig.objective, val);
        cfg.rig_fingerprint = fnv1a_hex(camera.dump());

        if (root.contains("scene")) {
            const json& scene = root["scene"];
            if (scene.contains("board")) parse_board(scene["board"], cfg.board, val);
            for (const json& jp : scene.value("poses", json::array())) {
                PoseConfig pose;
                pose.center = parse_vec3(jp.at("center_mm"));
                if (jp.contains("rotation_deg")) pose.rotation_deg = parse_vec3(jp["rotation_deg"]);
                cfg.poses.push_back(pose);
            }
        }

        if (root.contains("render")) {
            const json& r = root["render"];
            cfg.render.scale_k = r.value("K", 1);
            cfg.render.samples = r.value("samples", 1);
            cfg.render.seed = r.value("seed", uint64_t(0));
            val.require(cfg.render.scale_k >= 1, "render.K", "must be >= 1");
            val.require(cfg.render.samples >= 1, "render.samples", "must be >= 1");
        }
        cfg.extraction.scale_k = cfg.render.scale_k;

        if (root.contains("extraction")) {
            const json& e = root["extraction"];
            if (e.contains("lambda_mm") && !e["lambda_mm"].is_string())
                cfg.extraction.lambda = e["lambda_mm"].get<double>();  // "auto" keeps -1
            cfg.extraction.lambda_d = e.value("lambda_d", 0.15);
            cfg.extraction.lambda_alpha = e.value("lambda_alpha_deg", 10.0) * kDeg;
            const std::string method = e.value("method", "direct");
            if (method == "direct")
                cfg.extraction.method = ExtractionMethod::Direct;
            else if (method == "two-plane")
                cfg.extraction.method = ExtractionMethod::TwoPlane;
            else
                val.fail("extraction.method", "must be direct or two-plane");
            cfg.extraction.filter_enabled = e.value("filter_enabled", true);

            val.require(cfg.extraction.lambda_d > 0.0 && cfg.extraction.lambda_d < 1.0,
                        "extraction.lambda_d", "must be in (0, 1)");
            val.require(cfg.extraction.lambda_alpha > 0.0 && cfg.extraction.lambda_alpha < M_PI,
                        "extraction.lambda_alpha_deg", "must be in (0, 180)");
        }

        if (root.contains("planes")) {
            const json& p = root["planes"];
            cfg.planes.present = true;
            cfg.planes.near_value = p.value("near_mm", 0.0);
            cfg.planes.far_value = p.value("far_mm", 0.0);
            const std::string axis = p.value("fixed_axis", "z");
            if (axis != "z")
                val.fail("planes.fixed_axis", "only z-fixed proxy planes are supported");
            val.require(cfg.planes.near_value != cfg.planes.far_value, "planes.near_mm",
                        "near and far planes must differ");
            val.require(cfg.planes.near_value < cfg.planes.far_value, "planes.near_mm",
                        "must be nearer than far_mm");
            // The near plane must lie beyond every camera element.
            double cam_extent = cfg.rig.objective_z0() + cfg.rig.objective.stop.axial_position;
            for (const auto& s : cfg.rig.objective.surfaces)
                cam_extent = std::max(cam_extent, cfg.rig.objective_z0() + s.axial_position);
            val.require(cfg.planes.near_value > cam_extent, "planes.near_mm",
                        "must lie strictly between the camera and the far plane");
        }
    } catch (const json::exception& e) {
        val.fail("<root>", std::string("schema error: ") + e.what());
        return result;
    }

    if (result.violations.empty()) result.config = std::move(cfg);
    return result;
}

ConfigLoadResult load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        ConfigLoadResult result;
        result.violations.push_back("<file>: cannot open " + path);
        return result;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

PatternBoard make_board(const RunConfig& config, size_t pose_index)
{
    const PoseConfig& p = config.poses.at(pose_index);
    const BoardPose pose = make_pose(p.center, p.rotation_deg);
    switch (config.board.kind) {
        case PatternKind::Checkerboard:
            return make_checkerboard(config.board.rows, config.board.cols,
                                     config.board.square_size, pose, config.board.margin,
                                     config.board.background);
        case PatternKind::DotGrid:
            return make_dot_grid(config.board.rows, config.board.cols, config.board.square_size,
                                 config.board.dot_radius, pose, config.board.margin,
                                 config.board.background);
        case PatternKind::Uniform:
        default:
            return make_uniform_board(config.board.uniform_color, pose, 1e6);
    }
}

ProxyPlanePair make_planes(const RunConfig& config)
{
    return make_proxy_planes(config.planes.fixed_axis, config.planes.near_value,
                             config.planes.far_value);
}

}  // namespace plenoray
