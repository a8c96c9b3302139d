// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: renders calibration-pattern images through a fully
// modeled conventional or plenoptic camera and recovers sub-pixel ground
// truth for the pattern's points of interest.

#include "plenoray/config.hpp"
#include "plenoray/io.hpp"
#include "plenoray/oracle.hpp"
#include "plenoray/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

using namespace plenoray;
using nlohmann::json;

namespace {

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig load_config_or_throw(const std::string& path)
{
    ConfigLoadResult result = load_config(path);
    if (!result.ok()) {
        json err;
        err["error"] = "config";
        err["violations"] = result.violations;
        throw CliError(err.dump());
    }
    return std::move(*result.config);
}

void apply_overrides(RunConfig& cfg, int scale_k, int64_t seed)
{
    if (scale_k > 0) {
        cfg.render.scale_k = scale_k;
        cfg.extraction.scale_k = scale_k;
    }
    if (seed >= 0) cfg.render.seed = uint64_t(seed);
}

PatternBoard board_at(const RunConfig& cfg, int pose)
{
    if (pose < 0 || size_t(pose) >= cfg.poses.size()) {
        json err;
        err["error"] = "pose index out of range";
        err["poses"] = cfg.poses.size();
        throw CliError(err.dump());
    }
    return make_board(cfg, size_t(pose));
}

double seconds_since(const std::chrono::steady_clock::time_point& t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_fingerprint(const RunConfig& cfg, const FloatImage& img, const std::string& path)
{
    if (img.meta.rig_fingerprint.empty()) return;
    if (img.meta.rig_fingerprint != cfg.rig_fingerprint) {
        json err;
        err["error"] = "rig fingerprint mismatch";
        err["image"] = path;
        err["image_fingerprint"] = img.meta.rig_fingerprint;
        err["config_fingerprint"] = cfg.rig_fingerprint;
        throw CliError(err.dump());
    }
}

int run(int argc, char** argv)
{
    CLI::App app{"camera simulation and calibration ground-truth toolkit"};
    app.require_subcommand(1);

    std::string config_path, pose_out, out_path, out_near, out_far;
    std::string positional_path, near_path, far_path, method = "direct";
    std::string a_path, b_path, report_path;
    int pose = 0;
    int scale_k = -1;
    int64_t seed = -1;

    auto add_common = [&](CLI::App* cmd, bool with_pose) {
        cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
        if (with_pose) cmd->add_option("--pose", pose, "board pose index");
        cmd->add_option("--seed", seed, "override the configured render seed");
    };

    CLI::App* render_color_cmd = app.add_subcommand("render-color", "render the color image I");
    add_common(render_color_cmd, true);
    render_color_cmd->add_option("--out", out_path, "output PFM")->required();

    CLI::App* render_pos_cmd =
        app.add_subcommand("render-positional", "render the packed positional image of the board");
    add_common(render_pos_cmd, true);
    render_pos_cmd->add_option("-K,--scale", scale_k, "resolution scale of the positional image");
    render_pos_cmd->add_option("--out", out_path, "output PFM")->required();

    CLI::App* render_planes_cmd =
        app.add_subcommand("render-planes", "render the normalized proxy-plane images");
    add_common(render_planes_cmd, false);
    render_planes_cmd->add_option("-K,--scale", scale_k, "resolution scale");
    render_planes_cmd->add_option("--out-near", out_near, "near-plane PFM")->required();
    render_planes_cmd->add_option("--out-far", out_far, "far-plane PFM")->required();

    CLI::App* extract_cmd =
        app.add_subcommand("extract", "recover sub-pixel ground-truth correspondences");
    add_common(extract_cmd, true);
    extract_cmd->add_option("--method", method, "direct | two-plane");
    extract_cmd->add_option("--positional", positional_path, "board positional image (direct)");
    extract_cmd->add_option("--near", near_path, "near-plane image (two-plane)");
    extract_cmd->add_option("--far", far_path, "far-plane image (two-plane)");
    extract_cmd->add_option("--out", out_path, "output CSV")->required();

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "pixel statistics between two correspondence sets");
    compare_cmd->add_option("--a", a_path, "first CSV")->required();
    compare_cmd->add_option("--b", b_path, "second CSV")->required();
    compare_cmd->add_option("--report", report_path, "JSON report path")->required();

    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "analytic projection reference for pinhole-degenerate configs");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--out", out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);
    const auto t0 = std::chrono::steady_clock::now();

    if (render_color_cmd->parsed()) {
        RunConfig cfg = load_config_or_throw(config_path);
        apply_overrides(cfg, scale_k, seed);
        const Camera camera(cfg.rig);
        const PatternBoard board = board_at(cfg, pose);
        FloatImage img = render_color(camera, board, cfg.render);
        img.meta.rig_fingerprint = cfg.rig_fingerprint;
        write_image(out_path, img);
        std::cout << "wrote " << out_path << " (" << img.width << "x" << img.height << ", "
                  << cfg.render.samples << " spp, " << seconds_since(t0) << " s)\n";
        return 0;
    }

    if (render_pos_cmd->parsed()) {
        RunConfig cfg = load_config_or_throw(config_path);
        apply_overrides(cfg, scale_k, seed);
        const Camera camera(cfg.rig);
        const PatternBoard board = board_at(cfg, pose);
        FloatImage img = render_positional(camera, board.plane, cfg.render);
        img.meta.rig_fingerprint = cfg.rig_fingerprint;
        write_image(out_path, img);
        std::cout << "wrote " << out_path << " (" << img.width << "x" << img.height << ", K="
                  << cfg.render.scale_k << ", " << cfg.render.samples << " spp, "
                  << seconds_since(t0) << " s)\n";
        return 0;
    }

    if (render_planes_cmd->parsed()) {
        RunConfig cfg = load_config_or_throw(config_path);
        apply_overrides(cfg, scale_k, seed);
        if (!cfg.planes.present) throw CliError(R"({"error":"config has no planes section"})");
        const Camera camera(cfg.rig);
        auto [near, far] = render_proxy_planes(camera, make_planes(cfg), cfg.render);
        near.meta.rig_fingerprint = cfg.rig_fingerprint;
        far.meta.rig_fingerprint = cfg.rig_fingerprint;
        write_image(out_near, near);
        write_image(out_far, far);
        std::cout << "wrote " << out_near << ", " << out_far << " (" << near.width << "x"
                  << near.height << ", K=" << cfg.render.scale_k << ", " << cfg.render.samples
                  << " spp, " << seconds_since(t0) << " s)\n";
        return 0;
    }

    if (extract_cmd->parsed()) {
        RunConfig cfg = load_config_or_throw(config_path);
        apply_overrides(cfg, scale_k, seed);
        const PatternBoard board = board_at(cfg, pose);
        ExtractionConfig ex = cfg.extraction;
        if (method == "direct")
            ex.method = ExtractionMethod::Direct;
        else if (method == "two-plane")
            ex.method = ExtractionMethod::TwoPlane;
        else
            throw CliError(R"({"error":"method must be direct or two-plane"})");

        FloatImage j;
        if (ex.method == ExtractionMethod::Direct) {
            if (positional_path.empty())
                throw CliError(R"({"error":"direct extraction needs --positional"})");
            FloatImage packed = read_image(positional_path);
            check_fingerprint(cfg, packed, positional_path);
            j = packed.meta.normalized ? std::move(packed) : normalize_positional(packed);
        } else {
            if (near_path.empty() || far_path.empty())
                throw CliError(R"({"error":"two-plane extraction needs --near and --far"})");
            const FloatImage near = read_image(near_path);
            const FloatImage far = read_image(far_path);
            check_fingerprint(cfg, near, near_path);
            check_fingerprint(cfg, far, far_path);
            if (near.meta.scale_k != far.meta.scale_k || near.width != far.width ||
                near.height != far.height)
                throw CliError(R"({"error":"near/far images disagree in size or K"})");
            if (!near.meta.normalized || !far.meta.normalized ||
                near.meta.fixed_axis < 0 || far.meta.fixed_axis < 0)
                throw CliError(R"({"error":"near/far must be normalized plane-positional images"})");
            j = positional_from_planes(near, far, board);
        }
        ex.scale_k = j.meta.scale_k;

        const MicrolensSplit split = split_microlens_images(cfg.rig, ex.scale_k);
        const ExtractionResult result = extract(j, board, split, ex);
        write_correspondences(out_path, result.correspondences);
        std::cout << "wrote " << out_path << " (" << result.correspondences.size()
                  << " correspondences, " << result.rejections.size() << " rejections, "
                  << seconds_since(t0) << " s)\n";
        return 0;
    }

    if (compare_cmd->parsed()) {
        const auto a = read_correspondences(a_path);
        const auto b = read_correspondences(b_path);
        const CompareStats stats = compare_correspondences(a, b);
        json report;
        report["matched"] = stats.matched;
        report["only_a"] = stats.only_a;
        report["only_b"] = stats.only_b;
        report["mean_abs_px"] = stats.mean_abs_px;
        report["sem_px"] = stats.sem_px;
        report["max_abs_px"] = stats.max_abs_px;
        report["mean_dx"] = stats.mean_dx;
        report["mean_dy"] = stats.mean_dy;
        report["ratio_a"] = stats.ratio_a;
        report["ratio_b"] = stats.ratio_b;
        std::ofstream out(report_path);
        if (!out) throw CliError(R"({"error":"cannot write report"})");
        out << report.dump(2) << "\n";
        std::cout << "matched " << stats.matched << ", mean |d| = " << stats.mean_abs_px
                  << " px, SEM = " << stats.sem_px << " px\n";
        return 0;
    }

    if (oracle_cmd->parsed()) {
        RunConfig cfg = load_config_or_throw(config_path);
        const PatternBoard board = board_at(cfg, pose);
        const auto oracle = pinhole_oracle_from_rig(cfg.rig);
        if (!oracle)
            throw CliError(
                "{\"error\":\"config does not degenerate to a pinhole (needs MLA off, no "
                "diffusor spread, one refracting surface, stop radius <= 0.01 mm)\"}");
        std::vector<Correspondence> records;
        for (size_t k = 0; k < board.points_of_interest.size(); ++k) {
            Correspondence c;
            c.k = int(k);
            c.pixel = pinhole_project(*oracle, board.points_of_interest[k]);
            c.world = board.points_of_interest[k];
            c.board_uv = board.points_uv[k];
            c.diag.filter_passed = true;
            records.push_back(c);
        }
        write_correspondences(out_path, records);
        std::cout << "wrote " << out_path << " (" << records.size() << " projected points)\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
}
