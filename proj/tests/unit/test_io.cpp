// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/io.hpp"

#include "plenoray/config.hpp"
#include "plenoray/oracle.hpp"
#include "plenoray/rng.hpp"

#include <doctest.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace plenoray;

namespace {

std::string temp_file(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "plenoray_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

const char* kMinimalConfig = R"json({
  "version": 1,
  "camera": {
    "sensor": {"width_px": 32, "height_px": 32, "pixel_pitch_mm": 0.01,
               "diffusor_max_angle_deg": 0.0, "diffusor_distribution": "none"},
    "objective": {
      "distance_to_mla_mm": 10.0,
      "stop": {"axial_position_mm": 400.0, "radius_mm": 0.001},
      "surfaces": [
        {"axial_position_mm": 0.0, "radius_mm": -200.0, "aperture_radius_mm": 3.0,
         "ior_before": 1.5, "ior_after": 1.0}
      ]
    }
  },
  "scene": {
    "board": {"pattern": "checkerboard", "rows": 5, "cols": 8, "square_size_mm": 2.4,
              "margin_mm": 2.4},
    "poses": [{"center_mm": [0, 0, 4410.0], "rotation_deg": [4.0, -3.0, 2.0]}]
  },
  "render": {"K": 2, "samples": 256, "seed": 7},
  "extraction": {"lambda_mm": "auto", "lambda_d": 0.15, "lambda_alpha_deg": 10.0,
                 "method": "direct", "filter_enabled": true},
  "planes": {"near_mm": 3000.0, "far_mm": 6000.0}
})json";

}  // namespace

TEST_CASE("PFM round trip is bit-exact")
{
    FloatImage img(7, 5, 3);
    img.meta.semantic = ImageSemantic::UvwPositional;
    img.meta.seed = 123456789ull;
    img.meta.samples = 4096;
    img.meta.scale_k = 4;
    img.meta.normalized = true;
    img.meta.ratio_min = 1.0 / 4096;
    img.meta.rig_fingerprint = "deadbeef00112233";
    Pcg32 rng(1, 1);
    for (float& v : img.data) v = float(2000.0 * (rng.next_double() - 0.5));
    img.data[3] = std::numeric_limits<float>::quiet_NaN();

    const std::string path = temp_file("roundtrip.pfm");
    write_image(path, img);
    const FloatImage back = read_image(path);

    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    REQUIRE(back.channels == img.channels);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const uint32_t a = std::bit_cast<uint32_t>(img.data[i]);
        const uint32_t b = std::bit_cast<uint32_t>(back.data[i]);
        REQUIRE(a == b);
    }
    CHECK(back.meta.semantic == ImageSemantic::UvwPositional);
    CHECK(back.meta.seed == 123456789ull);
    CHECK(back.meta.samples == 4096);
    CHECK(back.meta.scale_k == 4);
    CHECK(back.meta.normalized);
    CHECK(back.meta.rig_fingerprint == "deadbeef00112233");
}

TEST_CASE("PFM payload of a 1x1 3-channel image is 12 bytes")
{
    FloatImage img(1, 1, 3);
    img.at(0, 0, 0) = 1.0f;
    const std::string path = temp_file("tiny.pfm");
    write_image(path, img);
    const auto size = std::filesystem::file_size(path);
    const std::string header = "PF\n1 1\n-1.0\n";
    CHECK(size == header.size() + 12);
}

TEST_CASE("single-channel PFM uses the Pf magic")
{
    FloatImage img(3, 2, 1);
    img.meta.semantic = ImageSemantic::Ratio;
    for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = float(i);
    const std::string path = temp_file("gray.pfm");
    write_image(path, img);
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "Pf");
    const FloatImage back = read_image(path);
    CHECK(back.channels == 1);
    CHECK(back.data == img.data);
}

TEST_CASE("plane-positional sidecar carries the fixed coordinate")
{
    FloatImage img(2, 2, 3);
    img.meta.semantic = ImageSemantic::PlanePositional;
    img.meta.fixed_axis = 2;
    img.meta.fixed_value = 750.5;
    img.meta.normalized = true;
    const std::string path = temp_file("plane.pfm");
    write_image(path, img);
    const FloatImage back = read_image(path);
    CHECK(back.meta.fixed_axis == 2);
    CHECK(back.meta.fixed_value == 750.5);
    // Reattached as the third coordinate of reconstructed points.
    CHECK(plane_point(back, 0, 0).z() == 750.5);
}

TEST_CASE("correspondence CSV round trip and ordering")
{
    std::vector<Correspondence> records;
    Correspondence c;
    c.k = 3;
    c.lens = HexIndex{2, -1};
    c.lens_type = microlens_type(*c.lens);
    c.pixel = Vec2(12.345678901, 0.000123456789);
    c.world = Vec3(1.0 / 3.0, -2.5, 4410.0);
    c.board_uv = Vec2(2.4, 7.2);
    c.method = ExtractionMethod::TwoPlane;
    c.diag.filter_passed = true;
    records.push_back(c);
    c.k = 1;
    c.lens = HexIndex{0, 4};
    c.method = ExtractionMethod::Direct;
    records.push_back(c);

    const std::string path = temp_file("gt.csv");
    write_correspondences(path, records);
    const auto back = read_correspondences(path);
    REQUIRE(back.size() == 2);
    // Sorted by (lens_i, lens_j, k).
    CHECK(back[0].lens == HexIndex{0, 4});
    CHECK(back[1].lens == HexIndex{2, -1});
    CHECK(back[1].k == 3);
    CHECK(back[1].method == ExtractionMethod::TwoPlane);
    CHECK(back[1].diag.filter_passed);
    // 9 significant digits survive the round trip.
    CHECK(back[1].pixel.x() == doctest::Approx(12.345678901).epsilon(1e-9));
    CHECK(back[1].pixel.y() == doctest::Approx(0.000123456789).epsilon(1e-8));

    SUBCASE("empty list writes a header-only file")
    {
        const std::string empty_path = temp_file("empty.csv");
        write_correspondences(empty_path, {});
        std::ifstream in(empty_path);
        std::string line;
        REQUIRE(std::getline(in, line));
        CHECK(line.rfind("k,lens_i", 0) == 0);
        CHECK_FALSE(std::getline(in, line));
        CHECK(read_correspondences(empty_path).empty());
    }

    SUBCASE("conventional rows carry empty lens fields")
    {
        Correspondence plain;
        plain.k = 0;
        plain.pixel = Vec2(1.5, 2.5);
        const std::string p2 = temp_file("conv.csv");
        write_correspondences(p2, {plain});
        std::ifstream in(p2);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(row.rfind("0,,,,", 0) == 0);
        const auto parsed = read_correspondences(p2);
        REQUIRE(parsed.size() == 1);
        CHECK_FALSE(parsed[0].lens.has_value());
    }
}

TEST_CASE("config: minimal valid file builds a rig")
{
    const ConfigLoadResult result = parse_config(kMinimalConfig);
    REQUIRE(result.ok());
    const RunConfig& cfg = *result.config;
    CHECK(cfg.rig.sensor.width_px == 32);
    CHECK(cfg.rig.objective.surfaces.size() == 1);
    CHECK(cfg.render.scale_k == 2);
    CHECK(cfg.extraction.lambda == -1.0);  // auto
    CHECK(cfg.planes.present);
    CHECK_FALSE(cfg.rig_fingerprint.empty());

    const PatternBoard board = make_board(cfg, 0);
    CHECK(board.points_of_interest.size() == 28);
}

TEST_CASE("config: violations are collected with field names")
{
    std::string bad = kMinimalConfig;
    // Negative MLA pitch plus coincident planes in one file.
    const std::string needle = "\"camera\": {";
    bad.replace(bad.find(needle), needle.size(),
                "\"camera\": {\n    \"mla\": {\"enabled\": true, \"distance_to_sensor_mm\": 1.7, "
                "\"pitch_mm\": -0.2, \"ior\": 1.5, \"lens_radii_mm\": [0.95, 1.05, 1.15]},");
    const std::string planes = "\"near_mm\": 3000.0, \"far_mm\": 6000.0";
    bad.replace(bad.find(planes), planes.size(), "\"near_mm\": 6000.0, \"far_mm\": 6000.0");

    const ConfigLoadResult result = parse_config(bad);
    CHECK_FALSE(result.ok());
    bool saw_pitch = false, saw_planes = false;
    for (const std::string& v : result.violations) {
        if (v.find("camera.mla.pitch_mm") != std::string::npos) saw_pitch = true;
        if (v.find("planes.near_mm") != std::string::npos) saw_planes = true;
    }
    CHECK(saw_pitch);
    CHECK(saw_planes);
}

TEST_CASE("config: raytrix constraint rejects short focal lengths")
{
    std::string bad = kMinimalConfig;
    const std::string needle = "\"camera\": {";
    bad.replace(bad.find(needle), needle.size(),
                "\"camera\": {\n    \"mla\": {\"enabled\": true, \"distance_to_sensor_mm\": 1.7, "
                "\"pitch_mm\": 0.2, \"ior\": 1.5, \"lens_radii_mm\": 0.5},");  // f = 1.0 < 1.7
    const ConfigLoadResult result = parse_config(bad);
    CHECK_FALSE(result.ok());
}

TEST_CASE("config: fingerprint tracks the camera section only")
{
    const ConfigLoadResult a = parse_config(kMinimalConfig);
    std::string changed_render = kMinimalConfig;
    const std::string n1 = "\"seed\": 7";
    changed_render.replace(changed_render.find(n1), n1.size(), "\"seed\": 8");
    const ConfigLoadResult b = parse_config(changed_render);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(a.config->rig_fingerprint == b.config->rig_fingerprint);

    std::string changed_camera = kMinimalConfig;
    const std::string n2 = "\"radius_mm\": 0.001";
    changed_camera.replace(changed_camera.find(n2), n2.size(), "\"radius_mm\": 0.002");
    const ConfigLoadResult c = parse_config(changed_camera);
    REQUIRE(c.ok());
    CHECK(a.config->rig_fingerprint != c.config->rig_fingerprint);
}

TEST_CASE("pinhole_project matches similar triangles")
{
    PinholeOracle oracle;
    oracle.pinhole = Vec3(0, 0, 0);
    oracle.image_distance = 10.0;
    oracle.pixel_pitch = 0.01;
    oracle.principal = Vec2(0, 0);

    const Vec2 px = pinhole_project(oracle, Vec3(1, 0, -100));
    CHECK(px.x() == doctest::Approx(10.0));
    CHECK(px.y() == doctest::Approx(0.0));

    // On-axis point lands on the principal point.
    CHECK(pinhole_project(oracle, Vec3(0, 0, -250)).norm() == doctest::Approx(0.0));

    // Doubling the depth halves the offset.
    const Vec2 far_px = pinhole_project(oracle, Vec3(1, 0, -200));
    CHECK(far_px.x() == doctest::Approx(5.0));
}

TEST_CASE("pinhole_oracle_from_rig guards non-degenerate rigs")
{
    const ConfigLoadResult result = parse_config(kMinimalConfig);
    REQUIRE(result.ok());
    CameraRig rig = result.config->rig;
    const auto oracle = pinhole_oracle_from_rig(rig);
    REQUIRE(oracle.has_value());
    CHECK(oracle->pinhole.z() == doctest::Approx(410.0));
    CHECK(oracle->image_distance == doctest::Approx(400.0));
    CHECK(oracle->principal.x() == doctest::Approx(15.5));

    CameraRig wide = rig;
    wide.objective.stop.radius = 1.0;  // not a pinhole
    CHECK_FALSE(pinhole_oracle_from_rig(wide).has_value());

    CameraRig spread = rig;
    spread.sensor.diffusor_distribution = DiffusorDistribution::UniformCone;
    spread.sensor.diffusor_max_angle = 0.01;
    CHECK_FALSE(pinhole_oracle_from_rig(spread).has_value());
}

TEST_CASE("fnv1a_hex is stable")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("plenoray") != fnv1a_hex("plenorax"));
}
