// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#include "plenoray/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plenoray {

using nlohmann::json;

std::string semantic_to_string(ImageSemantic semantic)
{
    switch (semantic) {
        case ImageSemantic::Color: return "color";
        case ImageSemantic::UvwPositional: return "uvw-positional";
        case ImageSemantic::PlanePositional: return "plane-positional";
        case ImageSemantic::Ratio: return "ratio";
    }
    return "?";
}

ImageSemantic semantic_from_string(const std::string& s)
{
    if (s == "color") return ImageSemantic::Color;
    if (s == "uvw-positional") return ImageSemantic::UvwPositional;
    if (s == "plane-positional") return ImageSemantic::PlanePositional;
    if (s == "ratio") return ImageSemantic::Ratio;
    throw std::runtime_error("unknown image semantic: " + s);
}

std::string method_to_string(ExtractionMethod method)
{
    return method == ExtractionMethod::Direct ? "direct" : "two-plane";
}

namespace {

const char* axis_name(int axis)
{
    switch (axis) {
        case 0: return "x";
        case 1: return "y";
        case 2: return "z";
    }
    return "";
}

int axis_from_name(const std::string& s)
{
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
    return -1;
}

std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

}  // namespace

void write_image(const std::string& path, const FloatImage& image)
{
    if (image.channels != 1 && image.channels != 3)
        throw std::runtime_error("PFM supports 1 or 3 channels");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << (image.channels == 3 ? "PF" : "Pf") << "\n"
        << image.width << " " << image.height << "\n"
        << "-1.0\n";
    // Bottom-to-top row order.
    const size_t row_floats = size_t(image.width) * image.channels;
    for (int y = image.height - 1; y >= 0; --y) {
        const float* row = &image.data[size_t(y) * row_floats];
        out.write(reinterpret_cast<const char*>(row), std::streamsize(row_floats * sizeof(float)));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
    out.close();

    json meta;
    meta["semantic"] = semantic_to_string(image.meta.semantic);
    meta["seed"] = image.meta.seed;
    meta["samples"] = image.meta.samples;
    meta["K"] = image.meta.scale_k;
    meta["normalized"] = image.meta.normalized;
    meta["ratio_min"] = image.meta.ratio_min;
    if (image.meta.semantic == ImageSemantic::PlanePositional) {
        meta["fixed_axis"] = axis_name(image.meta.fixed_axis);
        meta["fixed_value"] = image.meta.fixed_value;
    }
    if (!image.meta.rig_fingerprint.empty()) meta["rig_fingerprint"] = image.meta.rig_fingerprint;
    std::ofstream mout(sidecar_path(path));
    if (!mout) throw std::runtime_error("cannot open for writing: " + sidecar_path(path));
    mout << meta.dump(2) << "\n";
}

FloatImage read_image(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    int w = 0, h = 0;
    double scale = 0.0;
    in >> magic >> w >> h >> scale;
    if ((magic != "PF" && magic != "Pf") || w <= 0 || h <= 0)
        throw std::runtime_error("malformed PFM header: " + path);
    if (scale >= 0.0) throw std::runtime_error("big-endian PFM not supported: " + path);
    in.get();  // single whitespace after the scale line

    FloatImage img(w, h, magic == "PF" ? 3 : 1);
    const size_t row_floats = size_t(w) * img.channels;
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(&img.data[size_t(y) * row_floats]),
                std::streamsize(row_floats * sizeof(float)));
        if (!in) throw std::runtime_error("truncated PFM payload: " + path);
    }

    std::ifstream min(sidecar_path(path));
    if (min) {
        json meta = json::parse(min);
        img.meta.semantic = semantic_from_string(meta.at("semantic").get<std::string>());
        img.meta.seed = meta.at("seed").get<uint64_t>();
        img.meta.samples = meta.at("samples").get<int>();
        img.meta.scale_k = meta.at("K").get<int>();
        img.meta.normalized = meta.value("normalized", false);
        img.meta.ratio_min = meta.value("ratio_min", 0.0);
        if (meta.contains("fixed_axis")) {
            img.meta.fixed_axis = axis_from_name(meta["fixed_axis"].get<std::string>());
            img.meta.fixed_value = meta.at("fixed_value").get<double>();
        }
        img.meta.rig_fingerprint = meta.value("rig_fingerprint", "");
    }
    return img;
}

namespace {

std::string fmt9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_correspondences(const std::string& path, std::vector<Correspondence> records)
{
    std::sort(records.begin(), records.end(), [](const Correspondence& a, const Correspondence& b) {
        const HexIndex la = a.lens.value_or(HexIndex{0, 0});
        const HexIndex lb = b.lens.value_or(HexIndex{0, 0});
        return std::tie(la.i, la.j, a.k) < std::tie(lb.i, lb.j, b.k);
    });

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "k,lens_i,lens_j,lens_type,px_x,px_y,world_x,world_y,world_z,board_u,board_v,method,"
           "filter_passed\n";
    for (const Correspondence& c : records) {
        out << c.k << ",";
        if (c.lens)
            out << c.lens->i << "," << c.lens->j << "," << c.lens_type << ",";
        else
            out << ",,,";
        out << fmt9(c.pixel.x()) << "," << fmt9(c.pixel.y()) << "," << fmt9(c.world.x()) << ","
            << fmt9(c.world.y()) << "," << fmt9(c.world.z()) << "," << fmt9(c.board_uv.x()) << ","
            << fmt9(c.board_uv.y()) << "," << method_to_string(c.method) << ","
            << (c.diag.filter_passed ? 1 : 0) << "\n";
    }
}

std::vector<Correspondence> read_correspondences(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty correspondence file: " + path);

    std::vector<Correspondence> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (ss.eof() && !line.empty() && line.back() == ',') f.push_back("");
        if (f.size() != 13) throw std::runtime_error("malformed correspondence row: " + line);

        Correspondence c;
        c.k = std::stoi(f[0]);
        if (!f[1].empty()) {
            c.lens = HexIndex{std::stoi(f[1]), std::stoi(f[2])};
            c.lens_type = std::stoi(f[3]);
        }
        c.pixel = Vec2(std::stod(f[4]), std::stod(f[5]));
        c.world = Vec3(std::stod(f[6]), std::stod(f[7]), std::stod(f[8]));
        c.board_uv = Vec2(std::stod(f[9]), std::stod(f[10]));
        c.method = f[11] == "two-plane" ? ExtractionMethod::TwoPlane : ExtractionMethod::Direct;
        c.diag.filter_passed = f[12] == "1";
        records.push_back(c);
    }
    return records;
}

std::string fnv1a_hex(const std::string& text)
{
    uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace plenoray
