// Copyright (c) plenoray contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "plenoray/extract.hpp"
#include "plenoray/image.hpp"

#include <string>
#include <vector>

namespace plenoray {

// PFM with a JSON sidecar at <path>.meta.json. Header "PF\n<w> <h>\n-1.0\n"
// (Pf for one channel), little-endian float32 payload, rows bottom-to-top.
// Round trips are bit-exact.
void write_image(const std::string& path, const FloatImage& image);
FloatImage read_image(const std::string& path);

std::string semantic_to_string(ImageSemantic semantic);
ImageSemantic semantic_from_string(const std::string& s);

// Ground-truth CSV: header
// k,lens_i,lens_j,lens_type,px_x,px_y,world_x,world_y,world_z,board_u,board_v,method,filter_passed
// floats printed with 9 significant digits, rows sorted by (lens_i, lens_j, k);
// conventional-camera rows carry empty lens fields.
void write_correspondences(const std::string& path, std::vector<Correspondence> records);
std::vector<Correspondence> read_correspondences(const std::string& path);

std::string method_to_string(ExtractionMethod method);

// FNV-1a hash of a canonical string, hex encoded; used to fingerprint the
// camera section of a config so extraction can detect renders from a
// different rig.
std::string fnv1a_hex(const std::string& text);

}  // namespace plenoray
