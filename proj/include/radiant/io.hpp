// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radiant/dataset.hpp"
#include "radiant/image.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

namespace fs = std::filesystem;

// PNG codecs. Decoders accept gray, gray+alpha, RGB and RGBA 8-bit input.
std::vector<std::uint8_t> encode_png(const RgbImage& img);
std::vector<std::uint8_t> encode_png(const RgbaImage& img);
std::vector<std::uint8_t> encode_png(const MaskImage& mask);  // 0 / 255 gray
RgbaImage decode_png_rgba(const std::vector<std::uint8_t>& bytes, bool* had_alpha = nullptr);
RgbImage decode_png_rgb(const std::vector<std::uint8_t>& bytes);
/// Any nonzero gray value maps to 1.
MaskImage decode_png_mask(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> read_file(const fs::path& path);
void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const fs::path& path, const std::string& text);

/// Grayscale PFM ("Pf"), little-endian (scale -1.0), rows stored bottom-up.
void write_pfm(const fs::path& path, const ScalarImage& img);
ScalarImage read_pfm(const fs::path& path);

/// Dataset directory: images/NNN.png, masks/NNN.png, depth/NNN.pfm,
/// cameras.json, meta.json. Numbers are written with 17 significant digits.
void save_dataset(const fs::path& dir, const MultiViewDataset& dataset);
MultiViewDataset load_dataset(const fs::path& dir);

std::string cameras_json(const std::vector<Camera>& cameras);
std::string meta_json(const DatasetMeta& meta);

/// Field checkpoint: "RCVF", uint32 version, int32 nx ny nz, float32 bounds
/// min xyz / max xyz, then float32 density[n] and float32 rgb[3n], all
/// little-endian, voxels in x-fastest order.
std::vector<std::uint8_t> encode_checkpoint(const VoxelField& field);
VoxelField decode_checkpoint(const std::vector<std::uint8_t>& bytes);
void save_checkpoint(const fs::path& path, const VoxelField& field);
VoxelField load_checkpoint(const fs::path& path);

/// Canonical double formatting used in metadata files (17 significant digits).
std::string format_double(double v);

}  // namespace radiant
