// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "radiant/error.hpp"
#include "radiant/io.hpp"

namespace radiant {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("cannot write " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

// --- PFM -------------------------------------------------------------------

namespace {

void put_f32(std::vector<std::uint8_t>& out, float f) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t u) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace

void write_pfm(const fs::path& path, const ScalarImage& img) {
  const std::string header = fmt::format("Pf\n{} {}\n-1.0\n", img.width, img.height);
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + img.size() * 4);
  for (int y = img.height - 1; y >= 0; --y) {
    for (int x = 0; x < img.width; ++x) put_f32(out, static_cast<float>(img.at(x, y)));
  }
  write_file(path, out);
}

ScalarImage read_pfm(const fs::path& path) {
  const auto bytes = read_file(path);
  // Header: three whitespace-separated tokens lines, then raw floats.
  std::size_t pos = 0;
  const auto token = [&]() {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) t.push_back(static_cast<char>(bytes[pos++]));
    return t;
  };
  const std::string magic = token();
  if (magic != "Pf") throw InputError(path.string() + ": not a grayscale PFM file");
  int w = 0, h = 0;
  double scale = 0.0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    scale = std::stod(token());
  } catch (const std::exception&) {
    throw InputError(path.string() + ": malformed PFM header");
  }
  ++pos;  // single whitespace after the scale
  if (w <= 0 || h <= 0) throw InputError(path.string() + ": invalid PFM dimensions");
  if (scale >= 0.0) throw InputError(path.string() + ": big-endian PFM not supported");
  if (bytes.size() - pos != static_cast<std::size_t>(w) * h * 4) {
    throw InputError(path.string() + ": PFM payload size mismatch");
  }
  ScalarImage img(w, h);
  const std::uint8_t* p = bytes.data() + pos;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x, p += 4) img.at(x, y) = get_f32(p);
  }
  return img;
}

// --- Dataset -----------------------------------------------------------------

namespace {

std::string vec_json(const Vec3& v) {
  return "[" + format_double(v.x()) + ", " + format_double(v.y()) + ", " +
         format_double(v.z()) + "]";
}

std::string view_name(std::size_t i, const char* ext) { return fmt::format("{:03d}.{}", i, ext); }

double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number()) {
    throw InputError(where + ": missing or non-numeric field '" + key + "'");
  }
  return obj[key].get<double>();
}

json parse_json_file(const fs::path& path) {
  if (!fs::exists(path)) {
    throw InputError("missing " + path.filename().string() + " in " + path.parent_path().string());
  }
  const auto bytes = read_file(path);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw InputError(path.filename().string() + ": parse error: " + e.what());
  }
}

Vec3 vec_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != 3) {
    throw InputError(where + ": field '" + key + "' must be an array of 3 numbers");
  }
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!obj[key][i].is_number()) throw InputError(where + ": field '" + key + "' must be numeric");
    v[i] = obj[key][i].get<double>();
  }
  return v;
}

}  // namespace

std::string cameras_json(const std::vector<Camera>& cameras) {
  std::string s = "[\n";
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const Camera& c = cameras[i];
    s += "  {\"fx\": " + format_double(c.fx) + ", \"fy\": " + format_double(c.fy) +
         ", \"cx\": " + format_double(c.cx) + ", \"cy\": " + format_double(c.cy) +
         ", \"width\": " + std::to_string(c.width) + ", \"height\": " +
         std::to_string(c.height) + ", \"cam_to_world\": [";
    for (int r = 0; r < 4; ++r) {
      for (int col = 0; col < 4; ++col) {
        s += format_double(c.cam_to_world(r, col));
        if (r * 4 + col < 15) s += ", ";
      }
    }
    s += "]}";
    s += i + 1 < cameras.size() ? ",\n" : "\n";
  }
  s += "]\n";
  return s;
}

std::string meta_json(const DatasetMeta& meta) {
  return "{\"near\": " + format_double(meta.near) + ", \"far\": " + format_double(meta.far) +
         ", \"bounds\": {\"min\": " + vec_json(meta.bounds.min) +
         ", \"max\": " + vec_json(meta.bounds.max) + "}}\n";
}

void MultiViewDataset::validate() const {
  if (!(meta.near >= 0.0 && meta.near < meta.far)) {
    throw InputError("dataset meta requires 0 <= near < far");
  }
  for (std::size_t i = 0; i < views.size(); ++i) {
    const DatasetView& v = views[i];
    const std::string where = "view " + std::to_string(i);
    v.camera.validate();
    if (!v.image.same_shape(v.camera.width, v.camera.height)) {
      throw InputError(where + ": image size does not match its camera");
    }
    if (v.mask) {
      if (!v.mask->same_shape(v.image)) throw InputError(where + ": mask size mismatch");
      for (auto m : v.mask->pixels) {
        if (m > 1) throw InputError(where + ": mask is not binary");
      }
    }
    if (v.depth) {
      if (!v.depth->same_shape(v.image)) throw InputError(where + ": depth size mismatch");
      for (double d : v.depth->pixels) {
        if (!(d >= 0.0) || !std::isfinite(d)) throw InputError(where + ": invalid depth value");
      }
    }
  }
}

void save_dataset(const fs::path& dir, const MultiViewDataset& dataset) {
  dataset.validate();
  fs::create_directories(dir / "images");
  std::vector<Camera> cams;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const DatasetView& v = dataset.views[i];
    cams.push_back(v.camera);
    write_file(dir / "images" / view_name(i, "png"),
               dataset.has_alpha ? encode_png(v.image) : encode_png(rgb_of(v.image)));
    if (v.mask) write_file(dir / "masks" / view_name(i, "png"), encode_png(*v.mask));
    if (v.depth) {
      fs::create_directories(dir / "depth");
      write_pfm(dir / "depth" / view_name(i, "pfm"), *v.depth);
    }
  }
  write_text(dir / "cameras.json", cameras_json(cams));
  write_text(dir / "meta.json", meta_json(dataset.meta));
}

MultiViewDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("dataset directory not found: " + dir.string());
  const json cams = parse_json_file(dir / "cameras.json");
  const json meta = parse_json_file(dir / "meta.json");
  if (!cams.is_array()) throw InputError("cameras.json: expected an array of cameras");

  MultiViewDataset ds;
  ds.meta.near = number_at(meta, "near", "meta.json");
  ds.meta.far = number_at(meta, "far", "meta.json");
  if (!meta.contains("bounds") || !meta["bounds"].is_object()) {
    throw InputError("meta.json: missing field 'bounds'");
  }
  ds.meta.bounds.min = vec_at(meta["bounds"], "min", "meta.json: bounds");
  ds.meta.bounds.max = vec_at(meta["bounds"], "max", "meta.json: bounds");

  for (std::size_t i = 0; i < cams.size(); ++i) {
    const std::string where = "cameras.json: camera " + std::to_string(i);
    const json& c = cams[i];
    DatasetView v;
    v.camera.fx = number_at(c, "fx", where);
    v.camera.fy = number_at(c, "fy", where);
    v.camera.cx = number_at(c, "cx", where);
    v.camera.cy = number_at(c, "cy", where);
    v.camera.width = static_cast<int>(number_at(c, "width", where));
    v.camera.height = static_cast<int>(number_at(c, "height", where));
    if (!c.contains("cam_to_world") || !c["cam_to_world"].is_array() ||
        c["cam_to_world"].size() != 16) {
      throw InputError(where + ": field 'cam_to_world' must hold 16 numbers");
    }
    for (int k = 0; k < 16; ++k) {
      const json& e = c["cam_to_world"][k];
      if (!e.is_number()) throw InputError(where + ": field 'cam_to_world' must be numeric");
      v.camera.cam_to_world(k / 4, k % 4) = e.get<double>();
    }

    const fs::path image_path = dir / "images" / view_name(i, "png");
    if (!fs::exists(image_path)) throw InputError("missing image " + image_path.string());
    bool had_alpha = false;
    v.image = decode_png_rgba(read_file(image_path), &had_alpha);
    if (i == 0) ds.has_alpha = had_alpha;

    const fs::path mask_path = dir / "masks" / view_name(i, "png");
    if (fs::exists(mask_path)) v.mask = decode_png_mask(read_file(mask_path));
    const fs::path depth_path = dir / "depth" / view_name(i, "pfm");
    if (fs::exists(depth_path)) v.depth = read_pfm(depth_path);
    ds.views.push_back(std::move(v));
  }
  ds.validate();
  return ds;
}

// --- Checkpoints ---------------------------------------------------------------

namespace {
constexpr char kMagic[4] = {'R', 'C', 'V', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 + 3 * 4 + 6 * 4;
}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const VoxelField& field) {
  const auto& res = field.resolution();
  const std::int64_t n = res.voxel_count();
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.reserve(kHeaderBytes + static_cast<std::size_t>(n) * 16);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(res.nx));
  put_u32(out, static_cast<std::uint32_t>(res.ny));
  put_u32(out, static_cast<std::uint32_t>(res.nz));
  for (int a = 0; a < 3; ++a) put_f32(out, static_cast<float>(field.bounds().min[a]));
  for (int a = 0; a < 3; ++a) put_f32(out, static_cast<float>(field.bounds().max[a]));
  for (std::int64_t v = 0; v < n; ++v) put_f32(out, static_cast<float>(field.density(v)));
  for (std::int64_t v = 0; v < n; ++v) {
    const Vec3 c = field.color(v);
    for (int a = 0; a < 3; ++a) put_f32(out, static_cast<float>(c[a]));
  }
  return out;
}

VoxelField decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw InputError("checkpoint: bad magic (expected RCVF)");
  }
  const std::uint8_t* p = bytes.data() + 4;
  const std::uint32_t version = get_u32(p);
  if (version != kVersion) throw InputError("checkpoint: unsupported version " + std::to_string(version));
  GridResolution res{static_cast<int>(get_u32(p + 4)), static_cast<int>(get_u32(p + 8)),
                     static_cast<int>(get_u32(p + 12))};
  Aabb bounds;
  for (int a = 0; a < 3; ++a) bounds.min[a] = get_f32(p + 16 + 4 * a);
  for (int a = 0; a < 3; ++a) bounds.max[a] = get_f32(p + 28 + 4 * a);
  if (res.nx < 2 || res.ny < 2 || res.nz < 2 || res.voxel_count() > (1LL << 31)) {
    throw InputError("checkpoint: invalid resolution");
  }
  const std::int64_t n = res.voxel_count();
  if (bytes.size() != kHeaderBytes + static_cast<std::size_t>(n) * 16) {
    throw InputError("checkpoint: payload size does not match resolution");
  }
  VoxelField field(res, bounds);
  const std::uint8_t* d = bytes.data() + kHeaderBytes;
  const std::uint8_t* c = d + n * 4;
  for (std::int64_t v = 0; v < n; ++v) {
    field.density(v) = get_f32(d + 4 * v);
    field.set_color(v, Vec3(get_f32(c + 12 * v), get_f32(c + 12 * v + 4), get_f32(c + 12 * v + 8)));
  }
  return field;
}

void save_checkpoint(const fs::path& path, const VoxelField& field) {
  write_file(path, encode_checkpoint(field));
}

VoxelField load_checkpoint(const fs::path& path) {
  if (!fs::exists(path)) throw InputError("missing checkpoint " + path.string());
  return decode_checkpoint(read_file(path));
}

}  // namespace radiant
