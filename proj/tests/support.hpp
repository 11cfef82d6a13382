// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "radiant/render.hpp"
#include "radiant/synth.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant::testing {

inline VoxelField random_field(const GridResolution& res, std::uint64_t seed,
                               double max_density = 4.0, Aabb bounds = {}) {
  VoxelField f(res, bounds);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t v = 0; v < res.voxel_count(); ++v) {
    f.density(v) = max_density * u(rng);
    f.set_color(v, Vec3(u(rng), u(rng), u(rng)));
  }
  return f;
}

/// A seeded ray that starts outside the unit box and passes near its center.
inline Ray random_ray(std::mt19937_64& rng, double near = 0.5, double far = 4.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec3 dir(u(rng), u(rng), u(rng));
  dir.normalize();
  const Vec3 target(0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng));
  return {target - 2.5 * dir, dir, near, far};
}

template <class Pixel>
double max_abs_diff(const Image<Pixel>& a, const Image<Pixel>& b);

template <>
inline double max_abs_diff(const RgbImage& a, const RgbImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return m;
}

template <>
inline double max_abs_diff(const ScalarImage& a, const ScalarImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// A cheap version of the default scene: 32^3 grid, 6 cameras, 24x24 images.
inline SceneSpec small_scene_spec() {
  SceneSpec s = default_scene_spec();
  s.resolution = {32, 32, 32};
  s.rig.count = 6;
  s.rig.image_width = 24;
  s.rig.image_height = 24;
  s.samples_per_ray = 96;
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("radiant_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace radiant::testing
