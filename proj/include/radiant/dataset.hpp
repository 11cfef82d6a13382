// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "radiant/camera.hpp"
#include "radiant/image.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

/// One training view. RGB-only datasets store alpha = 1. Depth maps hold 0
/// at pixels without a valid depth.
struct DatasetView {
  RgbaImage image;
  Camera camera;
  std::optional<MaskImage> mask;
  std::optional<ScalarImage> depth;
};

struct DatasetMeta {
  double near = 0.1;
  double far = 6.0;
  Aabb bounds;

  bool operator==(const DatasetMeta&) const = default;
};

struct MultiViewDataset {
  DatasetMeta meta;
  /// Whether images carry meaningful alpha (saved as RGBA).
  bool has_alpha = false;
  std::vector<DatasetView> views;

  std::size_t size() const { return views.size(); }
  bool empty() const { return views.empty(); }

  /// Throws InputError if images, cameras, masks or depths are inconsistent.
  void validate() const;
};

}  // namespace radiant
