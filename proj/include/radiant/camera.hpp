// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "radiant/math.hpp"

namespace radiant {

/// Pinhole camera. Camera frame is right-handed with +z forward, +x right and
/// +y down; pixel (px, py) looks through (px + 0.5, py + 0.5).
struct Camera {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;
  Mat4 cam_to_world = Mat4::Identity();

  Mat3 rotation() const { return cam_to_world.topLeftCorner<3, 3>(); }
  Vec3 position() const { return cam_to_world.topRightCorner<3, 1>(); }

  /// Throws InputError when intrinsics or the pose are invalid.
  void validate() const;

  bool operator==(const Camera&) const = default;
};

/// Camera at `eye` looking at `target`, with `up` projecting to -y in the image.
Camera look_at_camera(const Vec3& eye, const Vec3& target, const Vec3& up,
                      int width, int height, double fov_y_deg);

/// Rigid transform inverse.
Mat4 rigid_inverse(const Mat4& m);

}  // namespace radiant
