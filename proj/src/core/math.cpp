// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/math.hpp"

#include <cmath>
#include <numbers>

namespace radiant {

Mat3 rotation_from_axis_angle(const Vec3& axis, double angle_deg) {
  if (axis.norm() == 0.0 || angle_deg == 0.0) return Mat3::Identity();
  return Eigen::AngleAxisd(angle_deg * std::numbers::pi / 180.0, axis.normalized())
      .toRotationMatrix();
}

bool is_rotation(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace radiant
