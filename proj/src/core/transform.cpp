// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/transform.hpp"

#include <cmath>

#include "radiant/error.hpp"

namespace radiant {

void SrtTransform::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("transform scale must be > 0");
  }
  if (!is_rotation(rotation)) {
    throw InputError("transform rotation must be orthonormal with determinant +1");
  }
  if (!translation.allFinite() || !centroid.allFinite()) {
    throw InputError("transform translation and centroid must be finite");
  }
}

bool SrtTransform::is_identity() const {
  return scale == 1.0 && rotation == Mat3::Identity() && translation.isZero(0.0);
}

Vec3 SrtTransform::canonical_to_world(const Vec3& p) const {
  return rotation * (p - centroid) * scale + centroid + translation;
}

Vec3 SrtTransform::world_to_canonical(const Vec3& p) const {
  return rotation.transpose() * ((p - translation - centroid) / scale) + centroid;
}

Mat4 SrtTransform::rigid_matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = centroid + translation - rotation * centroid;
  return m;
}

}  // namespace radiant
