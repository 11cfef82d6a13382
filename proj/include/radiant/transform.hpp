// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "radiant/math.hpp"

namespace radiant {

/// Uniform scale, rotation and translation of an object about its centroid.
/// The forward map sends a canonical point p to
///   p' = R (p - O) * scale + O + translation.
struct SrtTransform {
  double scale = 1.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();

  static SrtTransform identity() { return {}; }

  /// Throws InputError unless scale > 0 and rotation is proper orthonormal.
  void validate() const;

  /// Exactly the identity (no rounding tolerance).
  bool is_identity() const;

  Vec3 canonical_to_world(const Vec3& p) const;
  Vec3 world_to_canonical(const Vec3& p) const;

  /// The world-space rigid motion (rotation + translation) as a 4x4 matrix;
  /// ignores scale.
  Mat4 rigid_matrix() const;
};

inline Vec3 srt_world_to_canonical(const Vec3& p, const SrtTransform& x) {
  return x.world_to_canonical(p);
}
inline Vec3 srt_canonical_to_world(const Vec3& p, const SrtTransform& x) {
  return x.canonical_to_world(p);
}

/// Factor applied to canonical density so optical depth through the object is
/// preserved when its world extent grows by `scale`.
inline double srt_density_correction(const SrtTransform& x) { return 1.0 / x.scale; }

}  // namespace radiant
