// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "radiant/math.hpp"

namespace radiant {

struct GridResolution {
  int nx = 2;
  int ny = 2;
  int nz = 2;

  std::int64_t voxel_count() const {
    return static_cast<std::int64_t>(nx) * ny * nz;
  }
  bool operator==(const GridResolution&) const = default;
};

struct Aabb {
  Vec3 min = Vec3::Constant(-1.0);
  Vec3 max = Vec3::Constant(1.0);

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  bool operator==(const Aabb&) const = default;
};

struct FieldValue {
  double density = 0.0;
  Vec3 color = Vec3::Zero();
};

/// The eight voxels surrounding a point and their trilinear weights.
/// Corner c has offset bit 0 along x, bit 1 along y, bit 2 along z.
struct TrilinearStencil {
  std::int64_t base = 0;
  std::array<double, 8> weights{};
};

/// Dense grid of (density, rgb) stored at grid nodes spanning `bounds`:
/// node (i, j, k) sits at bounds.min + (i, j, k) * spacing, with spacing =
/// extent / (n - 1). Parameters are interleaved per voxel as
/// [density, r, g, b].
///
/// Queries are const and safe to run concurrently; mutation is exclusive.
class VoxelField {
 public:
  static constexpr int kChannels = 4;

  VoxelField(GridResolution res, Aabb bounds, double density = 0.0,
             const Vec3& color = Vec3::Zero());

  const GridResolution& resolution() const { return res_; }
  const Aabb& bounds() const { return bounds_; }
  const Vec3& spacing() const { return spacing_; }

  std::int64_t index(int i, int j, int k) const {
    return (static_cast<std::int64_t>(k) * res_.ny + j) * res_.nx + i;
  }
  Vec3 voxel_position(int i, int j, int k) const {
    return bounds_.min + Vec3(i, j, k).cwiseProduct(spacing_);
  }
  std::array<std::int64_t, 8> corner_offsets() const { return offsets_; }

  double density(std::int64_t v) const { return params_[v * kChannels]; }
  double& density(std::int64_t v) { return params_[v * kChannels]; }
  Vec3 color(std::int64_t v) const {
    const double* p = &params_[v * kChannels + 1];
    return {p[0], p[1], p[2]};
  }
  void set_color(std::int64_t v, const Vec3& c) {
    double* p = &params_[v * kChannels + 1];
    p[0] = c.x();
    p[1] = c.y();
    p[2] = c.z();
  }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  /// Fills `out` for a point inside bounds; returns false outside.
  bool stencil(const Vec3& p, TrilinearStencil& out) const;

  FieldValue evaluate(const TrilinearStencil& s) const;

  /// Trilinear interpolation; (0, black) outside bounds.
  FieldValue query(const Vec3& p) const;

  /// Clamp density to >= 0 and color to [0, 1].
  void clamp();

  double total_density() const;

  bool operator==(const VoxelField& o) const {
    return res_ == o.res_ && bounds_ == o.bounds_ && params_ == o.params_;
  }

 private:
  GridResolution res_;
  Aabb bounds_;
  Vec3 spacing_;
  Vec3 inv_spacing_;
  std::array<std::int64_t, 8> offsets_{};
  std::vector<double> params_;
};

/// trilinear_query from the field contract.
inline FieldValue trilinear_query(const VoxelField& field, const Vec3& p) {
  return field.query(p);
}

}  // namespace radiant
