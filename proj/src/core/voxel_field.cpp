// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/voxel_field.hpp"

#include <algorithm>
#include <cmath>

#include "radiant/error.hpp"

namespace radiant {

VoxelField::VoxelField(GridResolution res, Aabb bounds, double density,
                       const Vec3& color)
    : res_(res), bounds_(std::move(bounds)) {
  if (res_.nx < 2 || res_.ny < 2 || res_.nz < 2) {
    throw InputError("voxel field resolution must be >= 2 per axis");
  }
  if (!(bounds_.min.array() < bounds_.max.array()).all()) {
    throw InputError("voxel field bounds must satisfy min < max");
  }
  if (density < 0.0) throw InputError("voxel field density must be >= 0");

  const Vec3 cells(res_.nx - 1, res_.ny - 1, res_.nz - 1);
  spacing_ = (bounds_.max - bounds_.min).cwiseQuotient(cells);
  inv_spacing_ = spacing_.cwiseInverse();

  const std::int64_t sx = 1, sy = res_.nx,
                     sz = static_cast<std::int64_t>(res_.nx) * res_.ny;
  for (int c = 0; c < 8; ++c) {
    offsets_[c] = ((c & 1) ? sx : 0) + ((c & 2) ? sy : 0) + ((c & 4) ? sz : 0);
  }

  params_.resize(static_cast<std::size_t>(res_.voxel_count()) * kChannels);
  for (std::int64_t v = 0; v < res_.voxel_count(); ++v) {
    params_[v * kChannels] = density;
    set_color(v, color);
  }
}

bool VoxelField::stencil(const Vec3& p, TrilinearStencil& out) const {
  if (!bounds_.contains(p)) return false;
  const Vec3 u = (p - bounds_.min).cwiseProduct(inv_spacing_);
  const int n[3] = {res_.nx, res_.ny, res_.nz};
  int i[3];
  double f[3];
  for (int a = 0; a < 3; ++a) {
    i[a] = std::min(static_cast<int>(u[a]), n[a] - 2);
    f[a] = u[a] - i[a];
  }
  out.base = index(i[0], i[1], i[2]);
  const double gx[2] = {1.0 - f[0], f[0]};
  const double gy[2] = {1.0 - f[1], f[1]};
  const double gz[2] = {1.0 - f[2], f[2]};
  for (int c = 0; c < 8; ++c) {
    out.weights[c] = gx[c & 1] * gy[(c >> 1) & 1] * gz[(c >> 2) & 1];
  }
  return true;
}

FieldValue VoxelField::evaluate(const TrilinearStencil& s) const {
  double acc[kChannels] = {0.0, 0.0, 0.0, 0.0};
  for (int c = 0; c < 8; ++c) {
    const double* p = &params_[(s.base + offsets_[c]) * kChannels];
    const double w = s.weights[c];
    acc[0] += w * p[0];
    acc[1] += w * p[1];
    acc[2] += w * p[2];
    acc[3] += w * p[3];
  }
  return {acc[0], Vec3(acc[1], acc[2], acc[3])};
}

FieldValue VoxelField::query(const Vec3& p) const {
  TrilinearStencil s;
  if (!stencil(p, s)) return {};
  return evaluate(s);
}

void VoxelField::clamp() {
  const std::int64_t n = res_.voxel_count();
  for (std::int64_t v = 0; v < n; ++v) {
    double* p = &params_[v * kChannels];
    p[0] = std::max(p[0], 0.0);
    for (int c = 1; c < kChannels; ++c) p[c] = std::clamp(p[c], 0.0, 1.0);
  }
}

double VoxelField::total_density() const {
  double sum = 0.0;
  for (std::int64_t v = 0; v < res_.voxel_count(); ++v) sum += density(v);
  return sum;
}

}  // namespace radiant
