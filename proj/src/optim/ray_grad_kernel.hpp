// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

// Per-ray forward/backward body shared by the parallel and reference gradient
// kernels. Both accumulate into each parameter in (ray, sample, corner) order,
// so their results are bit-identical.

#pragma once

#include "radiant/optimizer.hpp"

namespace radiant::detail {

struct RayScratch {
  RaySamples samples;
  std::vector<SampleGrad> grads;
};

inline double forward_backward(const VoxelField& field, const TrainRay& tr,
                               const RenderConfig& cfg, std::size_t index,
                               const RayLossFn& loss, RayScratch& scratch) {
  sample_along_ray(tr.ray, cfg, tr.stream, scratch.samples);
  fill_samples(field, tr.ray, scratch.samples);
  const CompositeResult fwd = composite_ray(scratch.samples, cfg.background, tr.ray.far);
  CompositeGrad upstream;
  const double value = loss(index, fwd, upstream);
  backprop_ray(scratch.samples, fwd, upstream, cfg.background, scratch.grads);
  return value;
}

/// Adds one sample's gradient into the voxels it interpolates, restricted to
/// voxel indices in [lo, hi).
inline void scatter_sample(const VoxelField& field, const Ray& ray, double t,
                           const SampleGrad& g, std::span<double> grad, std::int64_t lo,
                           std::int64_t hi) {
  TrilinearStencil st;
  if (!field.stencil(ray.at(t), st)) return;
  const auto offsets = field.corner_offsets();
  for (int c = 0; c < 8; ++c) {
    const std::int64_t v = st.base + offsets[c];
    if (v < lo || v >= hi) continue;
    const double w = st.weights[c];
    double* p = &grad[v * VoxelField::kChannels];
    p[0] += w * g.density;
    p[1] += w * g.color.x();
    p[2] += w * g.color.y();
    p[3] += w * g.color.z();
  }
}

}  // namespace radiant::detail
