// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include "ray_grad_kernel.hpp"

namespace radiant {

namespace {
struct SampleRecord {
  double t;
  SampleGrad grad;
};
}  // namespace

double accumulate_field_gradient(const VoxelField& field, std::span<const TrainRay> rays,
                                 const RenderConfig& cfg, const RayLossFn& loss,
                                 std::span<double> grad) {
  const std::size_t n_rays = rays.size();
  const std::size_t per_ray = static_cast<std::size_t>(cfg.samples_per_ray);
  // Scratch reused across calls; bound to references so worker threads share
  // the caller's buffers rather than their own thread_local copies.
  thread_local std::vector<SampleRecord> record_buffer;
  thread_local std::vector<double> loss_buffer;
  std::vector<SampleRecord>& records = record_buffer;
  std::vector<double>& losses = loss_buffer;
  records.resize(n_rays * per_ray);
  losses.resize(n_rays);

  // Phase 1: independent forward/backward per ray.
#pragma omp parallel
  {
    detail::RayScratch scratch;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(n_rays); ++r) {
      losses[r] = detail::forward_backward(field, rays[r], cfg, r, loss, scratch);
      SampleRecord* out = &records[r * per_ray];
      for (std::size_t s = 0; s < per_ray; ++s) {
        out[s] = {scratch.samples[s].t, scratch.grads[s]};
      }
    }
  }

  // Phase 2: each thread owns a contiguous voxel range and replays every
  // record in order, so per-voxel summation order matches the serial kernel.
  const std::int64_t voxels = field.resolution().voxel_count();
#pragma omp parallel
  {
    const int threads = omp_get_num_threads();
    const int tid = omp_get_thread_num();
    const std::int64_t lo = voxels * tid / threads;
    const std::int64_t hi = voxels * (tid + 1) / threads;
    for (std::size_t r = 0; r < n_rays; ++r) {
      const SampleRecord* rec = &records[r * per_ray];
      for (std::size_t s = 0; s < per_ray; ++s) {
        detail::scatter_sample(field, rays[r].ray, rec[s].t, rec[s].grad, grad, lo, hi);
      }
    }
  }

  double total = 0.0;
  for (double l : losses) total += l;
  return total;
}

}  // namespace radiant
