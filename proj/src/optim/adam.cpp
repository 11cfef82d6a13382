// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "radiant/error.hpp"
#include "radiant/optimizer.hpp"

namespace radiant {

void TrainConfig::validate() const {
  if (iterations < 0) throw InputError("train.iterations must be >= 0");
  if (rays_per_batch <= 0) throw InputError("train.rays_per_batch must be > 0");
  if (!(learning_rate > 0.0)) throw InputError("train.learning_rate must be > 0");
  if (density_learning_rate && !(*density_learning_rate > 0.0)) {
    throw InputError("train.density_learning_rate must be > 0");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InputError("train.adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InputError("train.adam_eps must be > 0");
  if (!(depth_loss_weight >= 0.0)) throw InputError("train.depth_loss_weight must be >= 0");
  if (samples_per_ray < 2) throw InputError("train.samples_per_ray must be >= 2");
}

void adam_step(VoxelField& field, std::span<const double> grad, AdamState& state,
               const TrainConfig& cfg) {
  std::span<double> params = field.params();
  if (grad.size() != params.size()) throw InputError("adam_step: gradient shape mismatch");
  if (state.first_moment.size() != params.size()) {
    state.first_moment.assign(params.size(), 0.0);
    state.second_moment.assign(params.size(), 0.0);
    state.step = 0;
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw DivergenceError("divergence");
  }

  ++state.step;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double step_density = cfg.density_lr() / c1;
  const double step_color = cfg.learning_rate / c1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(c2);
  const double eps = cfg.adam_eps;
  double* m = state.first_moment.data();
  double* v = state.second_moment.data();
  double* p = params.data();
  const double* g = grad.data();
  const std::int64_t voxels = static_cast<std::int64_t>(params.size() / VoxelField::kChannels);

#pragma omp parallel for schedule(static)
  for (std::int64_t vox = 0; vox < voxels; ++vox) {
    const std::int64_t base = vox * VoxelField::kChannels;
    for (int c = 0; c < VoxelField::kChannels; ++c) {
      const std::int64_t i = base + c;
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double step = c == 0 ? step_density : step_color;
      const double next = p[i] - step * m[i] / (std::sqrt(v[i]) * inv_sqrt_c2 + eps);
      p[i] = c == 0 ? std::max(next, 0.0) : std::clamp(next, 0.0, 1.0);
    }
  }
}

VoxelField initial_field(const GridResolution& res, const Aabb& bounds) {
  return VoxelField(res, bounds, 0.01, Vec3::Constant(0.5));
}

}  // namespace radiant
