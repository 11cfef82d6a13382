// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <limits>

#include "../optim/ray_grad_kernel.hpp"

namespace radiant::reference {

double accumulate_field_gradient(const VoxelField& field, std::span<const TrainRay> rays,
                                 const RenderConfig& cfg, const RayLossFn& loss,
                                 std::span<double> grad) {
  constexpr std::int64_t kAll = std::numeric_limits<std::int64_t>::max();
  detail::RayScratch scratch;
  double total = 0.0;
  for (std::size_t r = 0; r < rays.size(); ++r) {
    total += detail::forward_backward(field, rays[r], cfg, r, loss, scratch);
    for (std::size_t s = 0; s < scratch.samples.size(); ++s) {
      detail::scatter_sample(field, rays[r].ray, scratch.samples[s].t, scratch.grads[s],
                             grad, 0, kAll);
    }
  }
  return total;
}

}  // namespace radiant::reference
