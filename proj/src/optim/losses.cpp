// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "radiant/optimizer.hpp"

namespace radiant {

double blended_photometric_loss(const Vec3& pred_rgb, double /*pred_alpha*/,
                                const Rgba& target, const Vec3& bg, Vec3* grad) {
  const Vec3 blended = target.alpha * target.rgb + (1.0 - target.alpha) * bg;
  const Vec3 diff = pred_rgb - blended;
  if (grad) *grad = diff * (2.0 / 3.0);
  return diff.squaredNorm() / 3.0;
}

double depth_loss(double pred_depth, double true_depth, bool valid, double* grad) {
  if (!valid) {
    if (grad) *grad = 0.0;
    return 0.0;
  }
  const double diff = pred_depth - true_depth;
  if (grad) *grad = 2.0 * diff;
  return diff * diff;
}

void backprop_ray(const RaySamples& samples, const CompositeResult& forward,
                  const CompositeGrad& upstream, const std::optional<Vec3>& background,
                  std::vector<SampleGrad>& out) {
  const std::size_t n = samples.size();
  out.assign(n, SampleGrad{});
  thread_local std::vector<double> weighted;
  weighted.resize(n);

  // e_j = d loss / d w_j = g_rgb . (c_j - bg) + g_alpha + g_depth * (t_j - D) / A
  const bool depth_live = forward.alpha >= kEmptyAlpha && upstream.depth != 0.0;
  const double depth_scale = depth_live ? upstream.depth / forward.alpha : 0.0;
  const Vec3 bg = background.value_or(Vec3::Zero());

  double transmittance = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const RaySample& s = samples[i];
    const double tau = s.density * s.delta;
    const double w = transmittance * -std::expm1(-tau);
    transmittance *= std::exp(-tau);
    double e = upstream.rgb.dot(s.color - bg) + upstream.alpha;
    if (depth_live) e += depth_scale * (s.t - forward.depth);
    out[i].color = w * upstream.rgb;
    out[i].density = transmittance * e;  // T_{i+1} e_i
    weighted[i] = w * e;
  }

  // d loss / d sigma_i = delta_i * (T_{i+1} e_i - sum_{j>i} w_j e_j)
  double suffix = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    out[i].density = samples[i].delta * (out[i].density - suffix);
    suffix += weighted[i];
  }
}

std::vector<SampleGrad> backprop_ray(const RaySamples& samples,
                                     const CompositeGrad& upstream,
                                     const std::optional<Vec3>& background, double far) {
  std::vector<SampleGrad> out;
  backprop_ray(samples, composite_ray(samples, background, far), upstream, background, out);
  return out;
}

}  // namespace radiant
