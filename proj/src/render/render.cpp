// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "radiant/error.hpp"

namespace radiant {

void RenderConfig::validate() const {
  if (samples_per_ray < 2) throw InputError("samples_per_ray must be >= 2");
  if (!(near >= 0.0) || !(near < far)) throw InputError("render range requires 0 <= near < far");
}

Ray generate_ray(const Camera& camera, int px, int py, double near, double far) {
  if (px < 0 || px >= camera.width || py < 0 || py >= camera.height) {
    throw std::out_of_range("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                            ") outside the camera image");
  }
  const Vec3 local((px + 0.5 - camera.cx) / camera.fx, (py + 0.5 - camera.cy) / camera.fy,
                   1.0);
  Ray ray;
  ray.origin = camera.position();
  ray.direction = (camera.rotation() * local).normalized();
  ray.near = near;
  ray.far = far;
  return ray;
}

void sample_along_ray(const Ray& ray, const RenderConfig& cfg, std::uint64_t stream,
                      RaySamples& out) {
  const int n = cfg.samples_per_ray;
  const double width = (ray.far - ray.near) / n;
  out.resize(n);
  StreamRng rng(derive_seed(cfg.rng_seed, stream));
  for (int i = 0; i < n; ++i) {
    const double u = cfg.jitter ? rng.uniform() : 0.5;
    out[i].t = ray.near + (i + u) * width;
    out[i].density = 0.0;
    out[i].color.setZero();
  }
  for (int i = 0; i + 1 < n; ++i) out[i].delta = out[i + 1].t - out[i].t;
  out[n - 1].delta = width;
  // Jittered neighbours can coincide only if u hits exactly 1 - u'; keep deltas positive.
  for (int i = 0; i + 1 < n; ++i) {
    if (!(out[i].delta > 0.0)) out[i].delta = width * 0x1.0p-30;
  }
}

RaySamples sample_along_ray(const Ray& ray, const RenderConfig& cfg, std::uint64_t stream) {
  RaySamples out;
  sample_along_ray(ray, cfg, stream, out);
  return out;
}

CompositeResult composite_ray(const RaySamples& samples,
                              const std::optional<Vec3>& background, double far) {
#ifndef NDEBUG
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].t < samples[i - 1].t) {
      throw std::logic_error("composite_ray: samples not sorted by depth");
    }
  }
#endif
  CompositeResult r;
  double transmittance = 1.0;
  double depth_sum = 0.0;
  for (const RaySample& s : samples) {
    const double tau = s.density * s.delta;
    const double a = -std::expm1(-tau);
    const double w = transmittance * a;
    r.rgb += w * s.color;
    r.alpha += w;
    depth_sum += w * s.t;
    transmittance *= std::exp(-tau);
  }
  r.transmittance = transmittance;
  if (background) r.rgb += (1.0 - r.alpha) * *background;
  r.depth = r.alpha < kEmptyAlpha ? far : depth_sum / std::max(r.alpha, 1e-6);
  return r;
}

void fill_samples(const VoxelField& field, const Ray& ray, RaySamples& samples,
                  const SrtTransform* transform) {
  const double correction = transform ? srt_density_correction(*transform) : 1.0;
  TrilinearStencil st;
  for (RaySample& s : samples) {
    Vec3 p = ray.at(s.t);
    if (transform) p = transform->world_to_canonical(p);
    if (field.stencil(p, st)) {
      const FieldValue v = field.evaluate(st);
      s.density = v.density * correction;
      s.color = v.color;
    } else {
      s.density = 0.0;
      s.color.setZero();
    }
  }
}

void merge_samples(const RaySamples& object, const RaySamples& background,
                   RaySamples& out) {
  out.resize(object.size() + background.size());
  // std::merge takes from the first range on ties.
  std::merge(background.begin(), background.end(), object.begin(), object.end(),
             out.begin(),
             [](const RaySample& a, const RaySample& b) { return a.t < b.t; });
}

Vec3 object_centroid(const VoxelField& field) {
  const auto& res = field.resolution();
  Vec3 acc = Vec3::Zero();
  double total = 0.0;
  for (int k = 0; k < res.nz; ++k) {
    for (int j = 0; j < res.ny; ++j) {
      for (int i = 0; i < res.nx; ++i) {
        const double d = field.density(field.index(i, j, k));
        if (d <= 0.0) continue;
        acc += d * field.voxel_position(i, j, k);
        total += d;
      }
    }
  }
  if (!(total > 0.0)) throw InputError("empty object field");
  return acc / total;
}

RgbaImage to_straight_rgba(const RenderedView& view) {
  RgbaImage out(view.rgb.width, view.rgb.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = std::clamp(view.alpha[i], 0.0, 1.0);
    out[i].alpha = a;
    out[i].rgb = a > 0.0 ? Vec3((view.rgb[i] / a).cwiseMin(1.0).cwiseMax(0.0))
                         : Vec3::Zero();
  }
  return out;
}

}  // namespace radiant
