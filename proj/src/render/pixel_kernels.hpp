// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

// Per-pixel bodies shared by the parallel and reference render loops.

#pragma once

#include "radiant/render.hpp"

namespace radiant::detail {

struct PixelScratch {
  RaySamples object;
  RaySamples background;
  RaySamples merged;
};

inline RenderedView make_view(const Camera& camera) {
  return {RgbImage(camera.width, camera.height), ScalarImage(camera.width, camera.height),
          ScalarImage(camera.width, camera.height)};
}

inline void store(RenderedView& view, std::size_t i, const CompositeResult& r) {
  view.rgb[i] = r.rgb;
  view.alpha[i] = r.alpha;
  view.depth[i] = r.depth;
}

inline CompositeResult render_pixel(const VoxelField& field, const Camera& camera,
                                    const RenderConfig& cfg, int px, int py,
                                    PixelScratch& scratch) {
  const Ray ray = generate_ray(camera, px, py, cfg.near, cfg.far);
  const std::int64_t pixel = static_cast<std::int64_t>(py) * camera.width + px;
  sample_along_ray(ray, cfg, pixel_stream(pixel, 0), scratch.object);
  fill_samples(field, ray, scratch.object);
  return composite_ray(scratch.object, cfg.background, cfg.far);
}

inline CompositeResult render_merged_pixel(const VoxelField& object_field,
                                           const VoxelField& bkg_field,
                                           const SrtTransform* transform,
                                           const Camera& camera, const RenderConfig& cfg,
                                           int px, int py, PixelScratch& scratch) {
  const Ray ray = generate_ray(camera, px, py, cfg.near, cfg.far);
  const std::int64_t pixel = static_cast<std::int64_t>(py) * camera.width + px;
  sample_along_ray(ray, cfg, pixel_stream(pixel, 0), scratch.object);
  sample_along_ray(ray, cfg, pixel_stream(pixel, 1), scratch.background);
  fill_samples(object_field, ray, scratch.object, transform);
  fill_samples(bkg_field, ray, scratch.background);
  for (RaySample& s : scratch.object) s.source = SampleSource::kObject;
  for (RaySample& s : scratch.background) s.source = SampleSource::kBackground;
  merge_samples(scratch.object, scratch.background, scratch.merged);
  return composite_ray(scratch.merged, cfg.background, cfg.far);
}

inline const SrtTransform* active_transform(const std::optional<SrtTransform>& t) {
  if (!t) return nullptr;
  t->validate();
  return t->is_identity() ? nullptr : &*t;
}

}  // namespace radiant::detail
