// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include "pixel_kernels.hpp"

namespace radiant {

RenderedView render_view(const VoxelField& field, const Camera& camera,
                         const RenderConfig& cfg) {
  cfg.validate();
  RenderedView view = detail::make_view(camera);
#pragma omp parallel
  {
    detail::PixelScratch scratch;
#pragma omp for schedule(dynamic, 2)
    for (int py = 0; py < camera.height; ++py) {
      for (int px = 0; px < camera.width; ++px) {
        const std::size_t i = static_cast<std::size_t>(py) * camera.width + px;
        detail::store(view, i, detail::render_pixel(field, camera, cfg, px, py, scratch));
      }
    }
  }
  return view;
}

RenderedView render_merged(const VoxelField& object_field, const VoxelField& bkg_field,
                           const std::optional<SrtTransform>& transform,
                           const Camera& camera, const RenderConfig& cfg) {
  cfg.validate();
  const SrtTransform* xf = detail::active_transform(transform);
  RenderedView view = detail::make_view(camera);
#pragma omp parallel
  {
    detail::PixelScratch scratch;
#pragma omp for schedule(dynamic, 2)
    for (int py = 0; py < camera.height; ++py) {
      for (int px = 0; px < camera.width; ++px) {
        const std::size_t i = static_cast<std::size_t>(py) * camera.width + px;
        detail::store(view, i,
                      detail::render_merged_pixel(object_field, bkg_field, xf, camera,
                                                  cfg, px, py, scratch));
      }
    }
  }
  return view;
}

}  // namespace radiant
