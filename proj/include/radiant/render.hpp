// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "radiant/camera.hpp"
#include "radiant/image.hpp"
#include "radiant/transform.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
  double near = 0.0;
  double far = 1.0;

  Vec3 at(double t) const { return origin + t * direction; }
};

enum class SampleSource : std::uint8_t { kObject, kBackground };

struct RaySample {
  double t = 0.0;
  double delta = 0.0;
  double density = 0.0;
  Vec3 color = Vec3::Zero();
  SampleSource source = SampleSource::kObject;
};

using RaySamples = std::vector<RaySample>;

/// `background` unset means a transparent background. `near`/`far` bound every
/// camera ray; `rng_seed` drives stratified jitter.
struct RenderConfig {
  int samples_per_ray = 192;
  bool jitter = false;
  std::optional<Vec3> background;
  std::uint64_t rng_seed = 0;
  double near = 0.1;
  double far = 6.0;

  void validate() const;
};

struct RenderedView {
  RgbImage rgb;
  ScalarImage alpha;
  ScalarImage depth;
};

struct CompositeResult {
  Vec3 rgb = Vec3::Zero();
  double alpha = 0.0;
  double depth = 0.0;
  /// Transmittance left after the last sample.
  double transmittance = 1.0;
};

/// Accumulated alpha below which a pixel reports the far sentinel as depth.
inline constexpr double kEmptyAlpha = 1e-4;

Ray generate_ray(const Camera& camera, int px, int py, double near, double far);

/// Stratified samples over [near, far]. `stream` selects the jitter stream
/// (combined with cfg.rng_seed), so equal inputs give equal depths.
RaySamples sample_along_ray(const Ray& ray, const RenderConfig& cfg,
                            std::uint64_t stream = 0);
void sample_along_ray(const Ray& ray, const RenderConfig& cfg, std::uint64_t stream,
                      RaySamples& out);

/// Emission-absorption compositing front to back. Samples must be sorted by
/// depth; debug builds check this.
CompositeResult composite_ray(const RaySamples& samples,
                              const std::optional<Vec3>& background, double far);

/// Jitter stream for pixel `pixel` of a render, field slot `slot`.
inline std::uint64_t pixel_stream(std::int64_t pixel, int slot) {
  return static_cast<std::uint64_t>(pixel) * 2 + static_cast<std::uint64_t>(slot);
}

/// Fills sample densities/colors from `field`. With a transform, samples are
/// looked up at their canonical position and density is scaled by
/// srt_density_correction.
void fill_samples(const VoxelField& field, const Ray& ray, RaySamples& samples,
                  const SrtTransform* transform = nullptr);

/// Depth-sorted union of object and background samples. Stable; ties go to
/// the background sample first.
void merge_samples(const RaySamples& object, const RaySamples& background,
                   RaySamples& out);

/// Renders every pixel in parallel (OpenMP). Deterministic given cfg.rng_seed
/// and independent of the thread count.
RenderedView render_view(const VoxelField& field, const Camera& camera,
                         const RenderConfig& cfg);

/// Renders object and background fields along the same rays, merging their
/// samples by depth. The object is seen through `transform` when given.
RenderedView render_merged(const VoxelField& object_field, const VoxelField& bkg_field,
                           const std::optional<SrtTransform>& transform,
                           const Camera& camera, const RenderConfig& cfg);

/// Density-weighted mean of voxel positions. Throws InputError on an empty field.
Vec3 object_centroid(const VoxelField& field);

/// Un-premultiplied rgb (rgb / alpha, 0 where alpha is 0) with alpha attached.
RgbaImage to_straight_rgba(const RenderedView& view);

/// Single-threaded implementations of the data-parallel kernels. Kept as the
/// reference the parallel versions are tested against.
namespace reference {

RenderedView render_view(const VoxelField& field, const Camera& camera,
                         const RenderConfig& cfg);
RenderedView render_merged(const VoxelField& object_field, const VoxelField& bkg_field,
                           const std::optional<SrtTransform>& transform,
                           const Camera& camera, const RenderConfig& cfg);

}  // namespace reference

}  // namespace radiant
