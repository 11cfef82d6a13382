// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radiant/dataset.hpp"
#include "radiant/render.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

enum class PrimitiveShape { kSphere, kBox };
enum class PrimitiveRole { kObject, kBackground };

/// Sphere: size.x() is the radius. Box: size is the full extent per axis.
struct Primitive {
  PrimitiveShape shape = PrimitiveShape::kSphere;
  Vec3 center = Vec3::Zero();
  Vec3 size = Vec3::Constant(0.3);
  Vec3 color = Vec3(0.85, 0.15, 0.1);
  PrimitiveRole role = PrimitiveRole::kObject;

  bool contains(const Vec3& p) const;
  Aabb extent() const;
};

/// Horizontal slab z in [top - thickness, top] with a checkerboard in x/y.
struct GroundPlane {
  bool enabled = true;
  double top = -0.6;
  double thickness = 0.16;
  Vec3 color_a = Vec3(0.9, 0.9, 0.85);
  Vec3 color_b = Vec3(0.15, 0.2, 0.3);
  double checker_size = 0.5;

  Vec3 color_at(double x, double y) const;
};

/// Cameras on a circle of `orbit_radius` around look_at (in x/y) at world
/// height `height`, looking at look_at with +z up.
struct CameraRig {
  int count = 24;
  double orbit_radius = 2.8;
  double height = 1.2;
  Vec3 look_at = Vec3(0.0, 0.0, -0.2);
  double fov_deg = 40.0;
  int image_width = 64;
  int image_height = 64;
  double angle_offset_deg = 0.0;
};

struct SceneSpec {
  std::vector<Primitive> primitives;
  GroundPlane ground;
  GridResolution resolution{96, 96, 96};
  Aabb bounds;
  CameraRig rig;
  /// Density inside every primitive (1 / world length).
  double density = 50.0;
  /// Per-voxel color perturbation amplitude drawn from the seed; 0 disables.
  double color_noise = 0.0;
  int samples_per_ray = 192;

  /// Throws InputError: needs an object primitive, a background element,
  /// more than 3 cameras, and primitives inside bounds.
  void validate() const;
};

/// Red sphere floating above a checkered ground with a green background box.
SceneSpec default_scene_spec();

struct SceneFields {
  VoxelField full;
  VoxelField object;
  VoxelField background;
};

/// Rasterizes primitives at grid nodes: density spec.density inside, 0
/// outside. Empty nodes adjacent to a filled node carry that node's color.
SceneFields generate_scene(const SceneSpec& spec, std::uint64_t seed);

std::vector<Camera> orbit_cameras(const CameraRig& rig);

/// Cameras interleaved between the training rig's viewpoints, for held-out
/// evaluation.
std::vector<Camera> heldout_cameras(const CameraRig& rig, int count);

/// Near/far covering `bounds` from every camera.
DatasetMeta scene_meta(const std::vector<Camera>& cameras, const Aabb& bounds);

/// Deterministic ground-truth render settings (no jitter).
RenderConfig ground_truth_render_config(const SceneSpec& spec, const DatasetMeta& meta);

enum class ImageKind { kRgb, kRgba };

/// Renders `source` from every camera. kRgba keeps straight alpha over a
/// transparent background; kRgb composites over black. Masks come from
/// `mask_source` (alpha > 0.5); depth is stored where alpha > 0.5, else 0.
MultiViewDataset render_dataset(const VoxelField& source, const VoxelField& mask_source,
                                const std::vector<Camera>& cameras, const DatasetMeta& meta,
                                const RenderConfig& cfg, ImageKind kind);

MaskImage mask_from_alpha(const ScalarImage& alpha, double threshold);

/// Perfect inpainting: the background field rendered from the view's camera
/// over black.
RgbImage oracle_inpaint(std::size_t view, const MultiViewDataset& dataset,
                        const VoxelField& gt_background, const RenderConfig& cfg);

/// 10 log10(1 / MSE) over all channels; 99 dB when MSE < 1e-10.
double psnr(const RgbImage& a, const RgbImage& b);

/// Mean alpha over pixels outside the mask. Throws when nothing is outside.
double leakage(const ScalarImage& alpha, const MaskImage& gt_mask);

/// Intersection over union of two masks (1 when both are empty).
double mask_iou(const MaskImage& a, const MaskImage& b);

/// rgb * alpha composited over a solid color.
RgbImage composite_over(const RgbaImage& img, const Vec3& bg);

}  // namespace radiant
