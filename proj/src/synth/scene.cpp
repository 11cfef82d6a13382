// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radiant/error.hpp"
#include "radiant/synth.hpp"

namespace radiant {

bool Primitive::contains(const Vec3& p) const {
  if (shape == PrimitiveShape::kSphere) return (p - center).squaredNorm() <= size.x() * size.x();
  return ((p - center).cwiseAbs().array() <= 0.5 * size.array()).all();
}

Aabb Primitive::extent() const {
  const Vec3 half = shape == PrimitiveShape::kSphere ? Vec3::Constant(size.x()) : Vec3(0.5 * size);
  return {center - half, center + half};
}

Vec3 GroundPlane::color_at(double x, double y) const {
  const auto cell = [&](double v) { return static_cast<long>(std::floor(v / checker_size)); };
  return ((cell(x) + cell(y)) & 1) ? color_b : color_a;
}

void SceneSpec::validate() const {
  if (!(bounds.min.array() < bounds.max.array()).all()) {
    throw InputError("scene bounds must satisfy min < max");
  }
  if (resolution.nx < 2 || resolution.ny < 2 || resolution.nz < 2) {
    throw InputError("scene resolution must be >= 2 per axis");
  }
  bool has_object = false;
  bool has_background = ground.enabled;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const Primitive& p = primitives[i];
    if (p.role == PrimitiveRole::kObject) has_object = true;
    else has_background = true;
    if (!(p.size.array() > 0.0).all()) {
      throw InputError("primitive " + std::to_string(i) + " must have positive size");
    }
    const Aabb e = p.extent();
    if (!bounds.contains(e.min) || !bounds.contains(e.max)) {
      throw InputError("primitive " + std::to_string(i) + " lies outside the scene bounds");
    }
  }
  if (ground.enabled) {
    if (ground.top > bounds.max.z() || ground.top - ground.thickness < bounds.min.z() ||
        !(ground.thickness > 0.0) || !(ground.checker_size > 0.0)) {
      throw InputError("ground plane lies outside the scene bounds");
    }
  }
  if (!has_object) throw InputError("scene needs at least one object primitive");
  if (!has_background) throw InputError("scene needs at least one background element");
  if (rig.count <= 3) throw InputError("scene camera rig needs more than 3 cameras");
  if (rig.image_width <= 0 || rig.image_height <= 0) {
    throw InputError("scene image size must be positive");
  }
  if (!(density > 0.0)) throw InputError("scene density must be > 0");
  if (samples_per_ray < 2) throw InputError("scene samples_per_ray must be >= 2");
}

SceneSpec default_scene_spec() {
  SceneSpec spec;
  spec.primitives.push_back({PrimitiveShape::kSphere, Vec3(0.15, -0.1, -0.05),
                             Vec3::Constant(0.35), Vec3(0.85, 0.2, 0.1),
                             PrimitiveRole::kObject});
  spec.primitives.push_back({PrimitiveShape::kBox, Vec3(-0.55, 0.5, -0.3),
                             Vec3(0.4, 0.4, 0.6), Vec3(0.2, 0.6, 0.3),
                             PrimitiveRole::kBackground});
  return spec;
}

SceneFields generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  SceneFields out{VoxelField(spec.resolution, spec.bounds),
                  VoxelField(spec.resolution, spec.bounds),
                  VoxelField(spec.resolution, spec.bounds)};
  const auto& res = spec.resolution;
  const auto perturb = [&](const Vec3& c, std::int64_t v, std::uint64_t salt) -> Vec3 {
    if (spec.color_noise <= 0.0) return c;
    StreamRng rng(derive_seed(seed, static_cast<std::uint64_t>(v) * 2 + salt));
    Vec3 n(rng.uniform(), rng.uniform(), rng.uniform());
    return (c + spec.color_noise * (2.0 * n - Vec3::Ones())).cwiseMax(0.0).cwiseMin(1.0);
  };

  for (int k = 0; k < res.nz; ++k) {
    for (int j = 0; j < res.ny; ++j) {
      for (int i = 0; i < res.nx; ++i) {
        const std::int64_t v = out.full.index(i, j, k);
        const Vec3 p = out.full.voxel_position(i, j, k);

        double obj_density = 0.0, bkg_density = 0.0;
        Vec3 obj_color = Vec3::Zero(), bkg_color = Vec3::Zero();
        if (spec.ground.enabled && p.z() <= spec.ground.top &&
            p.z() >= spec.ground.top - spec.ground.thickness) {
          bkg_density = spec.density;
          bkg_color = spec.ground.color_at(p.x(), p.y());
        }
        // Later primitives override earlier ones of the same role.
        for (const Primitive& prim : spec.primitives) {
          if (!prim.contains(p)) continue;
          if (prim.role == PrimitiveRole::kObject) {
            obj_density = spec.density;
            obj_color = prim.color;
          } else {
            bkg_density = spec.density;
            bkg_color = prim.color;
          }
        }
        if (obj_density > 0.0) obj_color = perturb(obj_color, v, 0);
        if (bkg_density > 0.0) bkg_color = perturb(bkg_color, v, 1);

        out.object.density(v) = obj_density;
        out.object.set_color(v, obj_color);
        out.background.density(v) = bkg_density;
        out.background.set_color(v, bkg_color);
        // Union: max density, color of the densest contributor (object on ties).
        out.full.density(v) = std::max(obj_density, bkg_density);
        if (obj_density > 0.0 && obj_density >= bkg_density) {
          out.full.set_color(v, obj_color);
        } else {
          out.full.set_color(v, bkg_color);
        }
      }
    }
  }
  // Empty nodes next to a surface take a filled neighbour's color so that
  // trilinear blending inside boundary cells does not darken the surface.
  const auto dilate = [&](VoxelField& f, std::vector<std::uint8_t>& dilated) {
    dilated.assign(static_cast<std::size_t>(res.voxel_count()), 0);
    const VoxelField src = f;
    for (int k = 0; k < res.nz; ++k) {
      for (int j = 0; j < res.ny; ++j) {
        for (int i = 0; i < res.nx; ++i) {
          const std::int64_t v = f.index(i, j, k);
          if (src.density(v) > 0.0) continue;
          for (int n = 0; n < 27 && !dilated[v]; ++n) {
            const int a = i + n % 3 - 1, b = j + (n / 3) % 3 - 1, c = k + n / 9 - 1;
            if (a < 0 || b < 0 || c < 0 || a >= res.nx || b >= res.ny || c >= res.nz) continue;
            const std::int64_t u = f.index(a, b, c);
            if (src.density(u) > 0.0) {
              f.set_color(v, src.color(u));
              dilated[v] = 1;
            }
          }
        }
      }
    }
  };
  std::vector<std::uint8_t> obj_dilated, bkg_dilated;
  dilate(out.object, obj_dilated);
  dilate(out.background, bkg_dilated);
  for (std::int64_t v = 0; v < res.voxel_count(); ++v) {
    if (out.full.density(v) > 0.0) continue;
    if (obj_dilated[v]) out.full.set_color(v, out.object.color(v));
    else if (bkg_dilated[v]) out.full.set_color(v, out.background.color(v));
  }
  return out;
}

std::vector<Camera> orbit_cameras(const CameraRig& rig) {
  std::vector<Camera> cams;
  cams.reserve(rig.count);
  for (int i = 0; i < rig.count; ++i) {
    const double deg = rig.angle_offset_deg + 360.0 * i / rig.count;
    const double rad = deg * std::numbers::pi / 180.0;
    const Vec3 eye(rig.look_at.x() + rig.orbit_radius * std::cos(rad),
                   rig.look_at.y() + rig.orbit_radius * std::sin(rad), rig.height);
    cams.push_back(look_at_camera(eye, rig.look_at, Vec3::UnitZ(), rig.image_width,
                                  rig.image_height, rig.fov_deg));
  }
  return cams;
}

std::vector<Camera> heldout_cameras(const CameraRig& rig, int count) {
  CameraRig h = rig;
  h.count = count;
  h.angle_offset_deg = rig.angle_offset_deg + 180.0 / rig.count + 360.0 / (3.0 * count);
  return orbit_cameras(h);
}

DatasetMeta scene_meta(const std::vector<Camera>& cameras, const Aabb& bounds) {
  DatasetMeta meta;
  meta.bounds = bounds;
  double near = std::numeric_limits<double>::infinity();
  double far = 0.0;
  for (const Camera& cam : cameras) {
    const Vec3 o = cam.position();
    const Vec3 closest = o.cwiseMax(bounds.min).cwiseMin(bounds.max);
    near = std::min(near, (closest - o).norm());
    for (int c = 0; c < 8; ++c) {
      const Vec3 corner((c & 1) ? bounds.max.x() : bounds.min.x(),
                        (c & 2) ? bounds.max.y() : bounds.min.y(),
                        (c & 4) ? bounds.max.z() : bounds.min.z());
      far = std::max(far, (corner - o).norm());
    }
  }
  meta.near = std::max(0.05, near);
  meta.far = std::max(far, meta.near + 1e-3);
  return meta;
}

RenderConfig ground_truth_render_config(const SceneSpec& spec, const DatasetMeta& meta) {
  RenderConfig cfg;
  cfg.samples_per_ray = spec.samples_per_ray;
  cfg.jitter = false;
  cfg.near = meta.near;
  cfg.far = meta.far;
  return cfg;
}

MaskImage mask_from_alpha(const ScalarImage& alpha, double threshold) {
  MaskImage mask(alpha.width, alpha.height, 0);
  for (std::size_t i = 0; i < alpha.size(); ++i) mask[i] = alpha[i] > threshold ? 1 : 0;
  return mask;
}

MultiViewDataset render_dataset(const VoxelField& source, const VoxelField& mask_source,
                                const std::vector<Camera>& cameras, const DatasetMeta& meta,
                                const RenderConfig& cfg, ImageKind kind) {
  MultiViewDataset ds;
  ds.meta = meta;
  ds.has_alpha = kind == ImageKind::kRgba;
  RenderConfig rc = cfg;
  rc.background.reset();
  for (const Camera& cam : cameras) {
    const RenderedView view = render_view(source, cam, rc);
    DatasetView dv;
    dv.camera = cam;
    if (kind == ImageKind::kRgba) {
      dv.image = to_straight_rgba(view);
    } else {
      dv.image = RgbaImage(cam.width, cam.height);
      for (std::size_t i = 0; i < view.rgb.size(); ++i) dv.image[i] = {view.rgb[i], 1.0};
    }
    const ScalarImage mask_alpha =
        &mask_source == &source ? view.alpha : render_view(mask_source, cam, rc).alpha;
    dv.mask = mask_from_alpha(mask_alpha, 0.5);
    ScalarImage depth(cam.width, cam.height, 0.0);
    for (std::size_t i = 0; i < depth.size(); ++i) {
      if (view.alpha[i] > 0.5) depth[i] = view.depth[i];
    }
    dv.depth = std::move(depth);
    ds.views.push_back(std::move(dv));
  }
  return ds;
}

RgbImage oracle_inpaint(std::size_t view, const MultiViewDataset& dataset,
                        const VoxelField& gt_background, const RenderConfig& cfg) {
  if (view >= dataset.size()) throw InputError("oracle_inpaint: view index out of range");
  RenderConfig rc = cfg;
  rc.background = Vec3::Zero();
  return render_view(gt_background, dataset.views[view].camera, rc).rgb;
}

double psnr(const RgbImage& a, const RgbImage& b) {
  require_same_shape(a, b, "psnr");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]).squaredNorm();
  const double mse = sum / (3.0 * static_cast<double>(a.size()));
  return mse < 1e-10 ? 99.0 : 10.0 * std::log10(1.0 / mse);
}

double leakage(const ScalarImage& alpha, const MaskImage& gt_mask) {
  require_same_shape(alpha, gt_mask, "leakage");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (gt_mask[i] == 0) {
      sum += alpha[i];
      ++count;
    }
  }
  if (count == 0) throw InputError("no background pixels");
  return sum / static_cast<double>(count);
}

double mask_iou(const MaskImage& a, const MaskImage& b) {
  require_same_shape(a, b, "mask_iou");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RgbImage composite_over(const RgbaImage& img, const Vec3& bg) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = img[i].alpha * img[i].rgb + (1.0 - img[i].alpha) * bg;
  }
  return out;
}

}  // namespace radiant
