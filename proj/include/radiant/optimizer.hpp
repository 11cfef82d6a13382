// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "radiant/dataset.hpp"
#include "radiant/render.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

struct TrainConfig {
  int iterations = 1500;
  int rays_per_batch = 4096;
  double learning_rate = 0.03;
  /// Step size for density parameters; falls back to learning_rate.
  std::optional<double> density_learning_rate;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.99;
  double adam_eps = 1e-8;
  double depth_loss_weight = 0.0;
  std::uint64_t rng_seed = 0;
  int samples_per_ray = 192;
  bool jitter = true;
  /// Resolution of a freshly initialised field.
  GridResolution resolution{96, 96, 96};
  /// Object training composites over a fresh random color per batch unless a
  /// fixed color is given here.
  std::optional<Vec3> fixed_background;

  double density_lr() const { return density_learning_rate.value_or(learning_rate); }
  void validate() const;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::int64_t step = 0;
};

/// Upstream gradient of a per-ray loss w.r.t. the composited outputs.
struct CompositeGrad {
  Vec3 rgb = Vec3::Zero();
  double alpha = 0.0;
  double depth = 0.0;
};

struct SampleGrad {
  double density = 0.0;
  Vec3 color = Vec3::Zero();
};

/// Mean squared error over rgb between `pred_rgb` (already composited over
/// `bg`) and the target composited over `bg`. `grad`, when given, receives
/// d loss / d pred_rgb.
double blended_photometric_loss(const Vec3& pred_rgb, double pred_alpha, const Rgba& target,
                                const Vec3& bg, Vec3* grad = nullptr);

/// Squared depth error when `valid`, else 0.
double depth_loss(double pred_depth, double true_depth, bool valid, double* grad = nullptr);

/// Exact gradients of composite_ray w.r.t. each sample's density and color.
/// `forward` must be composite_ray(samples, background, far).
void backprop_ray(const RaySamples& samples, const CompositeResult& forward,
                  const CompositeGrad& upstream, const std::optional<Vec3>& background,
                  std::vector<SampleGrad>& out);
std::vector<SampleGrad> backprop_ray(const RaySamples& samples,
                                     const CompositeGrad& upstream,
                                     const std::optional<Vec3>& background, double far);

/// Computes the per-ray loss and its upstream gradient for ray `index`.
using RayLossFn =
    std::function<double(std::size_t index, const CompositeResult&, CompositeGrad&)>;

struct TrainRay {
  Ray ray;
  std::uint64_t stream = 0;
};

/// Renders `rays` through `field`, evaluates `loss`, and adds d loss / d params
/// into `grad` (same layout as field.params()). Returns the per-ray losses
/// summed in ray order. Parallel over rays; the result does not depend on the
/// thread count.
double accumulate_field_gradient(const VoxelField& field, std::span<const TrainRay> rays,
                                 const RenderConfig& cfg, const RayLossFn& loss,
                                 std::span<double> grad);

namespace reference {
double accumulate_field_gradient(const VoxelField& field, std::span<const TrainRay> rays,
                                 const RenderConfig& cfg, const RayLossFn& loss,
                                 std::span<double> grad);
}  // namespace reference

/// Bias-corrected Adam on every parameter, then clamps density >= 0 and color
/// to [0, 1]. Throws DivergenceError on a non-finite gradient.
void adam_step(VoxelField& field, std::span<const double> grad, AdamState& state,
               const TrainConfig& cfg);

/// Density 0.01 and 0.5 grey everywhere.
VoxelField initial_field(const GridResolution& res, const Aabb& bounds);

enum class FieldRole { kObject, kBackground };

struct StepMetrics {
  int iteration = 0;
  double loss = 0.0;
  /// From the batch rgb MSE.
  double psnr = 0.0;
  /// Mean |pred - true| depth over valid batch rays (background role), else 0.
  double depth_mae = 0.0;
  int depth_rays = 0;
};

using MetricsSink = std::function<void(const StepMetrics&)>;

/// Stateful training loop for one field: random ray batches over the whole
/// dataset, one Adam step per batch. The dataset is passed per step so callers
/// may update images between steps.
class FieldTrainer {
 public:
  FieldTrainer(FieldRole role, VoxelField field, TrainConfig cfg, double near, double far);

  StepMetrics step(const MultiViewDataset& data);

  const VoxelField& field() const { return field_; }
  VoxelField release() { return std::move(field_); }
  int iterations_done() const { return iteration_; }

 private:
  FieldRole role_;
  VoxelField field_;
  TrainConfig cfg_;
  RenderConfig render_cfg_;
  std::mt19937_64 rng_;
  AdamState adam_;
  std::vector<double> grad_;
  std::vector<TrainRay> rays_;
  std::vector<std::pair<int, std::int64_t>> picks_;
  std::vector<double> sq_err_;
  std::vector<double> depth_err_;
  int iteration_ = 0;
};

/// Fits an object field to straight-alpha RGBA views, compositing targets and
/// renders over a random color per batch.
VoxelField train_object_field(const MultiViewDataset& dataset, const TrainConfig& cfg,
                              std::optional<VoxelField> init = std::nullopt,
                              const MetricsSink& sink = {});

/// Fits a background field to inpainted RGB views (over black) plus optional
/// true depth weighted by cfg.depth_loss_weight.
VoxelField train_background_field(const MultiViewDataset& dataset, const TrainConfig& cfg,
                                  std::optional<VoxelField> init = std::nullopt,
                                  const MetricsSink& sink = {});

}  // namespace radiant
