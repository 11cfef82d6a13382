// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "radiant/error.hpp"
#include "radiant/optimizer.hpp"

namespace radiant {

namespace {

constexpr std::uint64_t kBatchStream = 1;
constexpr std::uint64_t kJitterStream = 2;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double psnr_from_mse(double mse) {
  return mse < 1e-10 ? 99.0 : 10.0 * std::log10(1.0 / mse);
}

}  // namespace

FieldTrainer::FieldTrainer(FieldRole role, VoxelField field, TrainConfig cfg, double near,
                           double far)
    : role_(role),
      field_(std::move(field)),
      cfg_(std::move(cfg)),
      rng_(derive_seed(cfg_.rng_seed, kBatchStream)) {
  cfg_.validate();
  render_cfg_.samples_per_ray = cfg_.samples_per_ray;
  render_cfg_.jitter = cfg_.jitter;
  render_cfg_.rng_seed = derive_seed(cfg_.rng_seed, kJitterStream);
  render_cfg_.near = near;
  render_cfg_.far = far;
  render_cfg_.validate();
  grad_.resize(field_.params().size());
}

StepMetrics FieldTrainer::step(const MultiViewDataset& data) {
  if (data.empty()) throw InputError("training dataset is empty");
  const std::size_t batch = static_cast<std::size_t>(cfg_.rays_per_batch);

  Vec3 bg = Vec3::Zero();
  if (role_ == FieldRole::kObject) {
    if (cfg_.fixed_background) {
      bg = *cfg_.fixed_background;
    } else {
      bg = Vec3(uniform01(rng_), uniform01(rng_), uniform01(rng_));
    }
  }
  render_cfg_.background = bg;

  std::int64_t total_pixels = 0;
  for (const auto& v : data.views) total_pixels += static_cast<std::int64_t>(v.image.size());
  std::uniform_int_distribution<std::int64_t> pick_pixel(0, total_pixels - 1);

  rays_.resize(batch);
  picks_.resize(batch);
  for (std::size_t r = 0; r < batch; ++r) {
    std::int64_t g = pick_pixel(rng_);
    int view = 0;
    while (g >= static_cast<std::int64_t>(data.views[view].image.size())) {
      g -= static_cast<std::int64_t>(data.views[view].image.size());
      ++view;
    }
    const Camera& cam = data.views[view].camera;
    const int px = static_cast<int>(g % cam.width);
    const int py = static_cast<int>(g / cam.width);
    picks_[r] = {view, g};
    rays_[r].ray = generate_ray(cam, px, py, render_cfg_.near, render_cfg_.far);
    rays_[r].stream = static_cast<std::uint64_t>(iteration_) * batch + r;
  }

  sq_err_.assign(batch, 0.0);
  depth_err_.assign(batch, -1.0);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  const bool use_depth = role_ == FieldRole::kBackground && cfg_.depth_loss_weight > 0.0;

  const RayLossFn loss = [&](std::size_t r, const CompositeResult& fwd, CompositeGrad& up) {
    const auto [view, pixel] = picks_[r];
    const DatasetView& dv = data.views[view];
    Rgba target = dv.image[pixel];
    if (role_ == FieldRole::kBackground) target.alpha = 1.0;
    Vec3 g_rgb;
    const double rgb_loss = blended_photometric_loss(fwd.rgb, fwd.alpha, target, bg, &g_rgb);
    sq_err_[r] = rgb_loss;
    up.rgb = g_rgb * inv_batch;
    double value = rgb_loss;
    if (role_ == FieldRole::kBackground && dv.depth) {
      const double true_depth = (*dv.depth)[pixel];
      const bool valid = true_depth > 0.0;
      if (valid) depth_err_[r] = std::abs(fwd.depth - true_depth);
      if (use_depth) {
        double g_depth = 0.0;
        value += cfg_.depth_loss_weight * depth_loss(fwd.depth, true_depth, valid, &g_depth);
        up.depth = cfg_.depth_loss_weight * g_depth * inv_batch;
      }
    }
    return value * inv_batch;
  };

  std::fill(grad_.begin(), grad_.end(), 0.0);
  const double total = accumulate_field_gradient(field_, rays_, render_cfg_, loss, grad_);
  if (!std::isfinite(total)) throw DivergenceError("divergence");
  adam_step(field_, grad_, adam_, cfg_);
  ++iteration_;

  StepMetrics m;
  m.iteration = iteration_;
  m.loss = total;
  double mse = 0.0;
  for (double e : sq_err_) mse += e;
  m.psnr = psnr_from_mse(mse * inv_batch);
  double depth_sum = 0.0;
  for (double e : depth_err_) {
    if (e >= 0.0) {
      depth_sum += e;
      ++m.depth_rays;
    }
  }
  m.depth_mae = m.depth_rays > 0 ? depth_sum / m.depth_rays : 0.0;
  return m;
}

namespace {

VoxelField run_training(FieldRole role, const MultiViewDataset& dataset,
                        const TrainConfig& cfg, std::optional<VoxelField> init,
                        const MetricsSink& sink) {
  if (dataset.empty()) throw InputError("training dataset is empty");
  cfg.validate();
  VoxelField start = init ? std::move(*init) : initial_field(cfg.resolution, dataset.meta.bounds);
  if (cfg.iterations == 0) return start;
  FieldTrainer trainer(role, std::move(start), cfg, dataset.meta.near, dataset.meta.far);
  for (int i = 0; i < cfg.iterations; ++i) {
    const StepMetrics m = trainer.step(dataset);
    if (sink) sink(m);
  }
  return trainer.release();
}

}  // namespace

VoxelField train_object_field(const MultiViewDataset& dataset, const TrainConfig& cfg,
                              std::optional<VoxelField> init, const MetricsSink& sink) {
  return run_training(FieldRole::kObject, dataset, cfg, std::move(init), sink);
}

VoxelField train_background_field(const MultiViewDataset& dataset, const TrainConfig& cfg,
                                  std::optional<VoxelField> init, const MetricsSink& sink) {
  for (const auto& v : dataset.views) {
    if (v.image.size() == 0) throw InputError("background view without an inpainted image");
  }
  return run_training(FieldRole::kBackground, dataset, cfg, std::move(init), sink);
}

}  // namespace radiant
