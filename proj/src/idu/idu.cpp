// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/idu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace radiant {

void EditInstruction::validate() const {
  if (text.empty()) throw InputError("edit instruction text must be nonempty");
}

void IduSchedule::validate() const {
  if (outer_iterations < 1) throw InputError("idu.outer_iterations must be >= 1");
  if (d < 1) throw InputError("idu.d must be >= 1");
  if (n < 0) throw InputError("idu.n must be >= 0");
}

void IduDataset::validate() const {
  current.validate();
  if (originals.size() != current.size() || edit_counts.size() != current.size()) {
    throw InputError("idu dataset: originals and current views differ in count");
  }
  for (std::size_t v = 0; v < current.size(); ++v) {
    if (!current.views[v].mask) throw InputError("idu dataset: view " + std::to_string(v) + " has no mask");
    if (!originals[v].same_shape(current.views[v].image)) {
      throw InputError("idu dataset: view " + std::to_string(v) + " original size mismatch");
    }
  }
}

RgbImage alpha_blend_black(const RgbaImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i].alpha * img[i].rgb;
  return out;
}

RgbaImage apply_mask(const RgbImage& rgb, const MaskImage& mask) {
  require_same_shape(rgb, mask, "apply_mask");
  RgbaImage out(rgb.width, rgb.height);
  for (std::size_t i = 0; i < rgb.size(); ++i) out[i] = {rgb[i], mask[i] ? 1.0 : 0.0};
  return out;
}

IduDataset make_idu_dataset(const MultiViewDataset& object_views) {
  if (object_views.empty()) throw InputError("idu dataset: no views");
  IduDataset ds;
  ds.current = object_views;
  ds.current.has_alpha = true;
  for (std::size_t v = 0; v < ds.current.size(); ++v) {
    DatasetView& view = ds.current.views[v];
    if (!view.mask) throw InputError("idu dataset: view " + std::to_string(v) + " has no mask");
    view.image = apply_mask(alpha_blend_black(apply_mask(rgb_of(view.image), *view.mask)),
                            *view.mask);
    ds.originals.push_back(view.image);
  }
  ds.edit_counts.assign(ds.current.size(), 0);
  ds.validate();
  return ds;
}

namespace {

void check_edit(std::size_t view, const RgbImage& edited, const RgbImage& input) {
  if (!edited.same_shape(input)) {
    throw IduViewError(view,
                       "editor output dimension mismatch: expected " +
                           std::to_string(input.width) + "x" + std::to_string(input.height) +
                           ", got " + std::to_string(edited.width) + "x" +
                           std::to_string(edited.height),
                       ExitCode::kInputError);
  }
  for (const Vec3& p : edited.pixels) {
    if (!p.allFinite() || (p.array() < 0.0).any() || (p.array() > 1.0).any()) {
      throw IduViewError(view, "editor output channel outside [0, 1]", ExitCode::kInputError);
    }
  }
}

}  // namespace

IduResult idu_run(VoxelField field, IduDataset dataset, Editor& editor, Segmenter& segmenter,
                  const EditInstruction& instruction, const IduSchedule& schedule,
                  const TrainConfig& train_cfg, const IduObserver& observer,
                  const MetricsSink& sink) {
  schedule.validate();
  instruction.validate();
  if (dataset.size() == 0) throw InputError("idu dataset is empty");
  dataset.validate();
  if (!(field.bounds() == dataset.current.meta.bounds)) {
    throw InputError("idu: field bounds do not match the dataset scene bounds");
  }

  std::mt19937_64 order_rng(derive_seed(schedule.rng_seed, 3));
  std::optional<FieldTrainer> trainer;
  if (schedule.n > 0) {
    trainer.emplace(FieldRole::kObject, std::move(field), train_cfg,
                    dataset.current.meta.near, dataset.current.meta.far);
  }

  std::vector<std::size_t> order(dataset.size());
  for (int outer = 1; outer <= schedule.outer_iterations; ++outer) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), order_rng);

    for (int round = 0; round < schedule.d; ++round) {
      for (std::size_t v : order) {
        DatasetView& view = dataset.current.views[v];
        const RgbImage current = alpha_blend_black(view.image);
        const RgbImage original = alpha_blend_black(dataset.originals[v]);
        RgbImage edited;
        MaskImage mask;
        try {
          edited = editor.edit(current, original, instruction);
          check_edit(v, edited, current);
          mask = segmenter.segment(edited, *view.mask);
        } catch (const IduViewError&) {
          throw;
        } catch (const Error& e) {
          throw IduViewError(v, e.what(), e.exit_code());
        } catch (const std::exception& e) {
          throw IduViewError(v, e.what(), ExitCode::kInputError);
        }
        if (!mask.same_shape(edited) ||
            std::any_of(mask.pixels.begin(), mask.pixels.end(), [](auto m) { return m > 1; })) {
          throw IduViewError(v, "segmenter returned an invalid mask", ExitCode::kInputError);
        }
        view.image = apply_mask(edited, mask);
        view.mask = std::move(mask);
        ++dataset.edit_counts[v];
      }
    }

    if (trainer) {
      for (int i = 0; i < schedule.n; ++i) {
        const StepMetrics m = trainer->step(dataset.current);
        if (sink) sink(m);
      }
    }
    if (observer) observer(outer, trainer ? trainer->field() : field, dataset);
  }

  return {trainer ? trainer->release() : std::move(field), std::move(dataset)};
}

}  // namespace radiant
