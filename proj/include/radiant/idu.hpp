// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "radiant/dataset.hpp"
#include "radiant/error.hpp"
#include "radiant/image.hpp"
#include "radiant/optimizer.hpp"
#include "radiant/voxel_field.hpp"

namespace radiant {

struct EditInstruction {
  std::string text;
  std::map<std::string, double> params;

  void validate() const;
};

/// Outer iterations of the update loop; `d` image-update rounds and `n`
/// field-update steps per outer iteration.
struct IduSchedule {
  int outer_iterations = 10;
  int d = 1;
  int n = 200;
  std::uint64_t rng_seed = 0;

  /// outer_iterations, d >= 1 and n >= 0.
  void validate() const;
};

/// Per-view RGBA images of the object scene. `current` holds I_i (with masks
/// and cameras); `originals` holds the unedited I_0.
struct IduDataset {
  MultiViewDataset current;
  std::vector<RgbaImage> originals;
  std::vector<int> edit_counts;

  std::size_t size() const { return current.size(); }
  void validate() const;
};

/// Builds an update-loop dataset from masked RGBA views: alpha becomes the
/// mask and rgb outside the mask becomes black, so blend/mask round trips are
/// exact.
IduDataset make_idu_dataset(const MultiViewDataset& object_views);

/// The 2D editing model: edits `current` conditioned on the unedited
/// `original` and the instruction. Must return an image of the same size.
class Editor {
 public:
  virtual ~Editor() = default;
  virtual RgbImage edit(const RgbImage& current, const RgbImage& original,
                        const EditInstruction& instruction) = 0;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual MaskImage segment(const RgbImage& rgb, const MaskImage& prior) = 0;
};

/// kind: identity | recolor (r, g, b, lambda) | hue_shift (degrees) |
/// brighten (factor).
std::unique_ptr<Editor> builtin_editor(std::string_view kind,
                                       const std::map<std::string, double>& params);

/// Returns the prior mask unchanged.
std::unique_ptr<Segmenter> known_mask_segmenter();
/// Object wherever a channel exceeds `threshold` (default 1e-3).
std::unique_ptr<Segmenter> alpha_threshold_segmenter(double threshold = 1e-3);

/// RGBA -> RGB over black.
RgbImage alpha_blend_black(const RgbaImage& img);
/// RGB + binary mask -> RGBA with alpha = mask.
RgbaImage apply_mask(const RgbImage& rgb, const MaskImage& mask);

/// A view failed inside the update loop. Keeps the underlying error's exit
/// code.
class IduViewError : public Error {
 public:
  IduViewError(std::size_t view, const std::string& what, ExitCode code)
      : Error("viewpoint " + std::to_string(view) + ": " + what, code), view_(view) {}
  std::size_t view() const { return view_; }

 private:
  std::size_t view_;
};

struct IduResult {
  VoxelField field;
  IduDataset dataset;
};

/// Called after every outer iteration (1-based) with the current state.
using IduObserver = std::function<void(int outer, const VoxelField&, const IduDataset&)>;

IduResult idu_run(VoxelField field, IduDataset dataset, Editor& editor, Segmenter& segmenter,
                  const EditInstruction& instruction, const IduSchedule& schedule,
                  const TrainConfig& train_cfg, const IduObserver& observer = {},
                  const MetricsSink& sink = {});

}  // namespace radiant
