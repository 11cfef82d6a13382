// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radiant/bridge.hpp"
#include "radiant/idu.hpp"
#include "radiant/optimizer.hpp"
#include "radiant/synth.hpp"
#include "radiant/transform.hpp"

namespace radiant::cli {

struct EditorSelection {
  std::string instruction = "keep the object unchanged";
  /// Exactly one of these is set.
  std::optional<std::string> builtin_kind;
  std::map<std::string, double> builtin_params;
  std::optional<RemoteEndpoint> remote;
};

struct TransformSelection {
  double scale = 1.0;
  Vec3 axis = Vec3::UnitZ();
  double angle_deg = 0.0;
  Vec3 translation = Vec3::Zero();
  /// Defaults to object_centroid of the composed object field.
  std::optional<Vec3> centroid;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  bool quiet = false;

  SceneSpec scene;
  /// Oracle inpainting from the ground-truth background unless set.
  std::optional<RemoteEndpoint> remote_inpainter;

  TrainConfig train_object;
  TrainConfig train_background;

  IduSchedule idu;
  EditorSelection editor;
  std::string segmenter = "known_mask";

  TransformSelection transform;
  /// "auto" picks the edited object checkpoint when present.
  std::string compose_object = "auto";
  std::optional<std::filesystem::path> compose_background;
  int render_samples = 192;
  std::optional<Vec3> render_background = Vec3::Zero();

  std::optional<std::filesystem::path> eval_renders;

  void validate() const;
};

/// The complete default configuration as a JSON document; every key in it is
/// a valid --dot.path flag.
std::string default_config_json();

/// Builds a configuration from defaults, an optional JSON document and
/// dot-path overrides (path, raw value) applied in order.
PipelineConfig load_config(const std::optional<std::string>& json_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides);

struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path data(const std::string& name) const { return root / "data" / name; }
  std::filesystem::path ground_truth(const std::string& name) const {
    return root / "data" / "gt" / (name + ".rcvf");
  }
  std::filesystem::path checkpoint(const std::string& name) const {
    return root / "checkpoints" / (name + ".rcvf");
  }
  std::filesystem::path log(const std::string& name) const {
    return root / "logs" / (name + ".log");
  }
  std::filesystem::path renders() const { return root / "renders"; }
  std::filesystem::path report() const { return root / "report.json"; }
};

enum class TrainTarget { kObject, kBackground };

void cmd_gen_data(const PipelineConfig& cfg, std::ostream& log);
void cmd_train(const PipelineConfig& cfg, TrainTarget target, std::ostream& log);
void cmd_edit(const PipelineConfig& cfg, std::ostream& log);
void cmd_compose(const PipelineConfig& cfg, std::ostream& log);
void cmd_eval(const PipelineConfig& cfg, std::ostream& log);
void cmd_pipeline(const PipelineConfig& cfg, std::ostream& log);

/// Full command line entry point. Returns 0, 2, 3 or 4.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radiant::cli
