// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "radiant/idu.hpp"

namespace radiant {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key,
             double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

class IdentityEditor final : public Editor {
 public:
  RgbImage edit(const RgbImage& current, const RgbImage&, const EditInstruction&) override {
    return current;
  }
};

class RecolorEditor final : public Editor {
 public:
  RecolorEditor(const Vec3& target, double lambda) : target_(target), lambda_(lambda) {}

  RgbImage edit(const RgbImage& current, const RgbImage&, const EditInstruction&) override {
    RgbImage out = current;
    for (auto& p : out.pixels) p = (1.0 - lambda_) * p + lambda_ * target_;
    return out;
  }

 private:
  Vec3 target_;
  double lambda_;
};

Vec3 rgb_to_hsv(const Vec3& c) {
  const double mx = c.maxCoeff(), mn = c.minCoeff(), d = mx - mn;
  double h = 0.0;
  if (d > 0.0) {
    if (mx == c.x()) h = std::fmod((c.y() - c.z()) / d, 6.0);
    else if (mx == c.y()) h = (c.z() - c.x()) / d + 2.0;
    else h = (c.x() - c.y()) / d + 4.0;
    h *= 60.0;
    if (h < 0.0) h += 360.0;
  }
  return {h, mx > 0.0 ? d / mx : 0.0, mx};
}

Vec3 hsv_to_rgb(const Vec3& hsv) {
  const double h = hsv.x() / 60.0, s = hsv.y(), v = hsv.z();
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  Vec3 rgb;
  switch (static_cast<int>(h) % 6) {
    case 0: rgb = {c, x, 0}; break;
    case 1: rgb = {x, c, 0}; break;
    case 2: rgb = {0, c, x}; break;
    case 3: rgb = {0, x, c}; break;
    case 4: rgb = {x, 0, c}; break;
    default: rgb = {c, 0, x}; break;
  }
  return (rgb + Vec3::Constant(v - c)).cwiseMax(0.0).cwiseMin(1.0);
}

class HueShiftEditor final : public Editor {
 public:
  explicit HueShiftEditor(double degrees) : degrees_(degrees) {}

  RgbImage edit(const RgbImage& current, const RgbImage&, const EditInstruction&) override {
    RgbImage out = current;
    for (auto& p : out.pixels) {
      Vec3 hsv = rgb_to_hsv(p);
      hsv.x() = std::fmod(std::fmod(hsv.x() + degrees_, 360.0) + 360.0, 360.0);
      p = hsv_to_rgb(hsv);
    }
    return out;
  }

 private:
  double degrees_;
};

class BrightenEditor final : public Editor {
 public:
  explicit BrightenEditor(double factor) : factor_(factor) {}

  RgbImage edit(const RgbImage& current, const RgbImage&, const EditInstruction&) override {
    RgbImage out = current;
    for (auto& p : out.pixels) p = (p * factor_).cwiseMax(0.0).cwiseMin(1.0);
    return out;
  }

 private:
  double factor_;
};

class KnownMaskSegmenter final : public Segmenter {
 public:
  MaskImage segment(const RgbImage&, const MaskImage& prior) override { return prior; }
};

class AlphaThresholdSegmenter final : public Segmenter {
 public:
  explicit AlphaThresholdSegmenter(double threshold) : threshold_(threshold) {}

  MaskImage segment(const RgbImage& rgb, const MaskImage&) override {
    MaskImage mask(rgb.width, rgb.height, 0);
    for (std::size_t i = 0; i < rgb.size(); ++i) mask[i] = rgb[i].maxCoeff() > threshold_;
    return mask;
  }

 private:
  double threshold_;
};

}  // namespace

std::unique_ptr<Editor> builtin_editor(std::string_view kind,
                                       const std::map<std::string, double>& params) {
  if (kind == "identity") return std::make_unique<IdentityEditor>();
  if (kind == "recolor") {
    const Vec3 target(param(params, "r", 0.0), param(params, "g", 0.0), param(params, "b", 1.0));
    const double lambda = param(params, "lambda", 1.0);
    if ((target.array() < 0.0).any() || (target.array() > 1.0).any()) {
      throw InputError("recolor target color must be in [0, 1]^3");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("recolor lambda must be in [0, 1]");
    return std::make_unique<RecolorEditor>(target, lambda);
  }
  if (kind == "hue_shift") return std::make_unique<HueShiftEditor>(param(params, "degrees", 120.0));
  if (kind == "brighten") {
    const double factor = param(params, "factor", 1.25);
    if (!(factor >= 0.0)) throw InputError("brighten factor must be >= 0");
    return std::make_unique<BrightenEditor>(factor);
  }
  throw InputError("unknown editor kind '" + std::string(kind) + "'");
}

std::unique_ptr<Segmenter> known_mask_segmenter() {
  return std::make_unique<KnownMaskSegmenter>();
}

std::unique_ptr<Segmenter> alpha_threshold_segmenter(double threshold) {
  return std::make_unique<AlphaThresholdSegmenter>(threshold);
}

}  // namespace radiant
