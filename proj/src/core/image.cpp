// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include "radiant/image.hpp"

#include <algorithm>
#include <cmath>

namespace radiant {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

namespace {
Vec3 quantize(const Vec3& c) {
  return {from_byte(to_byte(c.x())), from_byte(to_byte(c.y())), from_byte(to_byte(c.z()))};
}
}  // namespace

RgbImage quantize(const RgbImage& img) {
  RgbImage out = img;
  for (auto& p : out.pixels) p = quantize(p);
  return out;
}

RgbaImage quantize(const RgbaImage& img) {
  RgbaImage out = img;
  for (auto& p : out.pixels) {
    p.rgb = quantize(p.rgb);
    p.alpha = from_byte(to_byte(p.alpha));
  }
  return out;
}

RgbImage rgb_of(const RgbaImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i].rgb;
  return out;
}

}  // namespace radiant
