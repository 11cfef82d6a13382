// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radiant/error.hpp"
#include "radiant/math.hpp"

namespace radiant {

/// Straight (non-premultiplied) color plus coverage.
struct Rgba {
  Vec3 rgb = Vec3::Zero();
  double alpha = 0.0;

  bool operator==(const Rgba&) const = default;
};

/// Row-major image, pixel (x, y) at index y * width + x.
template <class Pixel>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Pixel> pixels;

  Image() = default;
  Image(int w, int h, const Pixel& fill = Pixel{})
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InputError("image dimensions must be positive");
  }

  std::size_t size() const { return pixels.size(); }
  Pixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Pixel& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  Pixel& operator[](std::size_t i) { return pixels[i]; }
  const Pixel& operator[](std::size_t i) const { return pixels[i]; }

  bool same_shape(int w, int h) const { return width == w && height == h; }
  template <class Other>
  bool same_shape(const Image<Other>& o) const {
    return width == o.width && height == o.height;
  }

  bool operator==(const Image&) const = default;
};

using RgbImage = Image<Vec3>;
using RgbaImage = Image<Rgba>;
using ScalarImage = Image<double>;
/// Binary mask; every value is 0 or 1.
using MaskImage = Image<std::uint8_t>;

template <class A, class B>
void require_same_shape(const Image<A>& a, const Image<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InputError(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a.width) + "x" + std::to_string(a.height) +
                     " vs " + std::to_string(b.width) + "x" +
                     std::to_string(b.height) + ")");
  }
}

/// Quantize a [0,1] channel to 8 bits (round to nearest, clamped).
std::uint8_t to_byte(double v);
inline double from_byte(std::uint8_t b) { return b / 255.0; }

/// Round every channel through 8-bit storage.
RgbImage quantize(const RgbImage& img);
RgbaImage quantize(const RgbaImage& img);

RgbImage rgb_of(const RgbaImage& img);

}  // namespace radiant
