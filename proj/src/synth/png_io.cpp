// Copyright 2026 The Radiant Authors
// SPDX-License-Identifier: Apache-2.0

#include <png.h>

#include <cstring>

#include "radiant/error.hpp"
#include "radiant/io.hpp"

namespace radiant {

namespace {

std::vector<std::uint8_t> write_png(int width, int height, png_uint_32 format,
                                    const std::vector<std::uint8_t>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(std::string("png encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

struct Decoded {
  int width = 0;
  int height = 0;
  bool had_alpha = false;
  std::vector<std::uint8_t> pixels;
};

Decoded read_png(const std::vector<std::uint8_t>& bytes, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw InputError(std::string("png decode failed: ") + image.message);
  }
  Decoded d;
  d.had_alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  image.format = format;
  d.width = static_cast<int>(image.width);
  d.height = static_cast<int>(image.height);
  d.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, d.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw InputError("png decode failed: " + msg);
  }
  return d;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  std::vector<std::uint8_t> px(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (int c = 0; c < 3; ++c) px[3 * i + c] = to_byte(img[i][c]);
  }
  return write_png(img.width, img.height, PNG_FORMAT_RGB, px);
}

std::vector<std::uint8_t> encode_png(const RgbaImage& img) {
  std::vector<std::uint8_t> px(img.size() * 4);
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (int c = 0; c < 3; ++c) px[4 * i + c] = to_byte(img[i].rgb[c]);
    px[4 * i + 3] = to_byte(img[i].alpha);
  }
  return write_png(img.width, img.height, PNG_FORMAT_RGBA, px);
}

std::vector<std::uint8_t> encode_png(const MaskImage& mask) {
  std::vector<std::uint8_t> px(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] ? 255 : 0;
  return write_png(mask.width, mask.height, PNG_FORMAT_GRAY, px);
}

RgbaImage decode_png_rgba(const std::vector<std::uint8_t>& bytes, bool* had_alpha) {
  const Decoded d = read_png(bytes, PNG_FORMAT_RGBA);
  if (had_alpha) *had_alpha = d.had_alpha;
  RgbaImage img(d.width, d.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i].rgb = Vec3(from_byte(d.pixels[4 * i]), from_byte(d.pixels[4 * i + 1]),
                      from_byte(d.pixels[4 * i + 2]));
    img[i].alpha = from_byte(d.pixels[4 * i + 3]);
  }
  return img;
}

RgbImage decode_png_rgb(const std::vector<std::uint8_t>& bytes) {
  const Decoded d = read_png(bytes, PNG_FORMAT_RGB);
  RgbImage img(d.width, d.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = Vec3(from_byte(d.pixels[3 * i]), from_byte(d.pixels[3 * i + 1]),
                  from_byte(d.pixels[3 * i + 2]));
  }
  return img;
}

MaskImage decode_png_mask(const std::vector<std::uint8_t>& bytes) {
  const Decoded d = read_png(bytes, PNG_FORMAT_GRAY);
  MaskImage mask(d.width, d.height, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = d.pixels[i] ? 1 : 0;
  return mask;
}

}  // namespace radiant
