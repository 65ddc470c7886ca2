// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lrtf/tensor.hpp"
#include "lrtf/tensor_io.hpp"

namespace lrtf {

/// In-memory image with values scaled to [0,1], laid out (row, col, channel).
/// channels is 1 (grayscale, PGM P5) or 3 (color, PPM P6).
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> pixels;

  double& at(std::size_t h, std::size_t w, std::size_t c) {
    return pixels[(h * width + w) * channels + c];
  }
  [[nodiscard]] double at(std::size_t h, std::size_t w, std::size_t c) const {
    return pixels[(h * width + w) * channels + c];
  }
};

namespace detail {

inline int pnm_token(std::istream& is, const std::filesystem::path& path) {
  // Skip whitespace and '#' comments between header tokens.
  int c = is.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    } else if (!std::isspace(c)) {
      break;
    } else {
      c = is.get();
    }
  }
  if (c == EOF || !std::isdigit(c)) io_fail(path, "malformed header");
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1'000'000'000L) io_fail(path, "header value out of range");
    c = is.get();
  }
  if (c != EOF) is.unget();
  return static_cast<int>(value);
}

}  // namespace detail

/// Reads a binary PGM (P5) or PPM (P6) image; sample values are divided by
/// the declared maxval. 8- and 16-bit (big-endian) samples are supported.
[[nodiscard]] inline Image read_pnm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) detail::io_fail(path, "cannot open");

  char magic[2];
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    detail::io_fail(path, "unsupported format, need binary PGM (P5) or PPM (P6)");

  Image img;
  img.channels = magic[1] == '5' ? 1 : 3;
  img.width = static_cast<std::size_t>(detail::pnm_token(is, path));
  img.height = static_cast<std::size_t>(detail::pnm_token(is, path));
  const int maxval = detail::pnm_token(is, path);
  if (img.width == 0 || img.height == 0) detail::io_fail(path, "empty image");
  if (maxval < 1 || maxval > 65535) detail::io_fail(path, "invalid maxval");
  is.get();  // single whitespace before the raster

  const std::size_t samples = img.height * img.width * img.channels;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(samples * bytes_per);
  is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!is) detail::io_fail(path, "truncated raster");

  img.pixels.resize(samples);
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t s = 0; s < samples; ++s) {
    const unsigned value = bytes_per == 1
                               ? raw[s]
                               : (static_cast<unsigned>(raw[2 * s]) << 8) | raw[2 * s + 1];
    img.pixels[s] = static_cast<double>(value) * scale;
  }
  return img;
}

/// Writes a PGM/PPM image with 8-bit samples; values are clamped to [0,1]
/// before quantization. The write is atomic like the tensor formats.
inline void write_pnm(const std::filesystem::path& path, const Image& img) {
  detail::check(img.channels == 1 || img.channels == 3,
                "write_pnm: channels must be 1 or 3");
  detail::check(img.pixels.size() == img.height * img.width * img.channels,
                "write_pnm: pixel buffer size mismatch");
  std::string bytes;
  bytes += img.channels == 1 ? "P5\n" : "P6\n";
  bytes += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  for (double p : img.pixels) {
    const double clamped = std::clamp(p, 0.0, 1.0);
    bytes.push_back(static_cast<char>(
        static_cast<unsigned char>(std::llround(clamped * 255.0))));
  }
  detail::write_file_atomic(path, bytes);
}

/// Stacks equal-sized images into a 3-order tensor:
///   B grayscale images      -> H x W x B (one band per image),
///   one color image         -> H x W x 3,
///   B > 1 color images      -> H x W x 3B, the flattening of the 4-order
///                              stack H x W x 3 x B with band index c*B + b.
[[nodiscard]] inline DenseTensor stack_images(const std::vector<Image>& images) {
  detail::check(!images.empty(), "stack_images: need at least one image");
  const std::size_t h = images[0].height, w = images[0].width, c = images[0].channels;
  for (const Image& img : images) {
    detail::check(img.height == h && img.width == w,
                  "stack_images: mixed image sizes");
    detail::check(img.channels == c, "stack_images: mixed image formats");
  }
  const std::size_t b = images.size();

  if (c == 1) {
    DenseTensor t({h, w, b});
    for (std::size_t bi = 0; bi < b; ++bi)
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) t(i, j, bi) = images[bi].at(i, j, 0);
    return t;
  }
  DenseTensor t({h, w, c * b});
  for (std::size_t bi = 0; bi < b; ++bi)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j)
        for (std::size_t ci = 0; ci < c; ++ci)
          t(i, j, ci * b + bi) = images[bi].at(i, j, ci);
  return t;
}

/// Inverse of stack_images for a known channel count and image count.
[[nodiscard]] inline std::vector<Image> unstack_images(const DenseTensor& t,
                                                       std::size_t channels,
                                                       std::size_t count) {
  detail::check(t.order() == 3, "unstack_images: tensor must be 3-order");
  detail::check(channels == 1 || channels == 3, "unstack_images: channels must be 1 or 3");
  detail::check(t.dims()[2] == channels * count,
                "unstack_images: band count mismatch");
  const std::size_t h = t.dims()[0], w = t.dims()[1];
  std::vector<Image> out(count);
  for (std::size_t bi = 0; bi < count; ++bi) {
    Image& img = out[bi];
    img.height = h;
    img.width = w;
    img.channels = channels;
    img.pixels.resize(h * w * channels);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j)
        for (std::size_t ci = 0; ci < channels; ++ci)
          img.at(i, j, ci) = channels == 1 ? t(i, j, bi) : t(i, j, ci * count + bi);
  }
  return out;
}

/// Loads a set of PNM files and stacks them per the rules above.
[[nodiscard]] inline DenseTensor load_image_stack(
    const std::vector<std::filesystem::path>& paths) {
  detail::check(!paths.empty(), "load_image_stack: need at least one path");
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(read_pnm(p));
  return stack_images(images);
}

}  // namespace lrtf
