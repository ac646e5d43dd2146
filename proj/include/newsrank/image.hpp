#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "newsrank/error.hpp"

namespace newsrank {

// 8-bit RGB raster, row-major, no row padding.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3

  static RgbImage filled(int w, int h, std::uint8_t r, std::uint8_t g,
                         std::uint8_t b) {
    RgbImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
      img.pixels[i] = r;
      img.pixels[i + 1] = g;
      img.pixels[i + 2] = b;
    }
    return img;
  }

  std::uint8_t* px(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  const std::uint8_t* px(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  bool valid() const {
    return width >= 1 && height >= 1 &&
           pixels.size() == static_cast<std::size_t>(width) * height * 3;
  }
};

// Real-valued luma raster in [0, 255]. Luma uses the fixed coefficients
// 0.299 R + 0.587 G + 0.114 B.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // width * height

  static GrayImage filled(int w, int h, double v) {
    GrayImage g;
    g.width = w;
    g.height = h;
    g.values.assign(static_cast<std::size_t>(w) * h, v);
    return g;
  }

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

inline GrayImage to_gray(const RgbImage& img) {
  GrayImage g;
  g.width = img.width;
  g.height = img.height;
  g.values.resize(img.pixel_count());
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < g.values.size(); ++i, p += 3) {
    g.values[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
  }
  return g;
}

// Luma rounded to the nearest integer level. Gradient-based extractors work
// on this quantized grid so that their sums stay exact in double arithmetic.
inline std::vector<int> quantized_luma(const GrayImage& g) {
  std::vector<int> q(g.values.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    long v = std::lround(g.values[i]);
    q[i] = static_cast<int>(std::clamp(v, 0L, 255L));
  }
  return q;
}

namespace detail {

// Maps a destination index to a clamped source coordinate using pixel
// centers; an identity-size resample reproduces the source exactly.
inline double src_coord(int dst, int dst_size, int src_size) {
  double s = (dst + 0.5) * static_cast<double>(src_size) / dst_size - 0.5;
  if (s < 0) s = 0;
  double hi = src_size - 1;
  if (s > hi) s = hi;
  return s;
}

}  // namespace detail

inline RgbImage resize_bilinear(const RgbImage& src, int w, int h) {
  if (!src.valid() || w < 1 || h < 1)
    throw ContractError("resize_bilinear: invalid image or target size");
  RgbImage dst;
  dst.width = w;
  dst.height = h;
  dst.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    double sy = detail::src_coord(y, h, src.height);
    int y0 = static_cast<int>(sy);
    int y1 = std::min(y0 + 1, src.height - 1);
    double fy = sy - y0;
    for (int x = 0; x < w; ++x) {
      double sx = detail::src_coord(x, w, src.width);
      int x0 = static_cast<int>(sx);
      int x1 = std::min(x0 + 1, src.width - 1);
      double fx = sx - x0;
      const std::uint8_t* p00 = src.px(x0, y0);
      const std::uint8_t* p10 = src.px(x1, y0);
      const std::uint8_t* p01 = src.px(x0, y1);
      const std::uint8_t* p11 = src.px(x1, y1);
      std::uint8_t* out = dst.px(x, y);
      for (int c = 0; c < 3; ++c) {
        double v = (1 - fy) * ((1 - fx) * p00[c] + fx * p10[c]) +
                   fy * ((1 - fx) * p01[c] + fx * p11[c]);
        out[c] = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(v), 0, 255));
      }
    }
  }
  return dst;
}

inline GrayImage resize_bilinear(const GrayImage& src, int w, int h) {
  if (src.width < 1 || src.height < 1 || w < 1 || h < 1)
    throw ContractError("resize_bilinear: invalid image or target size");
  GrayImage dst;
  dst.width = w;
  dst.height = h;
  dst.values.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    double sy = detail::src_coord(y, h, src.height);
    int y0 = static_cast<int>(sy);
    int y1 = std::min(y0 + 1, src.height - 1);
    double fy = sy - y0;
    for (int x = 0; x < w; ++x) {
      double sx = detail::src_coord(x, w, src.width);
      int x0 = static_cast<int>(sx);
      int x1 = std::min(x0 + 1, src.width - 1);
      double fx = sx - x0;
      dst.at(x, y) = (1 - fy) * ((1 - fx) * src.at(x0, y0) + fx * src.at(x1, y0)) +
                     fy * ((1 - fx) * src.at(x0, y1) + fx * src.at(x1, y1));
    }
  }
  return dst;
}

// Working resolution for the synthetic-image detector features.
constexpr int kNormalizedWidth = 240;
constexpr int kNormalizedHeight = 180;

// Resamples to the fixed 240x180 working size. Identity on inputs that are
// already that size, so the operation is idempotent.
inline RgbImage normalize_size(const RgbImage& img) {
  return resize_bilinear(img, kNormalizedWidth, kNormalizedHeight);
}

}  // namespace newsrank
