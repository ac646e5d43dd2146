#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "newsrank/image.hpp"

namespace newsrank {

// Sobel gradients over the quantized luma grid. Working on integer levels
// keeps every kernel sum exact, so rotating an image by 90 degrees permutes
// gradients without any rounding drift.
struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> magnitude;
  double max_magnitude = 0;

  double mag(int x, int y) const {
    return magnitude[static_cast<std::size_t>(y) * width + x];
  }
};

inline GradientField sobel_gradients(const GrayImage& gray) {
  GradientField f;
  f.width = gray.width;
  f.height = gray.height;
  const std::size_t n = static_cast<std::size_t>(f.width) * f.height;
  f.gx.resize(n);
  f.gy.resize(n);
  f.magnitude.resize(n);
  std::vector<int> q = quantized_luma(gray);
  auto at = [&](int x, int y) {
    x = std::clamp(x, 0, gray.width - 1);  // replicate borders
    y = std::clamp(y, 0, gray.height - 1);
    return q[static_cast<std::size_t>(y) * gray.width + x];
  };
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      int colL = at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1);
      int colR = at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1);
      int rowT = at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1);
      int rowB = at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1);
      int gx = colR - colL;
      int gy = rowB - rowT;
      std::size_t i = static_cast<std::size_t>(y) * f.width + x;
      f.gx[i] = gx;
      f.gy[i] = gy;
      double m = std::sqrt(static_cast<double>(gx) * gx +
                           static_cast<double>(gy) * gy);
      f.magnitude[i] = m;
      if (m > f.max_magnitude) f.max_magnitude = m;
    }
  }
  return f;
}

inline constexpr double kEdgeRelativeThreshold = 0.25;

// Pixels whose gradient magnitude exceeds rel * max magnitude. A blank
// image has max magnitude 0 and therefore no edges.
inline std::vector<std::uint8_t> edge_mask(
    const GradientField& f, double rel = kEdgeRelativeThreshold) {
  std::vector<std::uint8_t> mask(f.magnitude.size(), 0);
  double thr = rel * f.max_magnitude;
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = f.magnitude[i] > thr ? 1 : 0;
  return mask;
}

enum class EdgeOrientation { vertical, horizontal, diag45, diag135, none };

// Quantizes an edge pixel to the nearest of the four orientations. The bin
// boundaries fall at 22.5 degrees off each axis; cot(22.5) = 1 + sqrt(2).
inline EdgeOrientation classify_edge(double gx, double gy) {
  constexpr double kCot = 2.414213562373095;  // 1 + sqrt(2)
  double ax = std::abs(gx), ay = std::abs(gy);
  if (ax == 0 && ay == 0) return EdgeOrientation::none;
  if (ax > kCot * ay) return EdgeOrientation::vertical;    // gradient ~horizontal
  if (ay > kCot * ax) return EdgeOrientation::horizontal;  // gradient ~vertical
  // Gradient along a diagonal; the edge line runs along the other one.
  return (gx * gy > 0) ? EdgeOrientation::diag135 : EdgeOrientation::diag45;
}

struct EdgeHistogram {
  long long vertical = 0;
  long long horizontal = 0;
  long long diag45 = 0;
  long long diag135 = 0;

  long long diagonal() const { return diag45 + diag135; }
};

inline EdgeHistogram edge_histogram(const GradientField& f) {
  EdgeHistogram h;
  auto mask = edge_mask(f);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    switch (classify_edge(f.gx[i], f.gy[i])) {
      case EdgeOrientation::vertical: ++h.vertical; break;
      case EdgeOrientation::horizontal: ++h.horizontal; break;
      case EdgeOrientation::diag45: ++h.diag45; break;
      case EdgeOrientation::diag135: ++h.diag135; break;
      case EdgeOrientation::none: break;
    }
  }
  return h;
}

inline EdgeHistogram edge_histogram(const GrayImage& gray) {
  return edge_histogram(sobel_gradients(gray));
}

}  // namespace newsrank
