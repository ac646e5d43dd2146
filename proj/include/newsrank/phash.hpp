#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "newsrank/image.hpp"

namespace newsrank {

inline constexpr int kNearDuplicateCutoff = 8;  // Hamming distance

namespace detail {

inline constexpr int kPhashSize = 32;

inline const std::array<double, kPhashSize * kPhashSize>& dct_cos_table() {
  static const auto table = [] {
    std::array<double, kPhashSize * kPhashSize> t{};
    for (int u = 0; u < kPhashSize; ++u)
      for (int x = 0; x < kPhashSize; ++x)
        t[static_cast<std::size_t>(u) * kPhashSize + x] =
            std::cos(M_PI * (2 * x + 1) * u / (2.0 * kPhashSize));
    return t;
  }();
  return table;
}

// Unnormalized 2-D DCT-II of a 32x32 block; only the low 9x9 corner is
// needed so the transform stops there.
inline std::array<double, 9 * 9> dct_low_frequencies(const GrayImage& block) {
  const auto& cs = dct_cos_table();
  // Row pass: partial[v][u] = sum_x block(x, v) * cos(u, x) for u < 9.
  std::array<double, kPhashSize * 9> partial{};
  for (int v = 0; v < kPhashSize; ++v) {
    for (int u = 0; u < 9; ++u) {
      double acc = 0;
      for (int x = 0; x < kPhashSize; ++x)
        acc += block.at(x, v) * cs[static_cast<std::size_t>(u) * kPhashSize + x];
      partial[static_cast<std::size_t>(v) * 9 + u] = acc;
    }
  }
  std::array<double, 9 * 9> out{};
  for (int v = 0; v < 9; ++v) {
    for (int u = 0; u < 9; ++u) {
      double acc = 0;
      for (int y = 0; y < kPhashSize; ++y)
        acc += partial[static_cast<std::size_t>(y) * 9 + u] *
               cs[static_cast<std::size_t>(v) * kPhashSize + y];
      out[static_cast<std::size_t>(v) * 9 + u] = acc;
    }
  }
  return out;
}

}  // namespace detail

// 64-bit perceptual hash built from the low-frequency DCT coefficients of
// the 32x32 bilinear grayscale resample. The selected coefficients are
// (u,v) in [0,8)x[0,8) without the DC term, plus (8,0) to round the code
// out to 64 bits; each bit is set iff its coefficient exceeds the median
// of the 64 selected values.
inline std::uint64_t phash64(const GrayImage& gray) {
  GrayImage block =
      resize_bilinear(gray, detail::kPhashSize, detail::kPhashSize);
  auto dct = detail::dct_low_frequencies(block);

  std::array<double, 64> coeffs{};
  int n = 0;
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      if (u == 0 && v == 0) continue;
      coeffs[n++] = dct[static_cast<std::size_t>(v) * 9 + u];
    }
  coeffs[n++] = dct[8];  // (u=8, v=0)

  std::array<double, 64> sorted = coeffs;
  std::nth_element(sorted.begin(), sorted.begin() + 31, sorted.end());
  double lo = sorted[31];
  double hi = *std::min_element(sorted.begin() + 32, sorted.end());
  double median = (lo + hi) / 2.0;

  std::uint64_t code = 0;
  for (int i = 0; i < 64; ++i)
    if (coeffs[i] > median) code |= (std::uint64_t{1} << i);
  return code;
}

inline std::uint64_t phash64(const RgbImage& img) {
  return phash64(to_gray(img));
}

inline int hamming(std::uint64_t a, std::uint64_t b) {
  return std::popcount(a ^ b);
}

inline bool near_duplicate(std::uint64_t a, std::uint64_t b,
                           int cutoff = kNearDuplicateCutoff) {
  return hamming(a, b) < cutoff;
}

}  // namespace newsrank
