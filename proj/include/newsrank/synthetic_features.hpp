#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "newsrank/edges.hpp"
#include "newsrank/error.hpp"
#include "newsrank/image.hpp"

namespace newsrank {

inline constexpr int kDefaultDominantBinThreshold = 600;
inline constexpr double kDefaultHarrisFraction = 0.1801;
inline constexpr int kDefaultHoughMinPoints = 20;

struct ColorTransitions {
  double f1 = 0;  // fraction of pixels with any neighbor color distance
  double f2 = 0;  // fraction with distance above a quarter of the maximum
  double f2_over_f1 = 0;
};

// Per-pixel L1 RGB distance summed over the 8-neighborhood. Border pixels
// sum over the neighbors that exist and their quarter-of-maximum test is
// scaled by the actual neighbor count (765 per neighbor).
inline ColorTransitions color_transitions(const RgbImage& img) {
  if (img.width < 2 || img.height < 2)
    throw ContractError("color_transitions: image smaller than 2x2");
  const int w = img.width, h = img.height;
  long long over_zero = 0, over_quarter = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* c = img.px(x, y);
      long long d = 0;
      int neighbors = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          const std::uint8_t* nb = img.px(nx, ny);
          d += std::abs(int(c[0]) - nb[0]) + std::abs(int(c[1]) - nb[1]) +
               std::abs(int(c[2]) - nb[2]);
          ++neighbors;
        }
      }
      if (d > 0) ++over_zero;
      // d > (neighbors * 765) / 4, kept in integers
      if (4 * d > 765LL * neighbors) ++over_quarter;
    }
  }
  ColorTransitions t;
  double total = static_cast<double>(w) * h;
  t.f1 = over_zero / total;
  t.f2 = over_quarter / total;
  t.f2_over_f1 = (t.f1 == 0) ? 0 : t.f2 / t.f1;
  return t;
}

// Fraction of pixels holding the single most frequent exact 24-bit color.
inline double most_common_color_ratio(const RgbImage& img) {
  if (!img.valid()) throw ContractError("most_common_color_ratio: invalid image");
  std::unordered_map<std::uint32_t, long long> counts;
  counts.reserve(img.pixel_count() / 4 + 16);
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3)
    ++counts[std::uint32_t(p[0]) << 16 | std::uint32_t(p[1]) << 8 | p[2]];
  long long best = 0;
  for (const auto& [color, c] : counts) best = std::max(best, c);
  return static_cast<double>(best) / static_cast<double>(img.pixel_count());
}

namespace detail {

// 8x8x8 HSV histogram. H in [0,360) split into 45-degree bins, S and V in
// [0,1] split into eighths; S = V = 1 land in the top bin.
inline std::array<long long, 512> hsv_histogram(const RgbImage& img) {
  std::array<long long, 512> hist{};
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3) {
    double r = p[0] / 255.0, g = p[1] / 255.0, b = p[2] / 255.0;
    double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    double delta = mx - mn;
    double hdeg = 0;
    if (delta > 0) {
      if (mx == r)
        hdeg = 60.0 * std::fmod((g - b) / delta, 6.0);
      else if (mx == g)
        hdeg = 60.0 * ((b - r) / delta + 2.0);
      else
        hdeg = 60.0 * ((r - g) / delta + 4.0);
      if (hdeg < 0) hdeg += 360.0;
    }
    double s = (mx == 0) ? 0 : delta / mx;
    int hb = std::min(static_cast<int>(hdeg / 45.0), 7);
    int sb = std::min(static_cast<int>(s * 8.0), 7);
    int vb = std::min(static_cast<int>(mx * 8.0), 7);
    ++hist[static_cast<std::size_t>(hb) * 64 + static_cast<std::size_t>(sb) * 8 +
           vb];
  }
  return hist;
}

inline int count_dominant(const std::array<long long, 512>& hist,
                          long long threshold) {
  int n = 0;
  for (long long c : hist)
    if (c > threshold) ++n;
  return n;
}

struct MeanStd {
  double mean = 0;
  double stddev = 0;
};

inline MeanStd mean_std(const std::vector<int>& xs) {
  MeanStd r;
  if (xs.empty()) return r;
  double sum = 0;
  for (int x : xs) sum += x;
  r.mean = sum / xs.size();
  double var = 0;
  for (int x : xs) var += (x - r.mean) * (x - r.mean);
  r.stddev = std::sqrt(var / xs.size());
  return r;
}

}  // namespace detail

// Number of HSV histogram bins whose pixel count strictly exceeds the
// threshold.
inline int dominant_colors(const RgbImage& img, long long bin_threshold) {
  return detail::count_dominant(detail::hsv_histogram(img), bin_threshold);
}

// Picks the bin threshold that minimizes the normalized separation
//   delta = (mean_photo - sd_photo) - (mean_synth + sd_synth)
//   norm  = |delta| / mean_photo + |delta| / mean_synth
// between the two populations' dominant-color counts. A candidate where
// either mean is zero is excluded; ties go to the smallest threshold.
inline int tune_dominant_threshold(const std::vector<RgbImage>& photos,
                                   const std::vector<RgbImage>& synths,
                                   std::vector<int> candidates) {
  if (photos.empty() || synths.empty() || candidates.empty())
    throw ContractError("tune_dominant_threshold: empty input");
  std::vector<std::array<long long, 512>> photo_hists, synth_hists;
  photo_hists.reserve(photos.size());
  synth_hists.reserve(synths.size());
  for (const auto& img : photos) photo_hists.push_back(detail::hsv_histogram(img));
  for (const auto& img : synths) synth_hists.push_back(detail::hsv_histogram(img));

  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best_score = std::numeric_limits<double>::infinity();
  int best = -1;
  for (int t : candidates) {
    std::vector<int> pc, sc;
    pc.reserve(photo_hists.size());
    sc.reserve(synth_hists.size());
    for (const auto& h : photo_hists) pc.push_back(detail::count_dominant(h, t));
    for (const auto& h : synth_hists) sc.push_back(detail::count_dominant(h, t));
    auto p = detail::mean_std(pc);
    auto s = detail::mean_std(sc);
    if (p.mean == 0 || s.mean == 0) continue;
    double delta = (p.mean - p.stddev) - (s.mean + s.stddev);
    double norm = std::abs(delta) / p.mean + std::abs(delta) / s.mean;
    if (norm < best_score) {
      best_score = norm;
      best = t;
    }
  }
  if (best < 0)
    throw DataError("tune_dominant_threshold: every candidate was excluded");
  return best;
}

struct HoughLines {
  int horizontal = 0;
  int vertical = 0;
};

// Axis-parallel Hough transform over the edge mask: one accumulator cell
// per row and per column (1-pixel rho resolution, theta restricted to 0 and
// 90 degrees). A cell with at least min_points edge pixels counts as a line.
inline HoughLines hough_hv_lines(const GrayImage& gray,
                                 int min_points = kDefaultHoughMinPoints) {
  GradientField f = sobel_gradients(gray);
  auto mask = edge_mask(f);
  std::vector<int> rows(static_cast<std::size_t>(f.height), 0);
  std::vector<int> cols(static_cast<std::size_t>(f.width), 0);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      if (mask[static_cast<std::size_t>(y) * f.width + x]) {
        ++rows[static_cast<std::size_t>(y)];
        ++cols[static_cast<std::size_t>(x)];
      }
  HoughLines out;
  for (int c : rows)
    if (c >= min_points) ++out.horizontal;
  for (int c : cols)
    if (c >= min_points) ++out.vertical;
  return out;
}

// Harris corner response R = det(M) - 0.04 trace(M)^2 with 3x3 Sobel
// gradients and a 3x3 box window; corners are the 3x3 local maxima whose
// response exceeds response_fraction * max(R).
inline int harris_corner_count(const GrayImage& gray,
                               double response_fraction = kDefaultHarrisFraction) {
  if (response_fraction <= 0 || response_fraction > 1)
    throw ContractError("harris_corner_count: fraction outside (0,1]");
  GradientField f = sobel_gradients(gray);
  const int w = f.width, h = f.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = f.gx[i] * f.gx[i];
    b[i] = f.gy[i] * f.gy[i];
    c[i] = f.gx[i] * f.gy[i];
  }
  auto box = [&](const std::vector<double>& src, int x, int y) {
    double s = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = std::clamp(x + dx, 0, w - 1);
        int ny = std::clamp(y + dy, 0, h - 1);
        s += src[static_cast<std::size_t>(ny) * w + nx];
      }
    return s;
  };
  std::vector<double> response(n);
  double max_r = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double sa = box(a, x, y), sb = box(b, x, y), sc = box(c, x, y);
      double r = (sa * sb - sc * sc) - 0.04 * (sa + sb) * (sa + sb);
      response[static_cast<std::size_t>(y) * w + x] = r;
      if (r > max_r) max_r = r;
    }
  if (max_r <= 0) return 0;
  double thr = response_fraction * max_r;
  int count = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double r = response[static_cast<std::size_t>(y) * w + x];
      if (r <= thr) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          double rn = response[static_cast<std::size_t>(ny) * w + nx];
          if (rn > r || (rn == r && (dy < 0 || (dy == 0 && dx < 0)))) {
            is_max = false;
            break;
          }
        }
      if (is_max) ++count;
    }
  return count;
}

// Scans candidate response fractions for the one minimizing the ratio of
// mean corner counts, photo class over synthetic class. Candidates where
// the synthetic mean is zero are excluded; ties go to the smallest
// fraction.
inline double tune_corner_threshold(const std::vector<GrayImage>& photos,
                                    const std::vector<GrayImage>& synths,
                                    std::vector<double> candidates) {
  if (photos.empty() || synths.empty() || candidates.empty())
    throw ContractError("tune_corner_threshold: empty input");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  double best_score = std::numeric_limits<double>::infinity();
  double best = -1;
  for (double frac : candidates) {
    double mean_photo = 0, mean_synth = 0;
    for (const auto& g : photos) mean_photo += harris_corner_count(g, frac);
    for (const auto& g : synths) mean_synth += harris_corner_count(g, frac);
    mean_photo /= photos.size();
    mean_synth /= synths.size();
    if (mean_synth == 0) continue;
    double ratio = mean_photo / mean_synth;
    if (ratio < best_score) {
      best_score = ratio;
      best = frac;
    }
  }
  if (best < 0)
    throw DataError("tune_corner_threshold: every candidate was excluded");
  return best;
}

struct SyntheticFeatures {
  double f1 = 0;
  double f2 = 0;
  double f2_over_f1 = 0;
  double c1_ratio = 0;
  int dominant_colors = 0;
  int h_lines = 0;
  int v_lines = 0;
  int corners = 0;
  double luminance = 0;
  EdgeHistogram edge_hist;
};

struct SyntheticFeatureParams {
  long long dominant_bin_threshold = kDefaultDominantBinThreshold;
  int hough_min_points = kDefaultHoughMinPoints;
  double harris_fraction = kDefaultHarrisFraction;
};

// Synthetic-image detector features, all computed on the 240x180
// normalized resample.
inline SyntheticFeatures synthetic_features(
    const RgbImage& original, const SyntheticFeatureParams& params = {}) {
  RgbImage img = normalize_size(original);
  GrayImage gray = to_gray(img);
  SyntheticFeatures s;
  ColorTransitions t = color_transitions(img);
  s.f1 = t.f1;
  s.f2 = t.f2;
  s.f2_over_f1 = t.f2_over_f1;
  s.c1_ratio = most_common_color_ratio(img);
  s.dominant_colors = dominant_colors(img, params.dominant_bin_threshold);
  HoughLines lines = hough_hv_lines(gray, params.hough_min_points);
  s.h_lines = lines.horizontal;
  s.v_lines = lines.vertical;
  s.corners = harris_corner_count(gray, params.harris_fraction);
  s.luminance = luminance(gray);
  s.edge_hist = edge_histogram(gray);
  return s;
}

}  // namespace newsrank
