#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "newsrank/edges.hpp"
#include "newsrank/error.hpp"
#include "newsrank/image.hpp"

namespace newsrank {

enum class Orientation { square, portrait, landscape };

inline const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::square: return "square";
    case Orientation::portrait: return "portrait";
    case Orientation::landscape: return "landscape";
  }
  return "?";
}

// Aspect within 1% of 1.0 counts as square; taller than wide is portrait.
inline Orientation orientation_of(int width, int height) {
  double aspect = static_cast<double>(height) / width;
  if (std::abs(aspect - 1.0) <= 0.01) return Orientation::square;
  return aspect > 1.0 ? Orientation::portrait : Orientation::landscape;
}

// Shannon entropy of the 256-bin quantized-luma histogram, in bits.
inline double entropy(const GrayImage& gray) {
  std::array<long long, 256> hist{};
  for (int v : quantized_luma(gray)) ++hist[static_cast<std::size_t>(v)];
  double total = static_cast<double>(gray.values.size());
  double h = 0;
  for (long long c : hist) {
    if (c == 0) continue;
    double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

// Mean luma.
inline double luminance(const GrayImage& gray) {
  double sum = 0;
  for (double v : gray.values) sum += v;
  return gray.values.empty() ? 0 : sum / gray.values.size();
}

inline double luminance(const RgbImage& img) { return luminance(to_gray(img)); }

// Variance of the 3x3 Laplacian response, normalized by 255^2. Sharp detail
// produces strong response everywhere; blur pulls it toward zero.
inline double focus(const GrayImage& gray) {
  const int w = gray.width, h = gray.height;
  auto at = [&](int x, int y) {
    return gray.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  std::vector<double> lap(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      lap[static_cast<std::size_t>(y) * w + x] =
          at(x - 1, y) + at(x + 1, y) + at(x, y - 1) + at(x, y + 1) -
          4 * at(x, y);
  double mean = 0;
  for (double v : lap) mean += v;
  mean /= lap.size();
  double var = 0;
  for (double v : lap) var += (v - mean) * (v - mean);
  var /= lap.size();
  return var / (255.0 * 255.0);
}

// One minus the fraction of 512 RGB bins (8 per channel) needed to cover
// 95% of the pixels, taking bins in decreasing frequency order.
inline double simplicity(const RgbImage& img) {
  std::array<long long, 512> hist{};
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i, p += 3)
    ++hist[static_cast<std::size_t>((p[0] >> 5) << 6 | (p[1] >> 5) << 3 |
                                    (p[2] >> 5))];
  std::array<long long, 512> sorted = hist;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  long long total = static_cast<long long>(img.pixel_count());
  long long need = (total * 19 + 19) / 20;  // ceil(0.95 * total)
  long long cum = 0;
  int k = 0;
  for (long long c : sorted) {
    if (cum >= need) break;
    cum += c;
    ++k;
  }
  return 1.0 - k / 512.0;
}

// Fraction of total gradient magnitude inside bands of width dim/12 centered
// on the four third-lines. Zero total magnitude is pinned to 0.
inline double rule_of_thirds(const GrayImage& gray) {
  GradientField f = sobel_gradients(gray);
  const double w = f.width, h = f.height;
  double total = 0, in_band = 0;
  for (int y = 0; y < f.height; ++y) {
    double cy = y + 0.5;
    bool y_band = std::abs(cy - h / 3) <= h / 24 ||
                  std::abs(cy - 2 * h / 3) <= h / 24;
    for (int x = 0; x < f.width; ++x) {
      double m = f.mag(x, y);
      if (m == 0) continue;
      total += m;
      double cx = x + 0.5;
      bool x_band = std::abs(cx - w / 3) <= w / 24 ||
                    std::abs(cx - 2 * w / 3) <= w / 24;
      if (x_band || y_band) in_band += m;
    }
  }
  if (total == 0) return 0;
  return std::clamp(in_band / total, 0.0, 1.0);
}

// Hasler-Suesstrunk colorfulness: sqrt(var_rg + var_yb) + 0.3 *
// sqrt(mean_rg^2 + mean_yb^2) over the opponent channels rg = R - G and
// yb = (R + G)/2 - B. Grayscale images score exactly 0.
inline double colorfulness(const RgbImage& img) {
  const std::size_t n = img.pixel_count();
  if (n == 0) return 0;
  double sum_rg = 0, sum_yb = 0, sum_rg2 = 0, sum_yb2 = 0;
  const std::uint8_t* p = img.pixels.data();
  for (std::size_t i = 0; i < n; ++i, p += 3) {
    double rg = static_cast<double>(p[0]) - p[1];
    double yb = 0.5 * (static_cast<double>(p[0]) + p[1]) - p[2];
    sum_rg += rg;
    sum_yb += yb;
    sum_rg2 += rg * rg;
    sum_yb2 += yb * yb;
  }
  double mean_rg = sum_rg / n, mean_yb = sum_yb / n;
  double var_rg = std::max(0.0, sum_rg2 / n - mean_rg * mean_rg);
  double var_yb = std::max(0.0, sum_yb2 / n - mean_yb * mean_yb);
  return std::sqrt(var_rg + var_yb) +
         0.3 * std::sqrt(mean_rg * mean_rg + mean_yb * mean_yb);
}

// Face counting is delegated to a pluggable detector; the shipped default
// reads counts from a sidecar file keyed by image id.
class FaceDetector {
public:
  virtual ~FaceDetector() = default;
  // nullopt signals detector failure (infrastructure, not data).
  virtual std::optional<int> count_faces(const std::string& image_id) = 0;
};

class NullFaceDetector final : public FaceDetector {
public:
  std::optional<int> count_faces(const std::string&) override { return 0; }
};

// detector failure -> 0 with a warning tally; a negative count is a data
// error, not a failure.
inline int face_count(const std::string& image_id, FaceDetector& detector,
                      int* warnings = nullptr) {
  std::optional<int> n;
  try {
    n = detector.count_faces(image_id);
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    n = std::nullopt;
  }
  if (!n.has_value()) {
    if (warnings) ++*warnings;
    return 0;
  }
  if (*n < 0)
    throw DataError("face count for " + image_id + " is negative");
  return *n;
}

struct VisualFeatures {
  long long edges_v = 0;
  long long edges_h = 0;
  long long edges_d = 0;
  double rule_of_thirds = 0;
  double focus = 0;
  double entropy = 0;
  int faces = 0;
  double luminance = 0;
  double simplicity = 0;
  double area = 0;  // pixels^2, original resolution
  double aspect = 0;  // height / width
  Orientation orientation = Orientation::landscape;
  double colorfulness = 0;
};

// Table of aesthetic features, computed at the original resolution (area,
// aspect and orientation are meaningless after resampling).
inline VisualFeatures visual_features(const RgbImage& img,
                                      const std::string& image_id,
                                      FaceDetector& detector,
                                      int* warnings = nullptr) {
  if (!img.valid()) throw ContractError("visual_features: invalid image");
  VisualFeatures v;
  GrayImage gray = to_gray(img);
  EdgeHistogram eh = edge_histogram(gray);
  v.edges_v = eh.vertical;
  v.edges_h = eh.horizontal;
  v.edges_d = eh.diagonal();
  v.rule_of_thirds = rule_of_thirds(gray);
  v.focus = focus(gray);
  v.entropy = entropy(gray);
  v.faces = face_count(image_id, detector, warnings);
  v.luminance = luminance(gray);
  v.simplicity = simplicity(img);
  v.area = static_cast<double>(img.width) * img.height;
  v.aspect = static_cast<double>(img.height) / img.width;
  v.orientation = orientation_of(img.width, img.height);
  v.colorfulness = colorfulness(img);
  return v;
}

}  // namespace newsrank
