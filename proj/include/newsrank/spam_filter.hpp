#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "newsrank/corpus.hpp"
#include "newsrank/error.hpp"
#include "newsrank/feature_vector.hpp"
#include "newsrank/image.hpp"
#include "newsrank/image_codec.hpp"
#include "newsrank/logistic.hpp"
#include "newsrank/synthetic_features.hpp"

namespace newsrank {

enum class FilterDecision { keep, drop };
enum class FilterReason {
  none,
  coarse_hashtags,
  coarse_mentions,
  coarse_urls,
  coarse_size,
  synthetic,
  captioned,
};

inline const char* to_string(FilterReason r) {
  switch (r) {
    case FilterReason::none: return "none";
    case FilterReason::coarse_hashtags: return "coarse_hashtags";
    case FilterReason::coarse_mentions: return "coarse_mentions";
    case FilterReason::coarse_urls: return "coarse_urls";
    case FilterReason::coarse_size: return "coarse_size";
    case FilterReason::synthetic: return "synthetic";
    case FilterReason::captioned: return "captioned";
  }
  return "?";
}

struct FilterVerdict {
  std::string image_id;
  FilterDecision decision = FilterDecision::keep;
  FilterReason reason = FilterReason::none;
  std::optional<double> score;  // synthetic probability, when that stage ran

  bool kept() const { return decision == FilterDecision::keep; }
};

struct CoarseThresholds {
  int max_hashtags = 3;
  int max_mentions = 3;
  int max_urls = 2;
  int min_dimension = 200;
};

// Metadata and size rules; boundary values are kept ("more than" is
// strict). The first matching rule, in this order, names the reason.
inline FilterVerdict coarse_filter(const SocialPost& post,
                                   const ImageRecord& image,
                                   const CoarseThresholds& t = {}) {
  FilterVerdict v;
  v.image_id = image.image_id;
  FilterReason reason = FilterReason::none;
  if (post.hashtag_count > t.max_hashtags)
    reason = FilterReason::coarse_hashtags;
  else if (post.mention_count > t.max_mentions)
    reason = FilterReason::coarse_mentions;
  else if (post.url_count > t.max_urls)
    reason = FilterReason::coarse_urls;
  else if (image.width() < t.min_dimension || image.height() < t.min_dimension)
    reason = FilterReason::coarse_size;
  if (reason != FilterReason::none) {
    v.decision = FilterDecision::drop;
    v.reason = reason;
  }
  return v;
}

// Probability that the image is synthetic, from the trained linear model;
// a tie at 0.5 keeps.
inline std::pair<double, FilterDecision> classify_synthetic(
    const SyntheticFeatures& features, const LogisticModel& model,
    double threshold = 0.5) {
  FeatureVector fv = to_feature_vector(features);
  if (model.schema != fv.names)
    throw DataError("synthetic model schema does not match extractor output");
  double p = model.predict_proba(fv.values);
  return {p, p > threshold ? FilterDecision::drop : FilterDecision::keep};
}

// Median filter with edge-replicate padding; k must be odd.
inline GrayImage median_blur(const GrayImage& gray, int k = 3) {
  if (k < 1 || k % 2 == 0) throw ContractError("median_blur: k must be odd");
  GrayImage out;
  out.width = gray.width;
  out.height = gray.height;
  out.values.resize(gray.values.size());
  const int r = k / 2;
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(k) * k);
  for (int y = 0; y < gray.height; ++y)
    for (int x = 0; x < gray.width; ++x) {
      window.clear();
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          window.push_back(gray.at(std::clamp(x + dx, 0, gray.width - 1),
                                   std::clamp(y + dy, 0, gray.height - 1)));
      auto mid = window.begin() + window.size() / 2;
      std::nth_element(window.begin(), mid, window.end());
      out.at(x, y) = *mid;
    }
  return out;
}

// Text recognition is pluggable; nullopt signals that the engine itself
// failed (as opposed to finding no text).
class OcrEngine {
public:
  virtual ~OcrEngine() = default;
  virtual std::optional<std::string> recognize(const GrayImage& image) = 0;
};

// Deterministic engine for tests and offline runs.
class StubOcr final : public OcrEngine {
public:
  explicit StubOcr(std::optional<std::string> text) : text_(std::move(text)) {}
  std::optional<std::string> recognize(const GrayImage&) override {
    return text_;
  }

private:
  std::optional<std::string> text_;
};

// Spawns a configured command per image, e.g.
//   tesseract {image} stdout
// The blurred grayscale is written to a temporary PGM, {image} is replaced
// with its path, and whatever the command prints is the recognized text. A
// nonzero exit (or timeout) reads as engine failure.
class ExternalProcessOcr final : public OcrEngine {
public:
  explicit ExternalProcessOcr(std::string command_template,
                              int timeout_seconds = 30)
      : template_(std::move(command_template)), timeout_(timeout_seconds) {
    if (template_.find("{image}") == std::string::npos)
      throw UsageError("OCR command template must contain {image}");
  }

  std::optional<std::string> recognize(const GrayImage& image) override {
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() /
                   ("newsrank_ocr_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter_++) + ".pgm");
    try {
      write_pgm(image, tmp);
    } catch (const DataError&) {
      return std::nullopt;
    }
    std::string cmd = template_;
    cmd.replace(cmd.find("{image}"), 7, tmp.string());
    if (timeout_ > 0)
      cmd = "timeout " + std::to_string(timeout_) + " " + cmd;
    cmd += " 2>/dev/null";
    std::optional<std::string> result;
    if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
      std::string text;
      std::array<char, 4096> buf;
      std::size_t got;
      while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        text.append(buf.data(), got);
      int status = ::pclose(pipe);
      if (status == 0) result = text;
    }
    std::error_code ec;
    fs::remove(tmp, ec);
    return result;
  }

private:
  std::string template_;
  int timeout_;
  unsigned counter_ = 0;
};

inline std::size_t nonspace_length(const std::string& text) {
  std::size_t n = 0;
  for (unsigned char c : text)
    if (!std::isspace(c)) ++n;
  return n;
}

inline constexpr int kDefaultCaptionMinChars = 20;

// Median-blurs the grayscale and asks the OCR engine for text; prominent
// text (at or above the character cutoff, whitespace stripped) drops the
// image. Engine failure keeps it, so an OCR outage cannot silently thin
// the corpus.
inline FilterVerdict captioned_filter(const ImageRecord& image,
                                      OcrEngine& ocr,
                                      int min_chars = kDefaultCaptionMinChars,
                                      int* warnings = nullptr) {
  FilterVerdict v;
  v.image_id = image.image_id;
  GrayImage blurred = median_blur(to_gray(image.image), 3);
  std::optional<std::string> text;
  try {
    text = ocr.recognize(blurred);
  } catch (const std::exception&) {
    text = std::nullopt;
  }
  if (!text.has_value()) {
    if (warnings) ++*warnings;
    return v;  // fail open
  }
  if (nonspace_length(*text) >= static_cast<std::size_t>(min_chars)) {
    v.decision = FilterDecision::drop;
    v.reason = FilterReason::captioned;
  }
  return v;
}

struct FilterParams {
  CoarseThresholds coarse;
  SyntheticFeatureParams synthetic;
  double synthetic_threshold = 0.5;
  int caption_min_chars = kDefaultCaptionMinChars;
};

// Full stage-1 verdict: coarse -> synthetic -> captioned, short-circuiting
// at the first drop. An image carried by several posts is kept if any of
// them passes the coarse rules; when all fail, the earliest post's reason
// is reported.
inline FilterVerdict apply_filters(
    const ImageRecord& image, const std::vector<const SocialPost*>& posts,
    const LogisticModel& synthetic_model, OcrEngine* ocr,
    const FilterParams& params = {}, int* warnings = nullptr) {
  if (posts.empty())
    throw ContractError("apply_filters: image has no source posts");
  FilterVerdict coarse_verdict;
  bool any_pass = false;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    FilterVerdict v = coarse_filter(*posts[i], image, params.coarse);
    if (i == 0) coarse_verdict = v;
    if (v.kept()) {
      any_pass = true;
      break;
    }
  }
  if (!any_pass) return coarse_verdict;

  FilterVerdict v;
  v.image_id = image.image_id;
  auto [probability, decision] = classify_synthetic(
      synthetic_features(image.image, params.synthetic), synthetic_model,
      params.synthetic_threshold);
  v.score = probability;
  if (decision == FilterDecision::drop) {
    v.decision = FilterDecision::drop;
    v.reason = FilterReason::synthetic;
    return v;
  }
  if (ocr) {
    FilterVerdict c =
        captioned_filter(image, *ocr, params.caption_min_chars, warnings);
    if (!c.kept()) {
      v.decision = FilterDecision::drop;
      v.reason = FilterReason::captioned;
    }
  }
  return v;
}

}  // namespace newsrank
