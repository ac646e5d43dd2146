#pragma once

// Deterministic corpora for demos, tests and benchmarks. Everything here is
// seeded; the same seed always produces byte-identical files.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/dataset.hpp"
#include "newsrank/image.hpp"
#include "newsrank/image_codec.hpp"

namespace newsrank::testing {

// ---------------------------------------------------------------------------
// Procedural images
// ---------------------------------------------------------------------------

inline RgbImage flat_image(int w, int h, std::uint8_t r, std::uint8_t g,
                           std::uint8_t b) {
  return RgbImage::filled(w, h, r, g, b);
}

// Flat background with a few axis-parallel rectangles and rules: the look
// of banners, flyers and UI screenshots.
inline RgbImage line_art_image(int w, int h, Rng& rng) {
  auto channel = [&] { return static_cast<std::uint8_t>(rng.below(256)); };
  RgbImage img = flat_image(w, h, channel(), channel(), channel());
  int rects = static_cast<int>(2 + rng.below(4));
  for (int k = 0; k < rects; ++k) {
    int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(w - 20)));
    int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(h - 20)));
    int rw = 10 + static_cast<int>(rng.below(static_cast<std::uint64_t>(w - x0 - 10)));
    int rh = 10 + static_cast<int>(rng.below(static_cast<std::uint64_t>(h - y0 - 10)));
    std::uint8_t r = channel(), g = channel(), b = channel();
    for (int y = y0; y < std::min(h, y0 + rh); ++y)
      for (int x = x0; x < std::min(w, x0 + rw); ++x) {
        std::uint8_t* p = img.px(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
      }
  }
  int lines = static_cast<int>(1 + rng.below(3));
  for (int k = 0; k < lines; ++k) {
    bool horizontal = rng.below(2) == 0;
    std::uint8_t r = channel(), g = channel(), b = channel();
    if (horizontal) {
      int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(h)));
      for (int x = 0; x < w; ++x) {
        std::uint8_t* p = img.px(x, y);
        p[0] = r; p[1] = g; p[2] = b;
      }
    } else {
      int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(w)));
      for (int y = 0; y < h; ++y) {
        std::uint8_t* p = img.px(x, y);
        p[0] = r; p[1] = g; p[2] = b;
      }
    }
  }
  return img;
}

// Independent uniform noise per channel.
inline RgbImage noise_image(int w, int h, Rng& rng) {
  RgbImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

// Smooth colored blobs from a bilinearly upsampled coarse grid, plus mild
// per-pixel jitter: a stand-in for photographic texture.
inline RgbImage value_noise_image(int w, int h, Rng& rng, int grid = 6,
                                  int jitter = 14) {
  std::vector<std::array<double, 3>> coarse(
      static_cast<std::size_t>(grid) * grid);
  for (auto& c : coarse)
    for (int ch = 0; ch < 3; ++ch)
      c[static_cast<std::size_t>(ch)] = 20.0 + 215.0 * rng.uniform();
  RgbImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    double gy = static_cast<double>(y) / h * (grid - 1);
    int y0 = static_cast<int>(gy), y1 = std::min(y0 + 1, grid - 1);
    double fy = gy - y0;
    for (int x = 0; x < w; ++x) {
      double gx = static_cast<double>(x) / w * (grid - 1);
      int x0 = static_cast<int>(gx), x1 = std::min(x0 + 1, grid - 1);
      double fx = gx - x0;
      std::uint8_t* p = img.px(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        double v =
            (1 - fy) * ((1 - fx) * coarse[static_cast<std::size_t>(y0) * grid + x0][ch] +
                        fx * coarse[static_cast<std::size_t>(y0) * grid + x1][ch]) +
            fy * ((1 - fx) * coarse[static_cast<std::size_t>(y1) * grid + x0][ch] +
                  fx * coarse[static_cast<std::size_t>(y1) * grid + x1][ch]);
        if (jitter > 0)
          v += static_cast<double>(rng.uniform_int(-jitter, jitter));
        p[ch] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return img;
}

// Horizontal luminance ramp with small jitter; smooth but not flat.
inline RgbImage gradient_image(int w, int h, Rng& rng, int jitter = 2) {
  RgbImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double base = 255.0 * x / std::max(1, w - 1);
      std::uint8_t* p = img.px(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        double v = base;
        if (jitter > 0)
          v += static_cast<double>(rng.uniform_int(-jitter, jitter));
        p[ch] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  return img;
}

// Crops away margins (fractions of each dimension, split between the two
// sides) — the classic repost edit.
inline RgbImage crop_image(const RgbImage& src, double fraction) {
  int dx = static_cast<int>(src.width * fraction / 2);
  int dy = static_cast<int>(src.height * fraction / 2);
  RgbImage out;
  out.width = src.width - 2 * dx;
  out.height = src.height - 2 * dy;
  out.pixels.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      const std::uint8_t* s = src.px(x + dx, y + dy);
      std::uint8_t* d = out.px(x, y);
      d[0] = s[0]; d[1] = s[1]; d[2] = s[2];
    }
  return out;
}

// Linear contrast change about the mid level.
inline RgbImage adjust_contrast(const RgbImage& src, double factor) {
  RgbImage out = src;
  for (auto& p : out.pixels) {
    double v = 128.0 + (static_cast<double>(p) - 128.0) * factor;
    p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic-vs-photo corpus (spam classifier training)
// ---------------------------------------------------------------------------

struct SpamCorpus {
  std::vector<RgbImage> photos;
  std::vector<RgbImage> synthetic;
};

inline SpamCorpus make_spam_corpus(int per_class, std::uint64_t seed,
                                   int w = kNormalizedWidth,
                                   int h = kNormalizedHeight) {
  SpamCorpus c;
  Rng rng(seed);
  for (int i = 0; i < per_class; ++i) {
    switch (i % 3) {
      case 0: c.photos.push_back(noise_image(w, h, rng)); break;
      case 1: c.photos.push_back(value_noise_image(w, h, rng)); break;
      default: c.photos.push_back(gradient_image(w, h, rng)); break;
    }
  }
  for (int i = 0; i < per_class; ++i) {
    if (i % 3 == 0) {
      auto channel = [&] { return static_cast<std::uint8_t>(rng.below(256)); };
      c.synthetic.push_back(flat_image(w, h, channel(), channel(), channel()));
    } else {
      c.synthetic.push_back(line_art_image(w, h, rng));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// News-ranking desk corpus with planted signals
// ---------------------------------------------------------------------------
//
// Sixty images in five groups:
//   - 20 "news" images: good visuals, newsy concepts, strong social signals
//   - 10 visual decoys: same image generator as the news group, junk rest
//   - 10 concept decoys: newsy concepts only
//   - 10 social decoys: strong social signals only
//   - 10 plain junk
// Only the combination of all three feature families separates news images
// from every decoy group.

struct DeskCorpusPaths {
  std::filesystem::path posts;
  std::filesystem::path images_dir;
  std::filesystem::path concepts;
  std::filesystem::path labels;
  std::filesystem::path faces;
  std::filesystem::path spam_labels;
};

namespace detail {

inline const std::vector<std::string>& news_vocab() {
  static const std::vector<std::string> v{"stage",  "concert", "event",
                                          "crowd",  "night",   "performance",
                                          "music",  "festival"};
  return v;
}

inline const std::vector<std::string>& junk_vocab() {
  static const std::vector<std::string> v{"selfie", "product", "advertising",
                                          "font",   "screenshot", "girl",
                                          "fun",    "recreation"};
  return v;
}

inline std::vector<std::string> sample_concepts(
    const std::vector<std::string>& vocab, Rng& rng, int count) {
  std::vector<std::string> pool = vocab;
  rng.shuffle(pool);
  pool.resize(static_cast<std::size_t>(std::min<int>(count, static_cast<int>(pool.size()))));
  return pool;
}

}  // namespace detail

// Writes the corpus to disk and returns the file layout. images/ holds
// PNGs; sidecars follow the loader's formats.
inline DeskCorpusPaths write_desk_corpus(const std::filesystem::path& dir,
                                         std::uint64_t seed) {
  namespace fs = std::filesystem;
  DeskCorpusPaths paths;
  paths.posts = dir / "posts.jsonl";
  paths.images_dir = dir / "images";
  paths.concepts = dir / "concepts.jsonl";
  paths.labels = dir / "labels.csv";
  paths.faces = dir / "faces.jsonl";
  paths.spam_labels = dir / "spam_labels.csv";
  fs::create_directories(paths.images_dir);

  Rng rng(seed);
  std::ofstream posts(paths.posts);
  std::ofstream concepts(paths.concepts);
  std::ofstream labels(paths.labels);
  std::ofstream faces(paths.faces);
  labels << "image_id,votes\n";

  struct Item {
    std::string kind;  // news | vdecoy | cdecoy | sdecoy | junk
    int index = 0;
  };
  std::vector<Item> items;
  for (int i = 0; i < 20; ++i) items.push_back({"news", i});
  for (int i = 0; i < 10; ++i) items.push_back({"vdecoy", i});
  for (int i = 0; i < 10; ++i) items.push_back({"cdecoy", i});
  for (int i = 0; i < 10; ++i) items.push_back({"sdecoy", i});
  for (int i = 0; i < 10; ++i) items.push_back({"junk", i});

  int post_counter = 0;
  auto next_post_id = [&] {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%04d", post_counter++);
    return std::string(buf);
  };

  for (const auto& item : items) {
    char name[32];
    std::snprintf(name, sizeof name, "%s_%02d.png", item.kind.c_str(),
                  item.index);
    std::string image_id = name;
    bool good_visual = item.kind == "news" || item.kind == "vdecoy";
    bool good_concepts = item.kind == "news" || item.kind == "cdecoy";
    bool good_social = item.kind == "news" || item.kind == "sdecoy";

    RgbImage img = good_visual
                       ? value_noise_image(320, 240, rng, 8, 40)
                       : gradient_image(320, 240, rng, 6);
    write_png(img, paths.images_dir / image_id);

    nlohmann::json post{
        {"post_id", next_post_id()},
        {"text", item.kind + " post"},
        {"hashtags", static_cast<int>(rng.below(3))},
        {"mentions", static_cast<int>(rng.below(3))},
        {"urls", static_cast<int>(rng.below(2))},
        {"retweets", good_social ? rng.uniform_int(200, 2000)
                                 : rng.uniform_int(0, 5)},
        {"followers", good_social ? rng.uniform_int(20000, 900000)
                                  : rng.uniform_int(10, 500)},
        {"images", std::vector<std::string>{image_id}}};
    posts << post.dump() << '\n';

    auto vocab = good_concepts ? detail::news_vocab() : detail::junk_vocab();
    auto clist = detail::sample_concepts(vocab, rng, 3 + static_cast<int>(rng.below(3)));
    concepts << nlohmann::json{{"image_id", image_id}, {"concepts", clist}}.dump()
             << '\n';

    int votes = item.kind == "news" ? (rng.below(2) ? 7 : 6)
                                    : static_cast<int>(rng.below(2));
    labels << image_id << ',' << votes << '\n';

    int face_count = good_visual ? static_cast<int>(rng.below(4)) : 0;
    faces << nlohmann::json{{"image_id", image_id}, {"faces", face_count}}.dump()
          << '\n';
  }

  // A couple of spammy posts and redundant reposts to exercise the
  // filtering and dedup stages end to end.
  {
    RgbImage meme = line_art_image(320, 240, rng);
    write_png(meme, paths.images_dir / "spammy_post_image.png");
    nlohmann::json post{{"post_id", next_post_id()},
                        {"text", "BUY NOW #a #b #c #d"},
                        {"hashtags", 6},
                        {"mentions", 0},
                        {"urls", 3},
                        {"retweets", 1},
                        {"followers", 40},
                        {"images", std::vector<std::string>{"spammy_post_image.png"}}};
    posts << post.dump() << '\n';
    labels << "spammy_post_image.png,0\n";

    // Exact repost of news_00 (same file, second post).
    nlohmann::json repost{{"post_id", next_post_id()},
                          {"text", "repost"},
                          {"hashtags", 0},
                          {"mentions", 0},
                          {"urls", 0},
                          {"retweets", 77},
                          {"followers", 4200},
                          {"images", std::vector<std::string>{"news_00.png"}}};
    posts << repost.dump() << '\n';

    // Near duplicate of news_01: cropped and contrast shifted.
    RgbImage original = decode_image_file(paths.images_dir / "news_01.png");
    RgbImage variant = adjust_contrast(crop_image(original, 0.08), 1.2);
    write_png(variant, paths.images_dir / "news_01_repost.png");
    nlohmann::json near{{"post_id", next_post_id()},
                        {"text", "look at this"},
                        {"hashtags", 1},
                        {"mentions", 0},
                        {"urls", 0},
                        {"retweets", 55},
                        {"followers", 900},
                        {"images", std::vector<std::string>{"news_01_repost.png"}}};
    posts << near.dump() << '\n';
    labels << "news_01_repost.png,6\n";
    concepts << nlohmann::json{{"image_id", "news_01_repost.png"},
                               {"concepts", detail::news_vocab()}}
                    .dump()
             << '\n';
  }
  return paths;
}

// Spam-classifier corpus on disk: posts + images + class labels.
inline DeskCorpusPaths write_spam_corpus(const std::filesystem::path& dir,
                                         int per_class, std::uint64_t seed) {
  namespace fs = std::filesystem;
  DeskCorpusPaths paths;
  paths.posts = dir / "posts.jsonl";
  paths.images_dir = dir / "images";
  paths.spam_labels = dir / "spam_labels.csv";
  fs::create_directories(paths.images_dir);

  SpamCorpus corpus = make_spam_corpus(per_class, seed);
  std::ofstream posts(paths.posts);
  std::ofstream labels(paths.spam_labels);
  labels << "image_id,label\n";
  int post_counter = 0;
  auto write_one = [&](const RgbImage& img, const std::string& id,
                       const char* label) {
    write_png(img, paths.images_dir / id);
    nlohmann::json post{{"post_id", "sp" + std::to_string(post_counter++)},
                        {"text", ""},
                        {"hashtags", 0},
                        {"mentions", 0},
                        {"urls", 0},
                        {"retweets", 0},
                        {"followers", 0},
                        {"images", std::vector<std::string>{id}}};
    posts << post.dump() << '\n';
    labels << id << ',' << label << '\n';
  };
  for (std::size_t i = 0; i < corpus.photos.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "photo_%03zu.png", i);
    write_one(corpus.photos[i], name, "photo");
  }
  for (std::size_t i = 0; i < corpus.synthetic.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%03zu.png", i);
    write_one(corpus.synthetic[i], name, "synthetic");
  }
  return paths;
}

}  // namespace newsrank::testing
