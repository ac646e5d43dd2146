#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/error.hpp"
#include "newsrank/image.hpp"
#include "newsrank/image_codec.hpp"
#include "newsrank/md5.hpp"
#include "newsrank/phash.hpp"

namespace newsrank {

struct SocialPost {
  std::string post_id;
  std::string text;
  int hashtag_count = 0;
  int mention_count = 0;
  int url_count = 0;
  long long retweet_count = 0;          // #RT
  long long author_follower_count = 0;  // #FL
  std::vector<std::string> image_ids;
};

struct ImageRecord {
  std::string image_id;
  RgbImage image;
  std::string md5_hex;      // digest of the raw file bytes
  std::uint64_t phash64 = 0;
  std::vector<std::string> source_post_ids;  // sorted

  int width() const { return image.width; }
  int height() const { return image.height; }
};

enum class BinaryLabel { not_news_quality = 0, news_quality = 1 };

// Maps a 0..7 yes-vote count to a binary class. Agreement of at least six
// of the seven annotators is required for a class; everything in between is
// left unlabeled.
inline std::optional<BinaryLabel> binarize_labels(int votes) {
  if (votes < 0 || votes > 7)
    throw ContractError("binarize_labels: votes outside [0,7]");
  if (votes >= 6) return BinaryLabel::news_quality;
  if (votes <= 1) return BinaryLabel::not_news_quality;
  return std::nullopt;
}

struct QualityLabel {
  int votes = 0;
  std::optional<BinaryLabel> binary;
};

struct Corpus {
  std::map<std::string, SocialPost> posts;
  std::map<std::string, ImageRecord> images;
  std::map<std::string, QualityLabel> labels;
  std::map<std::string, std::vector<std::string>> concepts;
  int undecodable_images = 0;  // warning tally from loading
};

namespace detail {

inline nlohmann::json parse_jsonl_line(const std::string& line,
                                       const std::filesystem::path& path,
                                       std::size_t line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                    e.what());
  }
}

template <typename T>
T require_field(const nlohmann::json& j, const char* key,
                const std::filesystem::path& path, std::size_t line_no) {
  if (!j.contains(key))
    throw DataError(path.string() + ":" + std::to_string(line_no) +
                    ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": key '" +
                    key + "': " + e.what());
  }
}

inline void require_nonneg(long long v, const char* key,
                           const std::string& post_id) {
  if (v < 0)
    throw DataError("post " + post_id + ": " + key + " must be nonnegative");
}

}  // namespace detail

// Reads the posts JSONL and decodes every referenced image. Image ids are
// the relative paths from the posts file, so two posts naming the same file
// share one ImageRecord. A reference to a missing file is a hard error; a
// file that exists but does not decode is skipped with a warning tally.
inline Corpus load_corpus(const std::filesystem::path& posts_path,
                          const std::filesystem::path& images_dir,
                          const std::optional<std::filesystem::path>&
                              concepts_path = std::nullopt,
                          const std::optional<std::filesystem::path>&
                              labels_path = std::nullopt) {
  Corpus corpus;
  std::ifstream in(posts_path);
  if (!in) throw DataError("cannot open posts file: " + posts_path.string());

  std::set<std::string> failed_images;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = detail::parse_jsonl_line(line, posts_path, line_no);
    SocialPost post;
    post.post_id =
        detail::require_field<std::string>(j, "post_id", posts_path, line_no);
    post.text = j.value("text", std::string{});
    post.hashtag_count =
        detail::require_field<int>(j, "hashtags", posts_path, line_no);
    post.mention_count =
        detail::require_field<int>(j, "mentions", posts_path, line_no);
    post.url_count = detail::require_field<int>(j, "urls", posts_path, line_no);
    post.retweet_count =
        detail::require_field<long long>(j, "retweets", posts_path, line_no);
    post.author_follower_count =
        detail::require_field<long long>(j, "followers", posts_path, line_no);
    detail::require_nonneg(post.hashtag_count, "hashtags", post.post_id);
    detail::require_nonneg(post.mention_count, "mentions", post.post_id);
    detail::require_nonneg(post.url_count, "urls", post.post_id);
    detail::require_nonneg(post.retweet_count, "retweets", post.post_id);
    detail::require_nonneg(post.author_follower_count, "followers",
                           post.post_id);
    auto paths = detail::require_field<std::vector<std::string>>(
        j, "images", posts_path, line_no);
    if (corpus.posts.contains(post.post_id))
      throw DataError("duplicate post_id: " + post.post_id);

    for (const std::string& rel : paths) {
      if (failed_images.contains(rel)) continue;
      if (std::find(post.image_ids.begin(), post.image_ids.end(), rel) !=
          post.image_ids.end())
        continue;  // same path listed twice in one post
      auto it = corpus.images.find(rel);
      if (it != corpus.images.end()) {
        it->second.source_post_ids.push_back(post.post_id);
        post.image_ids.push_back(rel);
        continue;
      }
      std::filesystem::path file = images_dir / rel;
      if (!std::filesystem::exists(file))
        throw DataError("post " + post.post_id +
                        " references missing image: " + rel);
      std::vector<std::uint8_t> bytes = read_file_bytes(file);
      ImageRecord rec;
      try {
        rec.image = decode_image(bytes, file.string());
      } catch (const DataError&) {
        failed_images.insert(rel);
        ++corpus.undecodable_images;
        continue;
      }
      rec.image_id = rel;
      rec.md5_hex = md5_hex(bytes);
      rec.phash64 = phash64(rec.image);
      rec.source_post_ids.push_back(post.post_id);
      corpus.images.emplace(rel, std::move(rec));
      post.image_ids.push_back(rel);
    }
    corpus.posts.emplace(post.post_id, std::move(post));
  }

  for (auto& [id, rec] : corpus.images) {
    std::sort(rec.source_post_ids.begin(), rec.source_post_ids.end());
    rec.source_post_ids.erase(
        std::unique(rec.source_post_ids.begin(), rec.source_post_ids.end()),
        rec.source_post_ids.end());
  }

  if (concepts_path) {
    std::ifstream cin(*concepts_path);
    if (!cin)
      throw DataError("cannot open concepts file: " + concepts_path->string());
    line_no = 0;
    while (std::getline(cin, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j =
          detail::parse_jsonl_line(line, *concepts_path, line_no);
      auto id = detail::require_field<std::string>(j, "image_id",
                                                   *concepts_path, line_no);
      if (failed_images.contains(id)) continue;
      if (!corpus.images.contains(id))
        throw DataError("concepts reference unknown image_id: " + id);
      corpus.concepts[id] = detail::require_field<std::vector<std::string>>(
          j, "concepts", *concepts_path, line_no);
    }
  }

  if (labels_path) {
    std::ifstream lin(*labels_path);
    if (!lin)
      throw DataError("cannot open labels file: " + labels_path->string());
    std::string header;
    if (!std::getline(lin, header) || header != "image_id,votes")
      throw DataError("labels file must start with header 'image_id,votes': " +
                      labels_path->string());
    line_no = 1;
    while (std::getline(lin, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto comma = line.rfind(',');
      if (comma == std::string::npos)
        throw DataError(labels_path->string() + ":" + std::to_string(line_no) +
                        ": expected image_id,votes");
      std::string id = line.substr(0, comma);
      int votes;
      try {
        votes = std::stoi(line.substr(comma + 1));
      } catch (const std::exception&) {
        throw DataError(labels_path->string() + ":" + std::to_string(line_no) +
                        ": votes is not an integer");
      }
      if (failed_images.contains(id)) continue;
      if (!corpus.images.contains(id))
        throw DataError("labels reference unknown image_id: " + id);
      if (votes < 0 || votes > 7)
        throw DataError(labels_path->string() + ":" + std::to_string(line_no) +
                        ": votes outside [0,7]");
      corpus.labels[id] = QualityLabel{votes, binarize_labels(votes)};
    }
  }
  return corpus;
}

// Writes the corpus metadata back out in the load_corpus file formats.
// Image files themselves are never re-encoded; a reload against the same
// images directory reproduces the corpus.
inline void save_corpus(const Corpus& corpus,
                        const std::filesystem::path& posts_path,
                        const std::optional<std::filesystem::path>&
                            concepts_path = std::nullopt,
                        const std::optional<std::filesystem::path>&
                            labels_path = std::nullopt) {
  std::ofstream out(posts_path);
  if (!out) throw DataError("cannot write " + posts_path.string());
  for (const auto& [id, post] : corpus.posts) {
    nlohmann::json j{{"post_id", post.post_id},
                     {"text", post.text},
                     {"hashtags", post.hashtag_count},
                     {"mentions", post.mention_count},
                     {"urls", post.url_count},
                     {"retweets", post.retweet_count},
                     {"followers", post.author_follower_count},
                     {"images", post.image_ids}};
    out << j.dump() << '\n';
  }
  if (concepts_path) {
    std::ofstream cout_(*concepts_path);
    if (!cout_) throw DataError("cannot write " + concepts_path->string());
    for (const auto& [id, list] : corpus.concepts) {
      nlohmann::json j{{"image_id", id}, {"concepts", list}};
      cout_ << j.dump() << '\n';
    }
  }
  if (labels_path) {
    std::ofstream lout(*labels_path);
    if (!lout) throw DataError("cannot write " + labels_path->string());
    lout << "image_id,votes\n";
    for (const auto& [id, label] : corpus.labels)
      lout << id << ',' << label.votes << '\n';
  }
}

}  // namespace newsrank
