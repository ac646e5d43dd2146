#pragma once

#include <algorithm>
#include <set>
#include <string>

#include "newsrank/corpus.hpp"
#include "newsrank/dedup.hpp"
#include "newsrank/error.hpp"

namespace newsrank {

struct SocialFeatures {
  long long rt = 0;  // strongest retweet count over the exact group's posts
  long long fl = 0;  // strongest follower count likewise
  long long un = 0;  // distinct posts featuring the exact group
  long long dd = 0;  // distinct posts featuring the near group
};

enum class SocialAggregation { max, sum, mean };

namespace detail {

inline void collect_posts(const std::vector<std::string>& members,
                          const Corpus& corpus,
                          std::set<std::string>& post_ids) {
  for (const auto& id : members) {
    auto it = corpus.images.find(id);
    if (it == corpus.images.end())
      throw DataError("cluster member not in corpus: " + id);
    for (const auto& pid : it->second.source_post_ids) post_ids.insert(pid);
  }
}

inline long long aggregate(const std::set<std::string>& post_ids,
                           const Corpus& corpus, SocialAggregation how,
                           long long SocialPost::* field) {
  long long acc = 0;
  for (const auto& pid : post_ids) {
    auto it = corpus.posts.find(pid);
    if (it == corpus.posts.end())
      throw DataError("post not in corpus: " + pid);
    long long v = it->second.*field;
    acc = (how == SocialAggregation::max) ? std::max(acc, v) : acc + v;
  }
  if (how == SocialAggregation::mean && !post_ids.empty())
    acc /= static_cast<long long>(post_ids.size());
  return acc;
}

}  // namespace detail

// Signals for one image, computed over its duplicate groups: duplicates of
// an image share whatever social evidence any copy collected.
inline SocialFeatures social_features(
    const std::string& image_id, const Corpus& corpus,
    const DuplicateClusters& clusters,
    SocialAggregation aggregation = SocialAggregation::max) {
  auto ei = clusters.exact_index.find(image_id);
  auto ni = clusters.near_index.find(image_id);
  if (ei == clusters.exact_index.end() || ni == clusters.near_index.end())
    throw DataError("social_features: unknown image_id: " + image_id);

  std::set<std::string> exact_posts, near_posts;
  detail::collect_posts(clusters.exact_groups[ei->second], corpus, exact_posts);
  detail::collect_posts(clusters.near_groups[ni->second], corpus, near_posts);

  SocialFeatures s;
  s.rt = detail::aggregate(exact_posts, corpus, aggregation,
                           &SocialPost::retweet_count);
  s.fl = detail::aggregate(exact_posts, corpus, aggregation,
                           &SocialPost::author_follower_count);
  s.un = static_cast<long long>(exact_posts.size());
  s.dd = static_cast<long long>(near_posts.size());
  return s;
}

}  // namespace newsrank
