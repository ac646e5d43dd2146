#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "newsrank/corpus.hpp"
#include "newsrank/error.hpp"
#include "newsrank/phash.hpp"

namespace newsrank {

// Exact groups share an MD5 digest; near groups are connected components of
// the pairwise near-duplicate relation, so no two shown images are linked
// by any chain of look-alikes.
struct DuplicateClusters {
  std::vector<std::vector<std::string>> exact_groups;  // members sorted
  std::vector<std::vector<std::string>> near_groups;
  std::vector<std::string> exact_canonical;  // aligned with groups
  std::vector<std::string> near_canonical;
  std::map<std::string, std::size_t> exact_index;  // image_id -> group
  std::map<std::string, std::size_t> near_index;
};

namespace detail {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

// Canonical member: the one whose earliest source post comes first. Post
// ids stand in for timestamps (they are allocated chronologically);
// memberless images sort after posted ones, and image id breaks ties.
inline std::tuple<bool, std::string, std::string> canonical_key(
    const ImageRecord& rec) {
  std::string first_post;
  if (!rec.source_post_ids.empty()) first_post = rec.source_post_ids.front();
  return {rec.source_post_ids.empty(), first_post, rec.image_id};
}

}  // namespace detail

inline DuplicateClusters cluster(
    const std::map<std::string, ImageRecord>& images,
    int hamming_cutoff = kNearDuplicateCutoff) {
  DuplicateClusters out;

  std::vector<const ImageRecord*> recs;
  recs.reserve(images.size());
  for (const auto& [id, rec] : images) recs.push_back(&rec);

  auto build_family = [&](const std::vector<std::vector<std::size_t>>& groups,
                          std::vector<std::vector<std::string>>& out_groups,
                          std::vector<std::string>& out_canonical,
                          std::map<std::string, std::size_t>& out_index) {
    struct Entry {
      std::vector<std::string> members;
      std::string canonical;
    };
    std::vector<Entry> entries;
    for (const auto& g : groups) {
      Entry e;
      auto best = detail::canonical_key(*recs[g.front()]);
      e.canonical = recs[g.front()]->image_id;
      for (std::size_t i : g) {
        e.members.push_back(recs[i]->image_id);
        auto key = detail::canonical_key(*recs[i]);
        if (key < best) {
          best = key;
          e.canonical = recs[i]->image_id;
        }
      }
      std::sort(e.members.begin(), e.members.end());
      entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) {
                return a.canonical < b.canonical;
              });
    for (std::size_t gi = 0; gi < entries.size(); ++gi) {
      out_groups.push_back(entries[gi].members);
      out_canonical.push_back(entries[gi].canonical);
      for (const auto& id : entries[gi].members) out_index[id] = gi;
    }
  };

  // Exact family: group by MD5.
  {
    std::map<std::string, std::vector<std::size_t>> by_md5;
    for (std::size_t i = 0; i < recs.size(); ++i)
      by_md5[recs[i]->md5_hex].push_back(i);
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [md5, g] : by_md5) groups.push_back(std::move(g));
    build_family(groups, out.exact_groups, out.exact_canonical,
                 out.exact_index);
  }

  // Near family: connected components over the pHash relation.
  {
    detail::UnionFind uf(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i)
      for (std::size_t j = i + 1; j < recs.size(); ++j)
        if (near_duplicate(recs[i]->phash64, recs[j]->phash64, hamming_cutoff))
          uf.unite(i, j);
    std::map<std::size_t, std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < recs.size(); ++i)
      comps[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> groups;
    for (auto& [root, g] : comps) groups.push_back(std::move(g));
    build_family(groups, out.near_groups, out.near_canonical, out.near_index);
  }
  return out;
}

// One JSONL row per near group, listing the canonical image, its exact
// duplicates, and the whole near group.
inline void write_cluster_report(const DuplicateClusters& clusters,
                                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t gi = 0; gi < clusters.near_groups.size(); ++gi) {
    const std::string& canonical = clusters.near_canonical[gi];
    auto it = clusters.exact_index.find(canonical);
    nlohmann::json j{
        {"canonical_image_id", canonical},
        {"exact_members", it == clusters.exact_index.end()
                              ? std::vector<std::string>{}
                              : clusters.exact_groups[it->second]},
        {"near_members", clusters.near_groups[gi]}};
    out << j.dump() << '\n';
  }
}

}  // namespace newsrank
