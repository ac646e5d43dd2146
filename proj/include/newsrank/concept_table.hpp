#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/error.hpp"

namespace newsrank {

// Concept strings from vision providers are inconsistent; fold case and
// trim before any matching.
inline std::string normalize_concept(const std::string& raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out = raw.substr(b, e - b);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Per-concept appearance probabilities in the news-quality population (Y)
// and the rest (N). Concepts appearing in fewer than two images of a set
// are dropped from that set's map.
struct ConceptProbabilityTable {
  std::map<std::string, double> py;
  std::map<std::string, double> pn;
  long long y_size = 0;
  long long n_size = 0;
};

struct ConceptScore {
  double sum_py = 0;
  double sum_pn = 0;
};

namespace detail {

inline std::map<std::string, long long> document_frequency(
    const std::map<std::string, std::vector<std::string>>& images) {
  std::map<std::string, long long> df;
  for (const auto& [id, concepts] : images) {
    std::set<std::string> unique;
    for (const auto& c : concepts) {
      std::string norm = normalize_concept(c);
      if (!norm.empty()) unique.insert(norm);
    }
    for (const auto& c : unique) ++df[c];
  }
  return df;
}

}  // namespace detail

inline ConceptProbabilityTable build_tables(
    const std::map<std::string, std::vector<std::string>>& y_images,
    const std::map<std::string, std::vector<std::string>>& n_images) {
  if (y_images.empty() || n_images.empty())
    throw DataError("build_tables: empty Y or N population");
  ConceptProbabilityTable table;
  table.y_size = static_cast<long long>(y_images.size());
  table.n_size = static_cast<long long>(n_images.size());
  for (const auto& [c, df] : detail::document_frequency(y_images))
    if (df >= 2) table.py[c] = static_cast<double>(df) / table.y_size;
  for (const auto& [c, df] : detail::document_frequency(n_images))
    if (df >= 2) table.pn[c] = static_cast<double>(df) / table.n_size;
  return table;
}

// Sums table probabilities over the distinct concepts of one image;
// concepts outside the table contribute nothing.
inline ConceptScore score(const std::vector<std::string>& concepts,
                          const ConceptProbabilityTable& table) {
  std::set<std::string> unique;
  for (const auto& c : concepts) {
    std::string norm = normalize_concept(c);
    if (!norm.empty()) unique.insert(norm);
  }
  ConceptScore s;
  for (const auto& c : unique) {
    if (auto it = table.py.find(c); it != table.py.end()) s.sum_py += it->second;
    if (auto it = table.pn.find(c); it != table.pn.end()) s.sum_pn += it->second;
  }
  return s;
}

inline void save_concept_table(const ConceptProbabilityTable& table,
                               const std::filesystem::path& path) {
  nlohmann::json j{{"format_version", 1},
                   {"y_size", table.y_size},
                   {"n_size", table.n_size},
                   {"py", table.py},
                   {"pn", table.pn}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline ConceptProbabilityTable load_concept_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open concept table: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad concept table " + path.string() + ": " + e.what());
  }
  ConceptProbabilityTable table;
  table.y_size = j.at("y_size").get<long long>();
  table.n_size = j.at("n_size").get<long long>();
  table.py = j.at("py").get<std::map<std::string, double>>();
  table.pn = j.at("pn").get<std::map<std::string, double>>();
  return table;
}

}  // namespace newsrank
