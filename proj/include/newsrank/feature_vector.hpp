#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "newsrank/concept_table.hpp"
#include "newsrank/error.hpp"
#include "newsrank/social_signals.hpp"
#include "newsrank/synthetic_features.hpp"
#include "newsrank/visual_features.hpp"

namespace newsrank {

// Named, ordered feature values. No extractor may emit NaN or infinity.
struct FeatureVector {
  std::string schema_id;
  std::vector<std::string> names;
  std::vector<double> values;

  void assert_finite() const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!std::isfinite(values[i]))
        throw ContractError("non-finite feature value: " + names[i]);
  }
};

enum class FeatureFamily { visual, concepts, social, full };

inline FeatureFamily parse_family(const std::string& s) {
  if (s == "V") return FeatureFamily::visual;
  if (s == "C") return FeatureFamily::concepts;
  if (s == "S") return FeatureFamily::social;
  if (s == "F") return FeatureFamily::full;
  throw UsageError("unknown feature family '" + s + "' (expected V, C, S or F)");
}

inline const char* family_name(FeatureFamily f) {
  switch (f) {
    case FeatureFamily::visual: return "V";
    case FeatureFamily::concepts: return "C";
    case FeatureFamily::social: return "S";
    case FeatureFamily::full: return "F";
  }
  return "?";
}

inline const std::vector<std::string>& visual_feature_names() {
  static const std::vector<std::string> names{
      "edges_v",      "edges_h",    "edges_d",
      "rule_of_thirds", "focus",    "entropy",
      "faces",        "luminance",  "simplicity",
      "area",         "aspect",     "orient_square",
      "orient_portrait", "orient_landscape", "colorfulness"};
  return names;
}

inline const std::vector<std::string>& concept_feature_names() {
  static const std::vector<std::string> names{"sum_py", "sum_pn"};
  return names;
}

inline const std::vector<std::string>& social_feature_names() {
  static const std::vector<std::string> names{"rt", "fl", "un", "dd"};
  return names;
}

inline const std::vector<std::string>& full_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> all = visual_feature_names();
    for (const auto& n : concept_feature_names()) all.push_back(n);
    for (const auto& n : social_feature_names()) all.push_back(n);
    return all;
  }();
  return names;
}

inline const std::vector<std::string>& synthetic_feature_names() {
  static const std::vector<std::string> names{
      "f1",      "f2",      "f2_over_f1", "c1_ratio", "dominant_colors",
      "h_lines", "v_lines", "corners",    "luminance", "edges_v",
      "edges_h", "edges_d45", "edges_d135"};
  return names;
}

inline FeatureVector to_feature_vector(const VisualFeatures& v) {
  FeatureVector fv;
  fv.schema_id = "visual/1";
  fv.names = visual_feature_names();
  fv.values = {static_cast<double>(v.edges_v),
               static_cast<double>(v.edges_h),
               static_cast<double>(v.edges_d),
               v.rule_of_thirds,
               v.focus,
               v.entropy,
               static_cast<double>(v.faces),
               v.luminance,
               v.simplicity,
               v.area,
               v.aspect,
               v.orientation == Orientation::square ? 1.0 : 0.0,
               v.orientation == Orientation::portrait ? 1.0 : 0.0,
               v.orientation == Orientation::landscape ? 1.0 : 0.0,
               v.colorfulness};
  fv.assert_finite();
  return fv;
}

inline FeatureVector to_feature_vector(const SyntheticFeatures& s) {
  FeatureVector fv;
  fv.schema_id = "synthetic/1";
  fv.names = synthetic_feature_names();
  fv.values = {s.f1,
               s.f2,
               s.f2_over_f1,
               s.c1_ratio,
               static_cast<double>(s.dominant_colors),
               static_cast<double>(s.h_lines),
               static_cast<double>(s.v_lines),
               static_cast<double>(s.corners),
               s.luminance,
               static_cast<double>(s.edge_hist.vertical),
               static_cast<double>(s.edge_hist.horizontal),
               static_cast<double>(s.edge_hist.diag45),
               static_cast<double>(s.edge_hist.diag135)};
  fv.assert_finite();
  return fv;
}

inline FeatureVector make_full_vector(const VisualFeatures& v,
                                      const ConceptScore& c,
                                      const SocialFeatures& s) {
  FeatureVector visual = to_feature_vector(v);
  FeatureVector fv;
  fv.schema_id = "news-full/1";
  fv.names = full_feature_names();
  fv.values = std::move(visual.values);
  fv.values.push_back(c.sum_py);
  fv.values.push_back(c.sum_pn);
  fv.values.push_back(static_cast<double>(s.rt));
  fv.values.push_back(static_cast<double>(s.fl));
  fv.values.push_back(static_cast<double>(s.un));
  fv.values.push_back(static_cast<double>(s.dd));
  fv.assert_finite();
  return fv;
}

// Restricts a full vector to one feature family; F returns a copy.
inline FeatureVector family_subset(const FeatureVector& full,
                                   FeatureFamily family) {
  if (full.schema_id != "news-full/1")
    throw ContractError("family_subset expects a news-full/1 vector");
  if (family == FeatureFamily::full) return full;
  const std::vector<std::string>* keep = nullptr;
  std::string schema;
  switch (family) {
    case FeatureFamily::visual:
      keep = &visual_feature_names();
      schema = "visual/1";
      break;
    case FeatureFamily::concepts:
      keep = &concept_feature_names();
      schema = "concepts/1";
      break;
    case FeatureFamily::social:
      keep = &social_feature_names();
      schema = "social/1";
      break;
    case FeatureFamily::full:
      break;
  }
  FeatureVector out;
  out.schema_id = schema;
  for (const auto& name : *keep) {
    auto it = std::find(full.names.begin(), full.names.end(), name);
    out.names.push_back(name);
    out.values.push_back(
        full.values[static_cast<std::size_t>(it - full.names.begin())]);
  }
  return out;
}

// Feature dump: schema header then one row per image in the given order.
inline void write_feature_csv(
    const std::vector<std::pair<std::string, FeatureVector>>& rows,
    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "image_id";
  if (!rows.empty())
    for (const auto& name : rows.front().second.names) out << ',' << name;
  out << '\n';
  std::ostringstream line;
  line.precision(17);
  for (const auto& [id, fv] : rows) {
    line.str("");
    line << id;
    for (double v : fv.values) line << ',' << v;
    out << line.str() << '\n';
  }
}

}  // namespace newsrank
