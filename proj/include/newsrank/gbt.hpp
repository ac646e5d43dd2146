#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/dataset.hpp"
#include "newsrank/error.hpp"
#include "newsrank/feature_vector.hpp"
#include "newsrank/logistic.hpp"

namespace newsrank {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                               : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
  }
};

enum class Objective { squared_error, logistic };

inline const char* to_string(Objective o) {
  return o == Objective::squared_error ? "squared_error" : "logistic";
}

struct GbtParams {
  int rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_leaf = 2;
};

struct GbtModel {
  std::vector<std::string> schema;
  Objective objective = Objective::squared_error;
  double base_score = 0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::map<std::string, double> gain;   // summed split impurity reduction
  std::map<std::string, double> cover;  // summed rows routed through splits

  double predict_raw(std::span<const double> x) const {
    if (x.size() != schema.size())
      throw ContractError("GbtModel: feature count mismatch");
    double s = 0;
    for (const auto& t : trees) s += t.predict(x);
    return base_score + learning_rate * s;
  }
  // For the logistic objective this is a probability; otherwise the raw score.
  double predict(std::span<const double> x) const {
    double raw = predict_raw(x);
    return objective == Objective::logistic ? sigmoid(raw) : raw;
  }
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
  bool valid() const { return feature >= 0; }
};

// Exact greedy search over every midpoint between consecutive distinct
// feature values, minimizing the squared error of fitting `targets`. Ties
// resolve to the lowest feature index, then the lowest threshold.
inline SplitCandidate best_split(const Matrix& x,
                                 const std::vector<double>& targets,
                                 const std::vector<std::size_t>& rows,
                                 int min_leaf) {
  SplitCandidate best;
  const std::size_t n = rows.size();
  if (n < 2 * static_cast<std::size_t>(min_leaf)) return best;
  double total = 0;
  for (std::size_t r : rows) total += targets[r];
  double parent_score = total * total / n;

  std::vector<std::pair<double, double>> vt(n);  // (feature value, target)
  for (std::size_t j = 0; j < x.cols; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      vt[i] = {x.at(rows[i], j), targets[rows[i]]};
    std::sort(vt.begin(), vt.end());
    double left_sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += vt[i].second;
      if (vt[i].first == vt[i + 1].first) continue;
      std::size_t nl = i + 1, nr = n - nl;
      if (nl < static_cast<std::size_t>(min_leaf) ||
          nr < static_cast<std::size_t>(min_leaf))
        continue;
      double threshold = (vt[i].first + vt[i + 1].first) / 2.0;
      // Guard against the midpoint rounding onto one of the endpoints.
      if (!(vt[i].first < threshold && threshold <= vt[i + 1].first)) continue;
      double right_sum = total - left_sum;
      double gain =
          left_sum * left_sum / nl + right_sum * right_sum / nr - parent_score;
      if (gain > best.gain) {
        best.feature = static_cast<int>(j);
        best.threshold = threshold;
        best.gain = gain;
      }
    }
  }
  return best;
}

namespace detail {

struct TreeBuilder {
  const Matrix& x;
  const std::vector<double>& gradients;
  const std::vector<double>& hessians;  // per-row curvature weights
  const GbtParams& params;
  RegressionTree tree;
  std::vector<std::pair<int, double>>* split_log;  // (feature, gain)
  std::vector<std::pair<int, std::size_t>>* cover_log;

  int build(std::vector<std::size_t> rows, int depth) {
    SplitCandidate split;
    if (depth < params.max_depth)
      split = best_split(x, gradients, rows, params.min_leaf);
    int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (!split.valid() || split.gain <= 0) {
      double num = 0, den = 0;
      for (std::size_t r : rows) {
        num += gradients[r];
        den += hessians[r];
      }
      tree.nodes[static_cast<std::size_t>(index)].value =
          den > 0 ? num / den : 0.0;
      return index;
    }
    if (split_log) split_log->emplace_back(split.feature, split.gain);
    if (cover_log) cover_log->emplace_back(split.feature, rows.size());
    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (x.at(r, static_cast<std::size_t>(split.feature)) < split.threshold
           ? left
           : right)
          .push_back(r);
    int li = build(std::move(left), depth + 1);
    int ri = build(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = li;
    node.right = ri;
    return index;
  }
};

}  // namespace detail

// Standard gradient boosting with exact greedy splits. Squared-error leaves
// hold the mean residual; logistic leaves hold a Newton step. The learning
// rate is applied once, at prediction time, over the summed tree outputs.
inline GbtModel train_gbt(const Matrix& x, const std::vector<double>& y,
                          const GbtParams& params,
                          Objective objective = Objective::squared_error,
                          std::vector<std::string> schema = {}) {
  const std::size_t n = x.rows;
  if (n == 0 || y.size() != n)
    throw DataError("train_gbt: empty data or label size mismatch");
  if (params.rounds < 1) throw DataError("train_gbt: rounds < 1");
  if (params.max_depth < 0 || params.min_leaf < 1 ||
      params.learning_rate <= 0 || params.learning_rate > 1)
    throw ContractError("train_gbt: bad hyperparameters");

  GbtModel model;
  model.objective = objective;
  model.learning_rate = params.learning_rate;
  if (schema.empty()) {
    for (std::size_t j = 0; j < x.cols; ++j)
      model.schema.push_back("f" + std::to_string(j));
  } else {
    if (schema.size() != x.cols)
      throw ContractError("train_gbt: schema size mismatch");
    model.schema = std::move(schema);
  }

  double mean_y = 0;
  for (double v : y) mean_y += v;
  mean_y /= n;
  if (objective == Objective::logistic) {
    double p = std::clamp(mean_y, 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(p / (1.0 - p));
  } else {
    model.base_score = mean_y;
  }

  std::vector<double> f(n, model.base_score);
  std::vector<double> gradients(n), hessians(n);
  std::vector<std::size_t> all_rows(n);
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;

  for (int round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      if (objective == Objective::logistic) {
        double p = sigmoid(f[i]);
        gradients[i] = y[i] - p;
        hessians[i] = std::max(p * (1.0 - p), 1e-12);
      } else {
        gradients[i] = y[i] - f[i];
        hessians[i] = 1.0;
      }
    }
    std::vector<std::pair<int, double>> split_log;
    std::vector<std::pair<int, std::size_t>> cover_log;
    detail::TreeBuilder builder{x,      gradients, hessians,  params,
                                {},     &split_log, &cover_log};
    builder.build(all_rows, 0);
    for (const auto& [feature, g] : split_log)
      model.gain[model.schema[static_cast<std::size_t>(feature)]] += g;
    for (const auto& [feature, c] : cover_log)
      model.cover[model.schema[static_cast<std::size_t>(feature)]] +=
          static_cast<double>(c);
    for (std::size_t i = 0; i < n; ++i)
      f[i] += params.learning_rate * builder.tree.predict(x.row(i));
    model.trees.push_back(std::move(builder.tree));
  }
  return model;
}

// Mean training loss after each boosting round (index 0 = base score only).
inline std::vector<double> training_loss_curve(const GbtModel& model,
                                               const Matrix& x,
                                               const std::vector<double>& y) {
  std::vector<double> f(x.rows, model.base_score);
  std::vector<double> losses;
  auto loss_now = [&] {
    double loss = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      if (model.objective == Objective::logistic) {
        double m = y[i] != 0 ? f[i] : -f[i];
        loss += m > 0 ? std::log1p(std::exp(-m))
                      : -m + std::log1p(std::exp(m));
      } else {
        double e = y[i] - f[i];
        loss += e * e;
      }
    }
    return loss / x.rows;
  };
  losses.push_back(loss_now());
  for (const auto& tree : model.trees) {
    for (std::size_t i = 0; i < x.rows; ++i)
      f[i] += model.learning_rate * tree.predict(x.row(i));
    losses.push_back(loss_now());
  }
  return losses;
}

struct FeatureImportance {
  std::string feature;
  double gain = 0;
  double cover = 0;  // normalized to fractions summing to 1
};

// Features that never split are omitted; output is sorted by gain
// descending, ties by name.
inline std::vector<FeatureImportance> feature_importance(
    const GbtModel& model) {
  double total_cover = 0;
  for (const auto& [name, c] : model.cover) total_cover += c;
  std::vector<FeatureImportance> out;
  for (const auto& [name, g] : model.gain) {
    FeatureImportance fi;
    fi.feature = name;
    fi.gain = g;
    auto it = model.cover.find(name);
    fi.cover = (it != model.cover.end() && total_cover > 0)
                   ? it->second / total_cover
                   : 0.0;
    out.push_back(fi);
  }
  std::sort(out.begin(), out.end(),
            [](const FeatureImportance& a, const FeatureImportance& b) {
              if (a.gain != b.gain) return a.gain > b.gain;
              return a.feature < b.feature;
            });
  return out;
}

// Scores and orders images by descending model score; equal scores fall
// back to ascending image id so the order is reproducible.
inline std::vector<std::pair<std::string, double>> rank(
    const GbtModel& model,
    const std::vector<std::pair<std::string, FeatureVector>>& images) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(images.size());
  for (const auto& [id, fv] : images) {
    if (fv.names != model.schema)
      throw ContractError("rank: feature schema does not match model");
    out.emplace_back(id, model.predict_raw(fv.values));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

inline void save_gbt(const GbtModel& model, const std::filesystem::path& path) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      if (n.is_leaf())
        nodes.push_back({{"value", n.value}});
      else
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
    }
    trees.push_back({{"nodes", nodes}});
  }
  nlohmann::json j{{"format_version", 1},
                   {"kind", "gbt"},
                   {"schema", model.schema},
                   {"objective", to_string(model.objective)},
                   {"base_score", model.base_score},
                   {"learning_rate", model.learning_rate},
                   {"trees", trees},
                   {"importance",
                    {{"gain", model.gain}, {"cover", model.cover}}}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline GbtModel load_gbt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad model file " + path.string() + ": " + e.what());
  }
  if (j.value("kind", "") != "gbt")
    throw DataError(path.string() + " is not a GBT model file");
  GbtModel m;
  m.schema = j.at("schema").get<std::vector<std::string>>();
  std::string obj = j.at("objective").get<std::string>();
  if (obj == "squared_error")
    m.objective = Objective::squared_error;
  else if (obj == "logistic")
    m.objective = Objective::logistic;
  else
    throw DataError("unknown objective in " + path.string() + ": " + obj);
  m.base_score = j.at("base_score").get<double>();
  m.learning_rate = j.at("learning_rate").get<double>();
  for (const auto& tj : j.at("trees")) {
    RegressionTree tree;
    for (const auto& nj : tj.at("nodes")) {
      TreeNode n;
      if (nj.contains("value")) {
        n.value = nj.at("value").get<double>();
      } else {
        n.feature = nj.at("feature").get<int>();
        n.threshold = nj.at("threshold").get<double>();
        n.left = nj.at("left").get<int>();
        n.right = nj.at("right").get<int>();
        if (n.feature < 0 ||
            n.feature >= static_cast<int>(m.schema.size()))
          throw DataError("split references invalid feature index in " +
                          path.string());
      }
      tree.nodes.push_back(n);
    }
    m.trees.push_back(std::move(tree));
  }
  if (j.contains("importance")) {
    m.gain = j.at("importance")
                 .at("gain")
                 .get<std::map<std::string, double>>();
    m.cover = j.at("importance")
                  .at("cover")
                  .get<std::map<std::string, double>>();
  }
  return m;
}

}  // namespace newsrank
