#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "newsrank/error.hpp"

namespace newsrank {

// A system ranking with binary relevance judgments. total_relevant counts
// the relevant items in the whole judged pool, which may exceed what the
// list contains.
struct RankedJudgments {
  std::vector<std::pair<std::string, bool>> items;  // best first
  long long total_relevant = 0;
};

// Items beyond the end of a short list count as irrelevant.
inline double precision_at_k(const RankedJudgments& ranking, int k) {
  if (k <= 0) throw ContractError("precision_at_k: k must be positive");
  long long hits = 0;
  for (std::size_t i = 0; i < ranking.items.size() &&
                          i < static_cast<std::size_t>(k); ++i)
    hits += ranking.items[i].second;
  return static_cast<double>(hits) / k;
}

// Binary-gain nDCG with the log2(i+1) discount; an empty ideal ranking
// pins the value to 0.
inline double ndcg_at_k(const RankedJudgments& ranking, int k) {
  if (k <= 0) throw ContractError("ndcg_at_k: k must be positive");
  double dcg = 0;
  for (std::size_t i = 0; i < ranking.items.size() &&
                          i < static_cast<std::size_t>(k); ++i)
    if (ranking.items[i].second) dcg += 1.0 / std::log2(i + 2.0);
  double idcg = 0;
  long long ideal = std::min<long long>(ranking.total_relevant, k);
  for (long long i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(i + 2.0);
  return idcg == 0 ? 0.0 : dcg / idcg;
}

// Average precision: precision at each relevant rank, summed, divided by
// the total judged relevant.
inline double average_precision(const RankedJudgments& ranking) {
  if (ranking.total_relevant <= 0) return 0;
  double sum = 0;
  long long seen = 0;
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    if (!ranking.items[i].second) continue;
    ++seen;
    sum += static_cast<double>(seen) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(ranking.total_relevant);
}

inline double mean_average_precision(
    const std::vector<RankedJudgments>& rankings) {
  if (rankings.empty()) return 0;
  double sum = 0;
  for (const auto& r : rankings) sum += average_precision(r);
  return sum / rankings.size();
}

// One (recall, precision) point per rank where a relevant item appears.
inline std::vector<std::pair<double, double>> precision_recall_curve(
    const RankedJudgments& ranking) {
  std::vector<std::pair<double, double>> curve;
  if (ranking.total_relevant <= 0) return curve;
  long long seen = 0;
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    if (!ranking.items[i].second) continue;
    ++seen;
    curve.emplace_back(
        static_cast<double>(seen) / static_cast<double>(ranking.total_relevant),
        static_cast<double>(seen) / static_cast<double>(i + 1));
  }
  return curve;
}

struct ClassificationMetrics {
  double precision = 0;
  double recall = 0;
  double accuracy = 0;
  double f_measure = 0;
  bool precision_defined = true;  // false when no positive predictions
  bool recall_defined = true;    // false when no positive labels
};

// Standard binary metrics with class 1 (news quality) as positive.
// Zero-division cases yield 0 and clear the corresponding flag.
inline ClassificationMetrics classification_metrics(
    const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw ContractError("classification_metrics: size mismatch");
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    bool p = predictions[i] != 0, l = labels[i] != 0;
    if (p && l) ++tp;
    else if (p && !l) ++fp;
    else if (!p && l) ++fn;
    else ++tn;
  }
  ClassificationMetrics m;
  if (tp + fp > 0)
    m.precision = static_cast<double>(tp) / (tp + fp);
  else
    m.precision_defined = false;
  if (tp + fn > 0)
    m.recall = static_cast<double>(tp) / (tp + fn);
  else
    m.recall_defined = false;
  m.accuracy = predictions.empty()
                   ? 0.0
                   : static_cast<double>(tp + tn) / predictions.size();
  m.f_measure = (m.precision + m.recall > 0)
                    ? 2 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
  return m;
}

}  // namespace newsrank
