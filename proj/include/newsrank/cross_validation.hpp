#pragma once

#include <functional>
#include <map>
#include <vector>

#include "newsrank/dataset.hpp"
#include "newsrank/error.hpp"
#include "newsrank/metrics.hpp"

namespace newsrank {

// Stratified fold assignment: members of each class are shuffled, then
// dealt round-robin with a counter that keeps running across classes, so
// fold sizes stay as even as possible. Deterministic given the seed.
inline std::vector<int> stratified_folds(const std::vector<int>& y, int folds,
                                         std::uint64_t seed) {
  if (folds < 2) throw ContractError("stratified_folds: folds < 2");
  if (static_cast<std::size_t>(folds) > y.size())
    throw ContractError("stratified_folds: more folds than examples");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  Rng rng(seed);
  std::vector<int> fold(y.size(), 0);
  int counter = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(members);
    for (std::size_t m : members) fold[m] = counter++ % folds;
  }
  return fold;
}

struct CvReport {
  std::vector<ClassificationMetrics> per_fold;
  ClassificationMetrics mean;
};

// Trainer maps a training design matrix + labels to a probability
// predictor for single rows.
using ProbabilityTrainer =
    std::function<std::function<double(std::span<const double>)>(
        const Matrix&, const std::vector<int>&)>;

inline CvReport cross_validate(const Matrix& x, const std::vector<int>& y,
                               int folds, std::uint64_t seed,
                               const ProbabilityTrainer& trainer) {
  std::vector<int> assignment = stratified_folds(y, folds, seed);
  CvReport report;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < y.size(); ++i)
      (assignment[i] == f ? test_rows : train_rows).push_back(i);
    Matrix xt(train_rows.size(), x.cols);
    std::vector<int> yt(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      yt[i] = y[train_rows[i]];
      for (std::size_t j = 0; j < x.cols; ++j)
        xt.at(i, j) = x.at(train_rows[i], j);
    }
    auto predictor = trainer(xt, yt);
    std::vector<int> predictions, truth;
    for (std::size_t i : test_rows) {
      predictions.push_back(predictor(x.row(i)) > 0.5 ? 1 : 0);
      truth.push_back(y[i]);
    }
    report.per_fold.push_back(classification_metrics(predictions, truth));
  }
  auto& m = report.mean;
  for (const auto& fm : report.per_fold) {
    m.precision += fm.precision;
    m.recall += fm.recall;
    m.accuracy += fm.accuracy;
    m.f_measure += fm.f_measure;
  }
  double k = static_cast<double>(report.per_fold.size());
  m.precision /= k;
  m.recall /= k;
  m.accuracy /= k;
  m.f_measure /= k;
  return report;
}

}  // namespace newsrank
