#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsrank/dataset.hpp"
#include "newsrank/error.hpp"

namespace newsrank {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// L1-regularized logistic regression over internally standardized features.
// The objective is mean logistic loss + lambda * ||w||_1 with the bias
// unpenalized.
struct LogisticModel {
  std::vector<std::string> schema;
  std::vector<double> weights;
  double bias = 0;
  double lambda = 0;
  std::vector<double> mean;
  std::vector<double> stddev;  // constant features carry stddev 1, weight 0

  double predict_raw(std::span<const double> x) const {
    if (x.size() != weights.size())
      throw ContractError("LogisticModel: feature count mismatch");
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j)
      z += weights[j] * (x[j] - mean[j]) / stddev[j];
    return z;
  }
  double predict_proba(std::span<const double> x) const {
    return sigmoid(predict_raw(x));
  }
};

// Mean logistic loss and its gradient in (weights, bias), without the L1
// term. X must already be standardized. Exposed so tests can check the
// analytic gradient against finite differences.
inline double logistic_loss_and_gradient(const Matrix& x,
                                         const std::vector<int>& y,
                                         const std::vector<double>& w,
                                         double bias,
                                         std::vector<double>* grad_w,
                                         double* grad_b) {
  const std::size_t n = x.rows;
  if (grad_w) grad_w->assign(x.cols, 0.0);
  if (grad_b) *grad_b = 0;
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    for (std::size_t j = 0; j < x.cols; ++j) z += w[j] * x.at(i, j);
    // log(1 + exp(-m)) with m = z for y=1, -z for y=0, computed stably
    double m = y[i] ? z : -z;
    loss += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    double residual = sigmoid(z) - y[i];
    if (grad_w)
      for (std::size_t j = 0; j < x.cols; ++j)
        (*grad_w)[j] += residual * x.at(i, j);
    if (grad_b) *grad_b += residual;
  }
  loss /= n;
  if (grad_w)
    for (double& g : *grad_w) g /= n;
  if (grad_b) *grad_b /= n;
  return loss;
}

// Cyclic coordinate descent with soft thresholding. Each coordinate takes a
// proximal step with the curvature bound 1/4 (valid for standardized
// features), which keeps the objective non-increasing.
inline LogisticModel train_logistic(const Matrix& x, const std::vector<int>& y,
                                    double lambda, int max_iters = 1000,
                                    double tol = 1e-8,
                                    std::vector<std::string> schema = {}) {
  const std::size_t n = x.rows, d = x.cols;
  if (n == 0 || y.size() != n)
    throw ContractError("train_logistic: empty data or label size mismatch");
  if (lambda < 0) throw ContractError("train_logistic: negative lambda");
  long long positives = 0;
  for (int v : y) positives += (v != 0);
  if (positives < 2 || static_cast<long long>(n) - positives < 2)
    throw DataError("train_logistic: need at least 2 examples of each class");

  LogisticModel model;
  model.lambda = lambda;
  model.schema = schema.empty() ? std::vector<std::string>(d, "") : std::move(schema);
  if (model.schema.size() != d)
    throw ContractError("train_logistic: schema size mismatch");
  model.mean.assign(d, 0.0);
  model.stddev.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x.at(i, j);
    model.mean[j] = s / n;
    double v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double c = x.at(i, j) - model.mean[j];
      v += c * c;
    }
    double sd = std::sqrt(v / n);
    model.stddev[j] = sd > 0 ? sd : 1.0;
  }

  Matrix xs(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      xs.at(i, j) = (x.at(i, j) - model.mean[j]) / model.stddev[j];

  // Per-column second-moment bounds: h_j = (1/4n) sum x_ij^2.
  std::vector<double> h(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s2 = 0;
    for (std::size_t i = 0; i < n; ++i) s2 += xs.at(i, j) * xs.at(i, j);
    h[j] = std::max(0.25 * s2 / n, 1e-12);
  }

  model.weights.assign(d, 0.0);
  double base_rate = static_cast<double>(positives) / n;
  model.bias = std::log(base_rate / (1.0 - base_rate));

  std::vector<double> z(n, model.bias);  // cached linear responses
  auto soft = [](double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    double max_delta = 0;
    for (std::size_t j = 0; j < d; ++j) {
      double g = 0;
      for (std::size_t i = 0; i < n; ++i)
        g += (sigmoid(z[i]) - y[i]) * xs.at(i, j);
      g /= n;
      double wj = model.weights[j];
      double w_new = soft(wj - g / h[j], lambda / h[j]);
      if (w_new != wj) {
        double delta = w_new - wj;
        for (std::size_t i = 0; i < n; ++i) z[i] += delta * xs.at(i, j);
        model.weights[j] = w_new;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    double gb = 0;
    for (std::size_t i = 0; i < n; ++i) gb += sigmoid(z[i]) - y[i];
    gb /= n;
    double db = -4.0 * gb;  // curvature bound 1/4 on the bias too
    if (db != 0) {
      for (double& zi : z) zi += db;
      model.bias += db;
      max_delta = std::max(max_delta, std::abs(db));
    }
    if (max_delta < tol) break;
  }
  return model;
}

inline void save_logistic(const LogisticModel& model,
                          const std::filesystem::path& path) {
  nlohmann::json j{{"format_version", 1}, {"kind", "logistic"},
                   {"schema", model.schema}, {"lambda", model.lambda},
                   {"bias", model.bias},    {"weights", model.weights},
                   {"mean", model.mean},    {"stddev", model.stddev}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline LogisticModel load_logistic(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad model file " + path.string() + ": " + e.what());
  }
  if (j.value("kind", "") != "logistic")
    throw DataError(path.string() + " is not a logistic model file");
  LogisticModel m;
  m.schema = j.at("schema").get<std::vector<std::string>>();
  m.lambda = j.at("lambda").get<double>();
  m.bias = j.at("bias").get<double>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.mean = j.at("mean").get<std::vector<double>>();
  m.stddev = j.at("stddev").get<std::vector<double>>();
  return m;
}

}  // namespace newsrank
