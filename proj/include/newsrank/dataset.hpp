#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "newsrank/error.hpp"
#include "newsrank/feature_vector.hpp"

namespace newsrank {

// Dense row-major design matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span(data).subspan(r * cols, cols);
  }
};

// Stacks feature vectors sharing one schema into a design matrix.
inline Matrix to_matrix(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) return Matrix{};
  Matrix m(rows.size(), rows.front().values.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].schema_id != rows.front().schema_id ||
        rows[r].values.size() != m.cols)
      throw ContractError("to_matrix: mixed feature schemas");
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r].values[c];
  }
  return m;
}

// Deterministic pseudo-random stream for anything the pipeline shuffles.
// All randomness in a run flows from one seed.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {  // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  // Uniform integer in [lo, hi].
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(
                    below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }  // [0,1)

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

private:
  std::uint64_t state_;
};

}  // namespace newsrank
