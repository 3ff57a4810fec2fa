#pragma once

#include <cstdint>
#include <vector>

#include "cpd/errors.hpp"

namespace cpd {

using index_t = std::int64_t;

// Dimensions I_1 x ... x I_N of a dense N-way array, N >= 1, every I_n >= 1.
// Caches the prefix products J_n = I_1*...*I_n used throughout; K_n denotes
// the complementary suffix product I_{n+1}*...*I_N, so J_n * K_n = J_N.
class Shape {
public:
  explicit Shape(std::vector<index_t> dims);

  int order() const { return static_cast<int>(dims_.size()); }

  // 1-based mode access.
  index_t dim(int n) const;
  const std::vector<index_t>& dims() const { return dims_; }

  index_t num_entries() const { return prefix_.back(); }

  // J_n for n in 0..N with J_0 = 1.
  index_t j_prefix(int n) const;
  // K_n for n in 0..N with K_N = 1 and K_0 = J_N.
  index_t k_suffix(int n) const { return num_entries() / j_prefix(n); }
  // J_{-n} = J_N / I_n.
  index_t j_skip(int n) const { return num_entries() / dim(n); }

  bool ascending() const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }
  bool operator!=(const Shape& other) const { return !(*this == other); }

private:
  std::vector<index_t> dims_;
  std::vector<index_t> prefix_; // prefix_[n] = J_n, n = 0..N
};

// 1-based linearization i = i_1 + sum_{n=2}^N (i_n - 1) * J_{n-1}, the
// first index running fastest. multi_index is its inverse.
index_t linear_index(const std::vector<index_t>& multi, const Shape& shape);
std::vector<index_t> multi_index(index_t linear, const Shape& shape);

} // namespace cpd
