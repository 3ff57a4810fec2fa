#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "cpd/dense_tensor.hpp"
#include "cpd/kron.hpp"
#include "cpd/rng.hpp"
#include "cpd/shape.hpp"

namespace cpd::testing {

// 2x2x2 tensor with values 1..8 in vec order.
inline DenseTensor t8() {
  return DenseTensor(Shape({2, 2, 2}), {1, 2, 3, 4, 5, 6, 7, 8});
}

inline DenseTensor random_tensor(const std::vector<index_t>& dims,
                                 std::uint64_t seed) {
  Shape shape(dims);
  Uniform01 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(shape.num_entries()));
  for (double& x : v) x = rng.next();
  return DenseTensor(std::move(shape), std::move(v));
}

inline FactorList random_factors(const std::vector<index_t>& dims, index_t rank,
                                 std::uint64_t seed) {
  Uniform01 rng(seed);
  FactorList f;
  for (index_t d : dims) {
    Eigen::MatrixXd a(d, rank);
    for (index_t c = 0; c < rank; ++c)
      for (index_t i = 0; i < d; ++i) a(i, c) = rng.next();
    f.push_back(std::move(a));
  }
  return f;
}

// Entrywise sum over all indices, the independent reference for mttkrp.
inline Eigen::MatrixXd brute_mttkrp(const DenseTensor& y, const FactorList& f,
                                    int n) {
  const Shape& s = y.shape();
  const index_t rank = f[0].cols();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.dim(n), rank);
  for (index_t lin = 1; lin <= s.num_entries(); ++lin) {
    const std::vector<index_t> mi = multi_index(lin, s);
    const double v = y.at_linear(lin);
    for (index_t r = 0; r < rank; ++r) {
      double prod = 1.0;
      for (int k = 1; k <= s.order(); ++k)
        if (k != n) prod *= f[static_cast<std::size_t>(k - 1)](mi[static_cast<std::size_t>(k - 1)] - 1, r);
      g(mi[static_cast<std::size_t>(n - 1)] - 1, r) += v * prod;
    }
  }
  return g;
}

// Unfolding straight from the definition: rows index `row_modes`, columns
// index `col_modes`, both linearized first-listed-mode fastest.
inline Eigen::MatrixXd brute_unfold(const DenseTensor& y,
                                    const std::vector<int>& row_modes,
                                    const std::vector<int>& col_modes) {
  const Shape& s = y.shape();
  std::vector<index_t> row_dims, col_dims;
  for (int m : row_modes) row_dims.push_back(s.dim(m));
  for (int m : col_modes) col_dims.push_back(s.dim(m));
  const Shape rs(row_dims.empty() ? std::vector<index_t>{1} : row_dims);
  const Shape cs(col_dims.empty() ? std::vector<index_t>{1} : col_dims);
  Eigen::MatrixXd out(rs.num_entries(), cs.num_entries());
  for (index_t lin = 1; lin <= s.num_entries(); ++lin) {
    const std::vector<index_t> mi = multi_index(lin, s);
    std::vector<index_t> ri, ci;
    for (int m : row_modes) ri.push_back(mi[static_cast<std::size_t>(m - 1)]);
    for (int m : col_modes) ci.push_back(mi[static_cast<std::size_t>(m - 1)]);
    const index_t rlin = ri.empty() ? 1 : linear_index(ri, rs);
    const index_t clin = ci.empty() ? 1 : linear_index(ci, cs);
    out(rlin - 1, clin - 1) = y.at_linear(lin);
  }
  return out;
}

inline double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1e-30});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

} // namespace cpd::testing
