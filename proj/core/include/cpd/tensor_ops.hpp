#pragma once

#include <vector>

#include <Eigen/Core>

#include "cpd/dense_tensor.hpp"

namespace cpd {

// Layout-preserving reinterpretation: same value sequence, new dimensions.
// Entry counts must agree. Shares the buffer with t (no copy).
DenseTensor reshape(const DenseTensor& t, std::vector<index_t> new_dims);

// Z(j_1,...,j_N) = Y(i_1,...,i_N) with j_k = i_{perm[k]}; perm is 1-based.
DenseTensor permute(const DenseTensor& t, const std::vector<int>& perm);

// Zero-copy view of the prefix unfolding Y_(1:n) of size J_n x K_n.
Eigen::Map<const Eigen::MatrixXd> unfold_prefix(const DenseTensor& t, int n);

// General unfolding Y_(r x c): row_modes and col_modes partition 1..N; the
// row index is ivec over row_modes, likewise for columns.
Eigen::MatrixXd unfold(const DenseTensor& t, const std::vector<int>& row_modes,
                       const std::vector<int>& col_modes);

// Mode-n unfolding Y_(n) of size I_n x J_N/I_n; columns enumerate the
// remaining modes in ascending order, first of them fastest.
Eigen::MatrixXd unfold_mode(const DenseTensor& t, int n);

// Tensor-times-vector over mode n: vec(Z) = Y_(n)^T v, an (N-1)-way result.
// Contracting the last remaining mode yields a one-entry tensor of shape [1].
DenseTensor ttv(const DenseTensor& t, const Eigen::VectorXd& v, int n);

// Contract several distinct modes; the result is independent of order.
DenseTensor ttv_multi(const DenseTensor& t, const std::vector<Eigen::VectorXd>& vs,
                      const std::vector<int>& modes);

} // namespace cpd
