#pragma once

#include <vector>

#include <Eigen/Core>

#include "cpd/cost_counter.hpp"
#include "cpd/shape.hpp"

namespace cpd {

// Mode-n factor of a Kruskal model, I_n x R.
using FactorMatrix = Eigen::MatrixXd;
using FactorList = std::vector<FactorMatrix>;

// kron(a, b) stacks a[1]*b, a[2]*b, ...: the entry at position
// (i_a - 1)*|b| + i_b equals a[i_a] * b[i_b], so b's index runs fastest.
Eigen::VectorXd kron_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Accumulated Kronecker product of column r (1-based) of the factors for
// modes lo..hi ascending, later modes outermost:
//   t = a_r^(hi) kron ... kron a_r^(lo).
// Empty range yields the scalar vector [1]. The counter, if given, is
// charged |t|*|a| per fold beyond the first vector (the build-up scheme of
// the gradient recursions), i.e. a range of m vectors costs the sizes of the
// m-1 intermediate products.
Eigen::VectorXd kron_range_column(const FactorList& factors, int lo, int hi,
                                  index_t r, CostCounter* counter = nullptr);

// Column r (1-based) of the skip-mode Khatri-Rao product, i.e.
// kron_{k != n, descending} a_r^(k), length J_N / I_n. The charge follows
// the accumulation scheme: sum_{k=2}^{n-1} J_k + (1/I_n) sum_{k=n+1}^{N} J_k.
Eigen::VectorXd skip_kron_column(const FactorList& factors, int n, index_t r,
                                 CostCounter* counter = nullptr);

// Column-wise Kronecker product: column r is kron(x_r, y_r), size pq x R.
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// A^(N) kr ... kr A^(n+1) kr A^(n-1) kr ... kr A^(1), size (J_N/I_n) x R.
Eigen::MatrixXd khatri_rao_skip(const FactorList& factors, int n);

// Elementwise product of two equally sized matrices.
Eigen::MatrixXd hadamard(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// Hadamard product over k != n of the R x R Gram matrices A^(k)^T A^(k).
Eigen::MatrixXd gram_hadamard_skip(const FactorList& factors, int n);

// Shape implied by factor row counts; validates rank consistency.
Shape factor_shape(const FactorList& factors);
index_t factor_rank(const FactorList& factors);

} // namespace cpd
