#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "cpd/cost_counter.hpp"
#include "cpd/dense_tensor.hpp"
#include "cpd/kron.hpp"

namespace cpd {

// M^(n) = Y_(n) (kr_{k != n} A^(k)), computed the direct way: permute the
// tensor to [n, 1..n-1, n+1..N], reshape to I_n x J_N/I_n, multiply by the
// skip-mode Khatri-Rao matrix. Charges R*J_N for the product plus the
// skip_kron_column build cost per column.
Eigen::MatrixXd mttkrp_direct(const DenseTensor& y, const FactorList& factors,
                              int n, CostCounter* counter = nullptr);

// n* = max{ n : J_n <= K_n } (ties resolve to the larger n). With ascending
// dims and N >= 2 the set is never empty. Requires N >= 2.
int select_pivot(const Shape& shape);

// Stable ascending reorder of modes. perm maps sorted position -> original
// mode, inverse maps original mode -> sorted position (both 1-based). The
// tensor copy is skipped when the permutation is the identity.
struct SortResult {
  DenseTensor tensor;
  FactorList factors;
  std::vector<int> perm;
  std::vector<int> inverse;
};
SortResult sort_modes(const DenseTensor& y, const FactorList& factors);

// Working storage of the all-mode gradient sweep: stacked projected tensors,
// column r holding vec(R^(r,n)) (right) or vec(L^(r,n)) (left).
struct ProjectionCache {
  Eigen::MatrixXd right; // J_n x R while the right phase sits at mode n
  Eigen::MatrixXd left;  // K_{n-1} x R while the left phase sits at mode n
};

struct FastStats {
  // High-water mark of doubles held in caches and scratch, outputs excluded.
  std::int64_t peak_workspace_doubles = 0;
};

// Invoked right after mode n's gradient is ready; may overwrite factors[n-1]
// of the caller's list, which the sweep re-reads before moving on.
using ModeHook = std::function<void(int n, const Eigen::MatrixXd& gradient)>;

// All-mode CP gradients G^(n) = Y_(n) (kr_{k != n} A^(k)) via the two-sided
// projection recursions: modes are visited n*, n*-1, ..., 1, n*+1, ..., N
// (in the ascending-sorted frame); right projections seed at the pivot with
// one J_n* x K_n* product, left projections seed at n*+1 with another, and
// neighbouring modes reuse them through rank-one contractions. Auxiliary
// storage stays within O(R max(J_n*, K_n*)). Requires N >= 2.
std::vector<Eigen::MatrixXd> cp_gradient_all(const DenseTensor& y,
                                             FactorList& factors,
                                             CostCounter* counter,
                                             const ModeHook& hook,
                                             FastStats* stats);

// Hook-free form.
std::vector<Eigen::MatrixXd> cp_gradient_all(const DenseTensor& y,
                                             const FactorList& factors,
                                             CostCounter* counter = nullptr,
                                             FastStats* stats = nullptr);

// Original-mode order in which cp_gradient_all visits (and a hook updates)
// the factors.
std::vector<int> fast_update_order(const Shape& shape);

enum class CountVariant {
  direct,       // unfold + multiply, per mode
  fast,         // two-sided recursion, compressed closed form
  fast_derived, // same, with the n > n*+1 trailing sum scaled by 1/J_n
};

// Analytic multiplication count for one mode. Requires ascending dims.
// The `fast` closed form keeps the n > n*+1 trailing sum unscaled; the
// recursion's actual work carries a 1/J_n on it, which `fast_derived`
// restores. See also fast_count_realized.
std::uint64_t predicted_mult_count(const Shape& shape, index_t R, int n,
                                   CountVariant variant);

// Exact multiplication count of this implementation's cp_gradient_all for
// mode n (ascending dims): what the instrumented counter reports. Differs
// from the table form only where the table's compressed sums drop or add a
// degenerate-edge term; each case is spelled out in the implementation.
std::uint64_t fast_count_realized(const Shape& shape, index_t R, int n);

} // namespace cpd
