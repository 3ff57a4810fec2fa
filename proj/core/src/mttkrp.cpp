#include "cpd/mttkrp.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/tensor_ops.hpp"

namespace cpd {
namespace {

void check_factors_match(const DenseTensor& y, const FactorList& factors,
                         const char* who) {
  if (factor_shape(factors) != y.shape())
    throw ShapeError(std::string(who) + ": factor row counts do not match the tensor");
}

// sum_{k=lo}^{hi} J_k / div; every term is integral for the divisors used.
std::uint64_t sum_j_prefix(const Shape& s, int lo, int hi, index_t div = 1) {
  std::uint64_t total = 0;
  for (int k = std::max(lo, 0); k <= hi; ++k)
    total += static_cast<std::uint64_t>(s.j_prefix(k) / div);
  return total;
}

} // namespace

Eigen::MatrixXd mttkrp_direct(const DenseTensor& y, const FactorList& factors,
                              int n, CostCounter* counter) {
  const int N = y.order();
  if (n < 1 || n > N)
    throw IndexError("mttkrp_direct: mode " + std::to_string(n) + " outside 1.." +
                     std::to_string(N));
  check_factors_match(y, factors, "mttkrp_direct");
  const index_t R = factor_rank(factors);
  const index_t In = y.shape().dim(n);
  const index_t Jskip = y.shape().j_skip(n);

  // Bring mode n to the front, then the mode-n unfolding is a plain reshape.
  std::vector<int> perm;
  perm.reserve(static_cast<std::size_t>(N));
  perm.push_back(n);
  for (int m = 1; m <= N; ++m)
    if (m != n) perm.push_back(m);
  const DenseTensor yp = (n == 1) ? y : permute(y, perm);

  Eigen::MatrixXd KR(Jskip, R);
  for (index_t r = 1; r <= R; ++r)
    KR.col(r - 1) = skip_kron_column(factors, n, r, counter);

  if (counter) counter->charge_gemm(In, Jskip, R);
  return yp.matrix_view(In, Jskip) * KR;
}

int select_pivot(const Shape& shape) {
  if (shape.order() < 2)
    throw ArgumentError("select_pivot: need an order-2 or higher shape");
  int pivot = 0;
  for (int n = 1; n <= shape.order(); ++n)
    if (shape.j_prefix(n) <= shape.k_suffix(n)) pivot = n;
  if (pivot == 0)
    throw ShapeError("select_pivot: no mode satisfies J_n <= K_n; sort modes first");
  return pivot;
}

SortResult sort_modes(const DenseTensor& y, const FactorList& factors) {
  check_factors_match(y, factors, "sort_modes");
  const int N = y.order();
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 1);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return y.shape().dim(a) < y.shape().dim(b);
  });

  std::vector<int> inverse(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j)
    inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(j - 1)] - 1)] = j;

  bool identity = true;
  for (int j = 1; j <= N; ++j) identity &= (perm[static_cast<std::size_t>(j - 1)] == j);

  FactorList sorted_factors;
  sorted_factors.reserve(factors.size());
  for (int j = 1; j <= N; ++j)
    sorted_factors.push_back(factors[static_cast<std::size_t>(perm[static_cast<std::size_t>(j - 1)] - 1)]);

  return SortResult{identity ? y : permute(y, perm), std::move(sorted_factors),
                    std::move(perm), std::move(inverse)};
}

std::vector<int> fast_update_order(const Shape& shape) {
  const int N = shape.order();
  if (N < 2)
    throw ArgumentError("fast_update_order: need an order-2 or higher shape");
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 1);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return shape.dim(a) < shape.dim(b); });
  std::vector<index_t> sorted_dims;
  sorted_dims.reserve(static_cast<std::size_t>(N));
  for (int j = 1; j <= N; ++j)
    sorted_dims.push_back(shape.dim(perm[static_cast<std::size_t>(j - 1)]));
  const int p = select_pivot(Shape(std::move(sorted_dims)));

  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(N));
  for (int j = p; j >= 1; --j) order.push_back(perm[static_cast<std::size_t>(j - 1)]);
  for (int j = p + 1; j <= N; ++j) order.push_back(perm[static_cast<std::size_t>(j - 1)]);
  return order;
}

std::vector<Eigen::MatrixXd> cp_gradient_all(const DenseTensor& y,
                                             FactorList& factors,
                                             CostCounter* counter,
                                             const ModeHook& hook,
                                             FastStats* stats) {
  const int N = y.order();
  if (N < 2) throw ArgumentError("cp_gradient_all: need an order-2 or higher tensor");
  check_factors_match(y, factors, "cp_gradient_all");
  const index_t R = factor_rank(factors);

  SortResult s = sort_modes(y, factors);
  const Shape& shape = s.tensor.shape();
  const int p = select_pivot(shape);

  std::int64_t live = 0, peak = 0;
  auto track = [&](std::int64_t delta) {
    live += delta;
    if (live > peak) peak = live;
  };

  std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(N));
  auto emit = [&](int j, Eigen::MatrixXd G) {
    const int orig = s.perm[static_cast<std::size_t>(j - 1)];
    out[static_cast<std::size_t>(orig - 1)] = std::move(G);
    if (hook) {
      hook(orig, out[static_cast<std::size_t>(orig - 1)]);
      const auto& F = factors[static_cast<std::size_t>(orig - 1)];
      if (F.rows() != shape.dim(j) || F.cols() != R)
        throw ShapeError("cp_gradient_all: hook left factor of mode " +
                         std::to_string(orig) + " with the wrong size");
      s.factors[static_cast<std::size_t>(j - 1)] = F; // recursions read the update
    }
  };

  ProjectionCache cache;

  // Right phase: seed vec(R^(r,p)) = Y_(1:p) kron_{k>p} a_r^(k), then walk
  // down to mode 1, contracting one neighbouring factor per step.
  {
    const index_t Jp = shape.j_prefix(p), Kp = shape.k_suffix(p);
    Eigen::MatrixXd KR(Kp, R);
    track(Kp * R);
    for (index_t r = 1; r <= R; ++r)
      KR.col(r - 1) = kron_range_column(s.factors, p + 1, N, r, counter);
    cache.right.resize(Jp, R);
    track(Jp * R);
    if (counter) counter->charge_gemm(Jp, Kp, R);
    cache.right.noalias() = s.tensor.matrix_view(Jp, Kp) * KR;
    KR.resize(0, 0);
    track(-Kp * R);
  }

  Eigen::VectorXd scratch(std::max(shape.j_prefix(p - 1), index_t(1)));
  track(scratch.size());
  for (int j = p; j >= 1; --j) {
    if (j < p) {
      // vec(R^(r,j)) = reshape(R^(r,j+1), [J_j, I_{j+1}]) a_r^(j+1)
      const index_t Jj = shape.j_prefix(j), Inext = shape.dim(j + 1);
      for (index_t r = 1; r <= R; ++r) {
        Eigen::Map<const Eigen::MatrixXd> Z(cache.right.col(r - 1).data(), Jj, Inext);
        if (counter) counter->charge_gemm(Jj, Inext, 1);
        scratch.head(Jj).noalias() = Z * s.factors[static_cast<std::size_t>(j)].col(r - 1);
        cache.right.col(r - 1).head(Jj) = scratch.head(Jj);
      }
    }
    // g_r = reshape(R^(r,j), [J_{j-1}, I_j])^T (a_r^(j-1) kron ... kron a_r^(1))
    const index_t Jm1 = shape.j_prefix(j - 1), Ij = shape.dim(j);
    Eigen::MatrixXd G(Ij, R);
    for (index_t r = 1; r <= R; ++r) {
      const Eigen::VectorXd t = kron_range_column(s.factors, 1, j - 1, r, counter);
      track(t.size());
      Eigen::Map<const Eigen::MatrixXd> Z(cache.right.col(r - 1).data(), Jm1, Ij);
      if (counter) counter->charge_gemm(Ij, Jm1, 1);
      G.col(r - 1).noalias() = Z.transpose() * t;
      track(-t.size());
    }
    emit(j, std::move(G));
  }
  track(-scratch.size());
  track(-cache.right.size());
  cache.right.resize(0, 0);

  // Left phase: seed vec(L^(r,p+1)) = Y_(1:p)^T kron_{k<=p} a_r^(k), then walk
  // up to mode N, again one factor contraction per step.
  if (p + 1 <= N) {
    const index_t Jp = shape.j_prefix(p), Kp = shape.k_suffix(p);
    {
      Eigen::MatrixXd KR(Jp, R);
      track(Jp * R);
      for (index_t r = 1; r <= R; ++r)
        KR.col(r - 1) = kron_range_column(s.factors, 1, p, r, counter);
      cache.left.resize(Kp, R);
      track(Kp * R);
      if (counter) counter->charge_gemm(Kp, Jp, R);
      cache.left.noalias() = s.tensor.matrix_view(Jp, Kp).transpose() * KR;
      KR.resize(0, 0);
      track(-Jp * R);
    }

    scratch.resize(std::max(shape.k_suffix(p + 1), index_t(1)));
    track(scratch.size());
    for (int j = p + 1; j <= N; ++j) {
      if (j > p + 1) {
        // vec(L^(r,j)) = reshape(L^(r,j-1), [I_{j-1}, K_{j-1}])^T a_r^(j-1)
        const index_t Iprev = shape.dim(j - 1), Km1 = shape.k_suffix(j - 1);
        for (index_t r = 1; r <= R; ++r) {
          Eigen::Map<const Eigen::MatrixXd> Z(cache.left.col(r - 1).data(), Iprev, Km1);
          if (counter) counter->charge_gemm(Km1, Iprev, 1);
          scratch.head(Km1).noalias() =
              Z.transpose() * s.factors[static_cast<std::size_t>(j - 2)].col(r - 1);
          cache.left.col(r - 1).head(Km1) = scratch.head(Km1);
        }
      }
      // g_r = reshape(L^(r,j), [I_j, K_j]) (a_r^(N) kron ... kron a_r^(j+1))
      const index_t Ij = shape.dim(j), Kj = shape.k_suffix(j);
      Eigen::MatrixXd G(Ij, R);
      for (index_t r = 1; r <= R; ++r) {
        const Eigen::VectorXd t = kron_range_column(s.factors, j + 1, N, r, counter);
        track(t.size());
        Eigen::Map<const Eigen::MatrixXd> Z(cache.left.col(r - 1).data(), Ij, Kj);
        if (counter) counter->charge_gemm(Ij, Kj, 1);
        G.col(r - 1).noalias() = Z * t;
        track(-t.size());
      }
      emit(j, std::move(G));
    }
    track(-scratch.size());
    track(-cache.left.size());
  }

  if (stats) stats->peak_workspace_doubles = peak;
  return out;
}

std::vector<Eigen::MatrixXd> cp_gradient_all(const DenseTensor& y,
                                             const FactorList& factors,
                                             CostCounter* counter,
                                             FastStats* stats) {
  FactorList copy = factors;
  return cp_gradient_all(y, copy, counter, ModeHook{}, stats);
}

std::uint64_t predicted_mult_count(const Shape& shape, index_t R, int n,
                                   CountVariant variant) {
  const int N = shape.order();
  if (n < 1 || n > N)
    throw IndexError("predicted_mult_count: mode " + std::to_string(n) +
                     " outside 1.." + std::to_string(N));
  if (R < 1) throw ArgumentError("predicted_mult_count: rank must be positive");
  if (!shape.ascending())
    throw ArgumentError("predicted_mult_count: dims must be ascending");
  const std::uint64_t uR = static_cast<std::uint64_t>(R);

  if (variant == CountVariant::direct) {
    // unfold-and-multiply: R J_N for the product plus the Kronecker build-up
    return uR * (static_cast<std::uint64_t>(shape.num_entries()) +
                 sum_j_prefix(shape, 2, n - 1) +
                 sum_j_prefix(shape, n + 1, N, shape.dim(n)));
  }

  const int p = select_pivot(shape);
  if (n == p || n == p + 1) {
    const std::uint64_t pivot_term = static_cast<std::uint64_t>(
        std::min(shape.j_prefix(n), shape.k_suffix(n - 1)));
    return uR * (sum_j_prefix(shape, 2, n - 1) + pivot_term +
                 sum_j_prefix(shape, n + 2, N, shape.j_prefix(n)) +
                 static_cast<std::uint64_t>(shape.num_entries()));
  }
  if (n < p) return uR * sum_j_prefix(shape, 2, n + 1);
  // n > p + 1: `fast` sums raw J_k over the trailing modes, `fast_derived`
  // scales that sum by 1/J_n as the recursion actually does.
  const std::uint64_t tail =
      variant == CountVariant::fast
          ? sum_j_prefix(shape, n + 2, N)
          : sum_j_prefix(shape, n + 2, N, shape.j_prefix(n));
  return uR * (static_cast<std::uint64_t>(shape.k_suffix(n - 2)) +
               static_cast<std::uint64_t>(shape.k_suffix(n - 1)) + tail);
}

std::uint64_t fast_count_realized(const Shape& shape, index_t R, int n) {
  const int N = shape.order();
  if (n < 1 || n > N)
    throw IndexError("fast_count_realized: mode " + std::to_string(n) +
                     " outside 1.." + std::to_string(N));
  if (R < 1) throw ArgumentError("fast_count_realized: rank must be positive");
  if (!shape.ascending())
    throw ArgumentError("fast_count_realized: dims must be ascending");
  const std::uint64_t uR = static_cast<std::uint64_t>(R);
  const int p = select_pivot(shape);

  if (n == p)
    return uR * (static_cast<std::uint64_t>(shape.num_entries()) +
                 sum_j_prefix(shape, n + 2, N, shape.j_prefix(n)) +
                 sum_j_prefix(shape, 2, n - 1) +
                 static_cast<std::uint64_t>(shape.j_prefix(n)));
  if (n == p + 1)
    return uR * (static_cast<std::uint64_t>(shape.num_entries()) +
                 sum_j_prefix(shape, 2, n - 1) +
                 sum_j_prefix(shape, n + 2, N, shape.j_prefix(n)) +
                 static_cast<std::uint64_t>(shape.k_suffix(n - 1)));
  if (n < p)
    return uR * (static_cast<std::uint64_t>(shape.j_prefix(n + 1)) +
                 sum_j_prefix(shape, 2, n - 1) +
                 static_cast<std::uint64_t>(shape.j_prefix(n)));
  return uR * (static_cast<std::uint64_t>(shape.k_suffix(n - 2)) +
               sum_j_prefix(shape, n + 2, N, shape.j_prefix(n)) +
               static_cast<std::uint64_t>(shape.k_suffix(n - 1)));
}

} // namespace cpd
