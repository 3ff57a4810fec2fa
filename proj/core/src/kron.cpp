#include "cpd/kron.hpp"

#include <string>

#include "cpd/errors.hpp"

namespace cpd {
namespace {

void check_column(const FactorList& factors, index_t r, const char* who) {
  const index_t R = factor_rank(factors);
  if (r < 1 || r > R)
    throw IndexError(std::string(who) + ": column " + std::to_string(r) +
                     " outside 1.." + std::to_string(R));
}

void check_skip_mode(const FactorList& factors, int n, const char* who) {
  if (n < 1 || n > static_cast<int>(factors.size()))
    throw IndexError(std::string(who) + ": mode " + std::to_string(n) +
                     " outside 1.." + std::to_string(factors.size()));
}

} // namespace

Shape factor_shape(const FactorList& factors) {
  if (factors.empty()) throw ArgumentError("factors: empty list");
  std::vector<index_t> dims;
  dims.reserve(factors.size());
  const index_t R = factors.front().cols();
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].cols() != R)
      throw ShapeError("factors: mode " + std::to_string(k + 1) + " has rank " +
                       std::to_string(factors[k].cols()) + ", expected " +
                       std::to_string(R));
    if (factors[k].rows() < 1)
      throw ShapeError("factors: mode " + std::to_string(k + 1) + " has no rows");
    dims.push_back(factors[k].rows());
  }
  return Shape(std::move(dims));
}

index_t factor_rank(const FactorList& factors) {
  if (factors.empty()) throw ArgumentError("factors: empty list");
  return factors.front().cols();
}

Eigen::VectorXd kron_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() * b.size());
  for (index_t i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Eigen::VectorXd kron_range_column(const FactorList& factors, int lo, int hi,
                                  index_t r, CostCounter* counter) {
  check_column(factors, r, "kron_range_column");
  if (lo > hi) return Eigen::VectorXd::Ones(1);
  check_skip_mode(factors, lo, "kron_range_column");
  check_skip_mode(factors, hi, "kron_range_column");

  Eigen::VectorXd t = factors[static_cast<std::size_t>(lo - 1)].col(r - 1);
  for (int k = lo + 1; k <= hi; ++k) {
    const Eigen::VectorXd& a = factors[static_cast<std::size_t>(k - 1)].col(r - 1);
    if (counter) counter->charge_kron(a.size(), t.size());
    t = kron_vec(a, t);
  }
  return t;
}

Eigen::VectorXd skip_kron_column(const FactorList& factors, int n, index_t r,
                                 CostCounter* counter) {
  check_skip_mode(factors, n, "skip_kron_column");
  check_column(factors, r, "skip_kron_column");
  const Shape shape = factor_shape(factors);
  const int N = shape.order();

  Eigen::VectorXd t = Eigen::VectorXd::Ones(1);
  bool seeded = false;
  for (int k = 1; k <= N; ++k) {
    if (k == n) continue;
    const Eigen::VectorXd& a = factors[static_cast<std::size_t>(k - 1)].col(r - 1);
    t = seeded ? kron_vec(a, t) : Eigen::VectorXd(a);
    seeded = true;
  }
  if (counter) {
    // Pairwise build-up cost: sum_{k=2}^{n-1} J_k + (1/I_n) sum_{k=n+1}^{N} J_k.
    std::uint64_t mults = 0;
    for (int k = 2; k <= n - 1; ++k)
      mults += static_cast<std::uint64_t>(shape.j_prefix(k));
    for (int k = n + 1; k <= N; ++k)
      mults += static_cast<std::uint64_t>(shape.j_prefix(k) / shape.dim(n));
    counter->charge(mults);
  }
  return t;
}

Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.cols() != Y.cols())
    throw ShapeError("khatri_rao: column counts differ, " + std::to_string(X.cols()) +
                     " vs " + std::to_string(Y.cols()));
  Eigen::MatrixXd out(X.rows() * Y.rows(), X.cols());
  for (index_t r = 0; r < X.cols(); ++r)
    out.col(r) = kron_vec(X.col(r), Y.col(r));
  return out;
}

Eigen::MatrixXd khatri_rao_skip(const FactorList& factors, int n) {
  check_skip_mode(factors, n, "khatri_rao_skip");
  const Shape shape = factor_shape(factors);
  const index_t R = factor_rank(factors);
  Eigen::MatrixXd out(shape.j_skip(n), R);
  for (index_t r = 1; r <= R; ++r) out.col(r - 1) = skip_kron_column(factors, n, r);
  return out;
}

Eigen::MatrixXd hadamard(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw ShapeError("hadamard: sizes differ, " + std::to_string(X.rows()) + "x" +
                     std::to_string(X.cols()) + " vs " + std::to_string(Y.rows()) +
                     "x" + std::to_string(Y.cols()));
  return X.cwiseProduct(Y);
}

Eigen::MatrixXd gram_hadamard_skip(const FactorList& factors, int n) {
  check_skip_mode(factors, n, "gram_hadamard_skip");
  const index_t R = factor_rank(factors);
  Eigen::MatrixXd W = Eigen::MatrixXd::Ones(R, R);
  for (int k = 1; k <= static_cast<int>(factors.size()); ++k) {
    if (k == n) continue;
    const auto& A = factors[static_cast<std::size_t>(k - 1)];
    W = W.cwiseProduct((A.transpose() * A).eval());
  }
  return W;
}

} // namespace cpd
