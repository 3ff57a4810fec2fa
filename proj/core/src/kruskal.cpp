#include "cpd/kruskal.hpp"

#include <cmath>
#include <string>

#include "cpd/tensor_ops.hpp"

namespace cpd {

KruskalModel::KruskalModel(FactorList factors) : factors_(std::move(factors)) {
  factor_shape(factors_); // validates
}

index_t KruskalModel::rank() const { return factor_rank(factors_); }

const FactorMatrix& KruskalModel::factor(int n) const {
  if (n < 1 || n > order())
    throw IndexError("model: mode " + std::to_string(n) + " outside 1.." +
                     std::to_string(order()));
  return factors_[static_cast<std::size_t>(n - 1)];
}

DenseTensor full(const KruskalModel& model) {
  const Shape shape = model.shape();
  const index_t R = model.rank();
  std::vector<double> out(static_cast<std::size_t>(shape.num_entries()), 0.0);
  Eigen::Map<Eigen::VectorXd> acc(out.data(), shape.num_entries());
  for (index_t r = 1; r <= R; ++r)
    acc += kron_range_column(model.factors(), 1, model.order(), r);
  return DenseTensor(shape, std::move(out));
}

namespace {

void check_same_shape(const DenseTensor& y, const KruskalModel& model,
                      const char* who) {
  if (model.shape() != y.shape())
    throw ShapeError(std::string(who) + ": model dims do not match the tensor");
}

// <Y, Y-hat> without materializing Y-hat; one J_{N-1}-sized scratch column.
double inner_with_model(const DenseTensor& y, const KruskalModel& model) {
  const int N = y.order();
  const index_t R = model.rank();
  if (N == 1) return (y.matrix_view(y.size(), 1).transpose() *
                      model.factor(1)).sum();
  const auto Ypref = unfold_prefix(y, N - 1); // J_{N-1} x I_N
  double dot = 0.0;
  for (index_t r = 1; r <= R; ++r) {
    Eigen::VectorXd t = kron_range_column(model.factors(), 1, N - 1, r);
    dot += model.factor(N).col(r - 1).dot(Ypref.transpose() * t);
  }
  return dot;
}

} // namespace

double cost(const DenseTensor& y, const KruskalModel& model,
            index_t materialize_limit) {
  check_same_shape(y, model, "cost");
  if (y.size() <= materialize_limit) {
    const DenseTensor yh = full(model);
    return (Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()) -
            Eigen::Map<const Eigen::VectorXd>(yh.data(), yh.size()))
        .squaredNorm();
  }
  // |Y|^2 - 2 <Y, Y-hat> + 1^T (hadamard of all Grams) 1
  const index_t R = model.rank();
  Eigen::MatrixXd W = Eigen::MatrixXd::Ones(R, R);
  for (int n = 1; n <= model.order(); ++n) {
    const auto& A = model.factor(n);
    W = W.cwiseProduct((A.transpose() * A).eval());
  }
  const double yy = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()).squaredNorm();
  const double d = yy - 2.0 * inner_with_model(y, model) + W.sum();
  return d < 0.0 ? 0.0 : d; // clamp cancellation noise
}

double relative_error(const DenseTensor& y, const KruskalModel& model) {
  return std::sqrt(cost(y, model)) / y.norm();
}

GradientSet cp_gradient_set(const DenseTensor& y, const KruskalModel& model,
                            const std::vector<Eigen::MatrixXd>& mttkrp_results) {
  check_same_shape(y, model, "cp_gradient_set");
  if (static_cast<int>(mttkrp_results.size()) != model.order())
    throw ArgumentError("cp_gradient_set: " + std::to_string(mttkrp_results.size()) +
                        " mttkrp matrices for order " + std::to_string(model.order()));
  GradientSet gs;
  gs.modes.reserve(mttkrp_results.size());
  for (int n = 1; n <= model.order(); ++n) {
    const auto& M = mttkrp_results[static_cast<std::size_t>(n - 1)];
    const auto& A = model.factor(n);
    if (M.rows() != A.rows() || M.cols() != A.cols())
      throw ShapeError("cp_gradient_set: mttkrp matrix for mode " + std::to_string(n) +
                       " has wrong size");
    gs.modes.emplace_back(M - A * gram_hadamard_skip(model.factors(), n));
  }
  gs.g = -2.0 * stack_gradient(gs);
  return gs;
}

Eigen::VectorXd stack_gradient(const GradientSet& gs) {
  index_t total = 0;
  for (const auto& G : gs.modes) total += G.size();
  Eigen::VectorXd v(total);
  index_t at = 0;
  for (const auto& G : gs.modes) {
    v.segment(at, G.size()) = Eigen::Map<const Eigen::VectorXd>(G.data(), G.size());
    at += G.size();
  }
  return v;
}

std::vector<Eigen::MatrixXd> unstack_gradient(const Eigen::VectorXd& v,
                                              const std::vector<index_t>& dims,
                                              index_t R) {
  index_t total = 0;
  for (index_t d : dims) total += d * R;
  if (v.size() != total)
    throw ShapeError("unstack_gradient: vector length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(total));
  std::vector<Eigen::MatrixXd> out;
  out.reserve(dims.size());
  index_t at = 0;
  for (index_t d : dims) {
    out.emplace_back(Eigen::Map<const Eigen::MatrixXd>(v.data() + at, d, R));
    at += d * R;
  }
  return out;
}

} // namespace cpd
