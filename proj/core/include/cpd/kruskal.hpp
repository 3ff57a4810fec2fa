#pragma once

#include <vector>

#include <Eigen/Core>

#include "cpd/dense_tensor.hpp"
#include "cpd/kron.hpp"

namespace cpd {

// Rank-R Kruskal (CP) model: N factor matrices A^(n) of size I_n x R.
// Weights are absorbed into the factors.
class KruskalModel {
public:
  KruskalModel() = default;
  explicit KruskalModel(FactorList factors);

  int order() const { return static_cast<int>(factors_.size()); }
  index_t rank() const;
  Shape shape() const { return factor_shape(factors_); }

  const FactorList& factors() const { return factors_; }
  FactorList& factors() { return factors_; }
  const FactorMatrix& factor(int n) const;

private:
  FactorList factors_;
};

// Materialize the model: Y-hat(i_1,...,i_N) = sum_r prod_n A^(n)(i_n, r).
DenseTensor full(const KruskalModel& model);

// Squared Frobenius misfit D = |Y - Y-hat|_F^2. Materializes Y-hat when the
// tensor holds at most `materialize_limit` entries, otherwise evaluates the
// Gram identity |Y|^2 - 2<Y, Y-hat> + |Y-hat|^2 without forming Y-hat.
double cost(const DenseTensor& y, const KruskalModel& model,
            index_t materialize_limit = 1000000);

// |Y - Y-hat|_F / |Y|_F.
double relative_error(const DenseTensor& y, const KruskalModel& model);

// Per-mode gradients of D/(-2) and the stacked derivative vector.
struct GradientSet {
  std::vector<Eigen::MatrixXd> modes; // G^(n) = M^(n) - A^(n) (gram Hadamard)
  Eigen::VectorXd g;                  // dD/da = -2 [vec G^(1); ...; vec G^(N)]
};

// mttkrp_results[n-1] must hold M^(n) = Y_(n) (kr_{k != n} A^(k)).
GradientSet cp_gradient_set(const DenseTensor& y, const KruskalModel& model,
                            const std::vector<Eigen::MatrixXd>& mttkrp_results);

// Concatenation [vec G^(1); ...; vec G^(N)] without the -2 scaling.
Eigen::VectorXd stack_gradient(const GradientSet& gs);

// Inverse of stack_gradient for the given mode sizes.
std::vector<Eigen::MatrixXd> unstack_gradient(const Eigen::VectorXd& v,
                                              const std::vector<index_t>& dims,
                                              index_t R);

} // namespace cpd
