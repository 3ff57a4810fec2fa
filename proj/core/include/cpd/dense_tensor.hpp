#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "cpd/shape.hpp"

namespace cpd {

// Dense N-way array over doubles. Values are stored in vectorization order
// (first index fastest), i.e. entry (i_1,...,i_N) lives at linear_index - 1.
// Instances are immutable; reshapes share the underlying buffer.
class DenseTensor {
public:
  DenseTensor(Shape shape, std::vector<double> values);

  static DenseTensor zeros(Shape shape);

  const Shape& shape() const { return shape_; }
  int order() const { return shape_.order(); }
  index_t size() const { return shape_.num_entries(); }

  const double* data() const { return values_->data(); }
  const std::vector<double>& values() const { return *values_; }

  // 1-based element access.
  double operator()(const std::vector<index_t>& multi) const {
    return (*values_)[static_cast<std::size_t>(linear_index(multi, shape_) - 1)];
  }
  double at_linear(index_t linear) const;

  double norm() const; // Frobenius

  // Same buffer under new dimensions; entry counts must agree.
  DenseTensor reshaped(Shape new_shape) const;

  // Column-major view of the buffer as a rows x cols matrix (rows*cols = J_N).
  Eigen::Map<const Eigen::MatrixXd> matrix_view(index_t rows, index_t cols) const;

private:
  DenseTensor(Shape shape, std::shared_ptr<const std::vector<double>> values);

  Shape shape_;
  std::shared_ptr<const std::vector<double>> values_;
};

} // namespace cpd
