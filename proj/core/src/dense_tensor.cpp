#include "cpd/dense_tensor.hpp"

#include <cmath>
#include <string>

namespace cpd {

DenseTensor::DenseTensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)),
      values_(std::make_shared<const std::vector<double>>(std::move(values))) {
  if (static_cast<index_t>(values_->size()) != shape_.num_entries())
    throw ShapeError("tensor: " + std::to_string(values_->size()) +
                     " values for a shape holding " +
                     std::to_string(shape_.num_entries()) + " entries");
}

DenseTensor::DenseTensor(Shape shape, std::shared_ptr<const std::vector<double>> values)
    : shape_(std::move(shape)), values_(std::move(values)) {}

DenseTensor DenseTensor::zeros(Shape shape) {
  std::vector<double> v(static_cast<std::size_t>(shape.num_entries()), 0.0);
  return DenseTensor(std::move(shape), std::move(v));
}

double DenseTensor::at_linear(index_t linear) const {
  if (linear < 1 || linear > size())
    throw IndexError("tensor: linear index " + std::to_string(linear) +
                     " outside 1.." + std::to_string(size()));
  return (*values_)[static_cast<std::size_t>(linear - 1)];
}

double DenseTensor::norm() const {
  return Eigen::Map<const Eigen::VectorXd>(data(), size()).norm();
}

DenseTensor DenseTensor::reshaped(Shape new_shape) const {
  if (new_shape.num_entries() != shape_.num_entries())
    throw ShapeError("reshape: entry counts differ, " +
                     std::to_string(shape_.num_entries()) + " vs " +
                     std::to_string(new_shape.num_entries()));
  return DenseTensor(std::move(new_shape), values_);
}

Eigen::Map<const Eigen::MatrixXd> DenseTensor::matrix_view(index_t rows,
                                                           index_t cols) const {
  if (rows * cols != size())
    throw ShapeError("matrix_view: " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " does not hold " +
                     std::to_string(size()) + " entries");
  return Eigen::Map<const Eigen::MatrixXd>(data(), rows, cols);
}

} // namespace cpd
