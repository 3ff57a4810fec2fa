#include "cpd/shape.hpp"

#include <limits>
#include <string>

namespace cpd {

Shape::Shape(std::vector<index_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ShapeError("shape: need at least one mode");
  prefix_.reserve(dims_.size() + 1);
  prefix_.push_back(1);
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const index_t d = dims_[k];
    if (d < 1)
      throw ShapeError("shape: mode " + std::to_string(k + 1) +
                       " has nonpositive extent " + std::to_string(d));
    index_t next = 0;
    if (__builtin_mul_overflow(prefix_.back(), d, &next))
      throw ShapeError("shape: entry count overflows at mode " + std::to_string(k + 1));
    prefix_.push_back(next);
  }
}

index_t Shape::dim(int n) const {
  if (n < 1 || n > order())
    throw IndexError("shape: mode " + std::to_string(n) + " outside 1.." +
                     std::to_string(order()));
  return dims_[static_cast<std::size_t>(n - 1)];
}

index_t Shape::j_prefix(int n) const {
  if (n < 0 || n > order())
    throw IndexError("shape: prefix length " + std::to_string(n) + " outside 0.." +
                     std::to_string(order()));
  return prefix_[static_cast<std::size_t>(n)];
}

bool Shape::ascending() const {
  for (std::size_t k = 1; k < dims_.size(); ++k)
    if (dims_[k] < dims_[k - 1]) return false;
  return true;
}

index_t linear_index(const std::vector<index_t>& multi, const Shape& shape) {
  if (static_cast<int>(multi.size()) != shape.order())
    throw ArgumentError("linear_index: got " + std::to_string(multi.size()) +
                        " indices for an order-" + std::to_string(shape.order()) +
                        " shape");
  index_t lin = 1;
  for (int n = 1; n <= shape.order(); ++n) {
    const index_t i = multi[static_cast<std::size_t>(n - 1)];
    if (i < 1 || i > shape.dim(n))
      throw IndexError("linear_index: index " + std::to_string(i) + " at mode " +
                       std::to_string(n) + " outside 1.." + std::to_string(shape.dim(n)));
    lin += (i - 1) * shape.j_prefix(n - 1);
  }
  return lin;
}

std::vector<index_t> multi_index(index_t linear, const Shape& shape) {
  if (linear < 1 || linear > shape.num_entries())
    throw IndexError("multi_index: linear index " + std::to_string(linear) +
                     " outside 1.." + std::to_string(shape.num_entries()));
  std::vector<index_t> multi(static_cast<std::size_t>(shape.order()));
  index_t rem = linear - 1;
  for (int n = 1; n <= shape.order(); ++n) {
    multi[static_cast<std::size_t>(n - 1)] = rem % shape.dim(n) + 1;
    rem /= shape.dim(n);
  }
  return multi;
}

} // namespace cpd
