#pragma once

#include <string>

#include "cpd/dense_tensor.hpp"
#include "cpd/kruskal.hpp"

namespace cpd {

// Tensor files: text form `TDNS <N> <I1> ... <IN>` followed by the values in
// vec order, or binary form `TDNB` + u32 LE N + u32 LE dims + f64 LE values.
// Factor files: text `KRUS <N> <R> <I1> ... <IN>` followed by the factors,
// each column-major. Malformed input raises ParseError with a byte offset.

enum class TensorFormat { text, binary };

DenseTensor read_tensor(const std::string& path);
void write_tensor(const std::string& path, const DenseTensor& t,
                  TensorFormat format = TensorFormat::text);

KruskalModel read_model(const std::string& path);
void write_model(const std::string& path, const KruskalModel& model);

} // namespace cpd
