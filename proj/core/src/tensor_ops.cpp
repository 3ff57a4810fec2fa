#include "cpd/tensor_ops.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace cpd {
namespace {

void check_mode(const DenseTensor& t, int n, const char* who) {
  if (n < 1 || n > t.order())
    throw IndexError(std::string(who) + ": mode " + std::to_string(n) +
                     " outside 1.." + std::to_string(t.order()));
}

// perm must hit every mode 1..N exactly once.
void check_permutation(const std::vector<int>& perm, int order, const char* who) {
  if (static_cast<int>(perm.size()) != order)
    throw ArgumentError(std::string(who) + ": permutation length " +
                        std::to_string(perm.size()) + " for order " +
                        std::to_string(order));
  std::vector<char> seen(static_cast<std::size_t>(order), 0);
  for (int p : perm) {
    if (p < 1 || p > order)
      throw ArgumentError(std::string(who) + ": mode " + std::to_string(p) +
                          " outside 1.." + std::to_string(order));
    if (seen[static_cast<std::size_t>(p - 1)]++)
      throw ArgumentError(std::string(who) + ": mode " + std::to_string(p) +
                          " repeated");
  }
}

} // namespace

DenseTensor reshape(const DenseTensor& t, std::vector<index_t> new_dims) {
  return t.reshaped(Shape(std::move(new_dims)));
}

DenseTensor permute(const DenseTensor& t, const std::vector<int>& perm) {
  const int N = t.order();
  check_permutation(perm, N, "permute");

  std::vector<index_t> out_dims(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k)
    out_dims[static_cast<std::size_t>(k)] = t.shape().dim(perm[static_cast<std::size_t>(k)]);
  Shape out_shape(out_dims);

  // Walk the source linearly; out_stride[m] is the destination stride of
  // source mode m+1, i.e. the prefix product of the output dims before the
  // position where mode m+1 lands.
  std::vector<index_t> out_stride(static_cast<std::size_t>(N), 0);
  for (int k = 0; k < N; ++k)
    out_stride[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)] - 1)] =
        out_shape.j_prefix(k);

  const index_t total = t.size();
  std::vector<double> out(static_cast<std::size_t>(total));
  const double* src = t.data();
  std::vector<index_t> counter(static_cast<std::size_t>(N), 0);
  index_t dst = 0;
  for (index_t s = 0; s < total; ++s) {
    out[static_cast<std::size_t>(dst)] = src[s];
    for (int m = 0; m < N; ++m) {
      dst += out_stride[static_cast<std::size_t>(m)];
      if (++counter[static_cast<std::size_t>(m)] < t.shape().dim(m + 1)) break;
      dst -= out_stride[static_cast<std::size_t>(m)] * t.shape().dim(m + 1);
      counter[static_cast<std::size_t>(m)] = 0;
    }
  }
  return DenseTensor(std::move(out_shape), std::move(out));
}

Eigen::Map<const Eigen::MatrixXd> unfold_prefix(const DenseTensor& t, int n) {
  if (n < 1 || n >= t.order())
    throw IndexError("unfold_prefix: split " + std::to_string(n) + " outside 1.." +
                     std::to_string(t.order() - 1));
  return t.matrix_view(t.shape().j_prefix(n), t.shape().k_suffix(n));
}

Eigen::MatrixXd unfold(const DenseTensor& t, const std::vector<int>& row_modes,
                       const std::vector<int>& col_modes) {
  const int N = t.order();
  std::vector<int> all(row_modes);
  all.insert(all.end(), col_modes.begin(), col_modes.end());
  check_permutation(all, N, "unfold");

  index_t rows = 1, cols = 1;
  for (int m : row_modes) rows *= t.shape().dim(m);
  for (int m : col_modes) cols *= t.shape().dim(m);

  // Destination strides per source mode, rows and columns separately.
  std::vector<index_t> row_stride(static_cast<std::size_t>(N), 0);
  std::vector<index_t> col_stride(static_cast<std::size_t>(N), 0);
  index_t acc = 1;
  for (int m : row_modes) {
    row_stride[static_cast<std::size_t>(m - 1)] = acc;
    acc *= t.shape().dim(m);
  }
  acc = 1;
  for (int m : col_modes) {
    col_stride[static_cast<std::size_t>(m - 1)] = acc;
    acc *= t.shape().dim(m);
  }

  Eigen::MatrixXd out(rows, cols);
  const double* src = t.data();
  std::vector<index_t> counter(static_cast<std::size_t>(N), 0);
  index_t r = 0, c = 0;
  const index_t total = t.size();
  for (index_t s = 0; s < total; ++s) {
    out(r, c) = src[s];
    for (int m = 0; m < N; ++m) {
      r += row_stride[static_cast<std::size_t>(m)];
      c += col_stride[static_cast<std::size_t>(m)];
      if (++counter[static_cast<std::size_t>(m)] < t.shape().dim(m + 1)) break;
      r -= row_stride[static_cast<std::size_t>(m)] * t.shape().dim(m + 1);
      c -= col_stride[static_cast<std::size_t>(m)] * t.shape().dim(m + 1);
      counter[static_cast<std::size_t>(m)] = 0;
    }
  }
  return out;
}

Eigen::MatrixXd unfold_mode(const DenseTensor& t, int n) {
  check_mode(t, n, "unfold_mode");
  std::vector<int> cols;
  cols.reserve(static_cast<std::size_t>(t.order() - 1));
  for (int m = 1; m <= t.order(); ++m)
    if (m != n) cols.push_back(m);
  return unfold(t, {n}, cols);
}

DenseTensor ttv(const DenseTensor& t, const Eigen::VectorXd& v, int n) {
  check_mode(t, n, "ttv");
  const index_t In = t.shape().dim(n);
  if (v.size() != In)
    throw ShapeError("ttv: vector length " + std::to_string(v.size()) +
                     " vs mode " + std::to_string(n) + " extent " + std::to_string(In));

  const index_t Jm1 = t.shape().j_prefix(n - 1);
  const index_t Kn = t.shape().k_suffix(n);

  std::vector<index_t> out_dims;
  out_dims.reserve(static_cast<std::size_t>(t.order()));
  for (int m = 1; m <= t.order(); ++m)
    if (m != n) out_dims.push_back(t.shape().dim(m));
  if (out_dims.empty()) out_dims.push_back(1); // fully contracted: scalar

  std::vector<double> out(static_cast<std::size_t>(Jm1 * Kn));
  Eigen::Map<Eigen::VectorXd> z(out.data(), Jm1 * Kn);
  // View the buffer as [J_{n-1}, I_n, K_n] and contract the middle index
  // slab by slab; each slab is a contiguous J_{n-1} x I_n block.
  for (index_t k = 0; k < Kn; ++k) {
    Eigen::Map<const Eigen::MatrixXd> slab(t.data() + k * Jm1 * In, Jm1, In);
    z.segment(k * Jm1, Jm1).noalias() = slab * v;
  }
  return DenseTensor(Shape(std::move(out_dims)), std::move(out));
}

DenseTensor ttv_multi(const DenseTensor& t, const std::vector<Eigen::VectorXd>& vs,
                      const std::vector<int>& modes) {
  if (vs.size() != modes.size())
    throw ArgumentError("ttv_multi: " + std::to_string(vs.size()) + " vectors for " +
                        std::to_string(modes.size()) + " modes");
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return modes[a] > modes[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (modes[order[i]] == modes[order[i - 1]])
      throw ArgumentError("ttv_multi: mode " + std::to_string(modes[order[i]]) +
                          " repeated");
  // Contract highest mode first so the remaining mode numbers stay valid.
  DenseTensor cur = t;
  for (std::size_t i : order) cur = ttv(cur, vs[i], modes[i]);
  return cur;
}

} // namespace cpd
