#include "cpd/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include "cpd/errors.hpp"

namespace cpd {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw ParseError(path + ": read failed");
  return std::move(buf).str();
}

[[noreturn]] void fail(const std::string& path, const char* what,
                       std::size_t offset) {
  throw ParseError(path + ": " + what + " at byte " + std::to_string(offset));
}

// Text cursor over an in-memory file; all errors carry byte offsets.
class TextCursor {
public:
  TextCursor(const std::string& path, const std::string& data)
      : path_(path), data_(data) {}

  void skip_ws() {
    while (pos_ < data_.size() && std::isspace(static_cast<unsigned char>(data_[pos_])))
      ++pos_;
  }

  std::string_view token(const char* what) {
    skip_ws();
    if (pos_ >= data_.size()) fail(path_, what, pos_);
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_])))
      ++pos_;
    return std::string_view(data_).substr(start, pos_ - start);
  }

  std::int64_t integer(const char* what) {
    const std::size_t at = next_offset();
    const std::string_view t = token(what);
    std::int64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      fail(path_, what, at);
    return v;
  }

  double real(const char* what) {
    const std::size_t at = next_offset();
    const std::string_view t = token(what);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
      fail(path_, what, at);
    return v;
  }

  void expect_end() {
    skip_ws();
    if (pos_ != data_.size()) fail(path_, "trailing data", pos_);
  }

  std::size_t next_offset() {
    skip_ws();
    return pos_;
  }

private:
  const std::string& path_;
  const std::string& data_;
  std::size_t pos_ = 0;
};

std::vector<index_t> read_dims(TextCursor& cur, const std::string& path,
                               std::int64_t n) {
  if (n < 1 || n > 64) fail(path, "implausible order", 5);
  std::vector<index_t> dims;
  dims.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t at = cur.next_offset();
    const std::int64_t d = cur.integer("dimension");
    if (d < 1) fail(path, "nonpositive dimension", at);
    dims.push_back(d);
  }
  return dims;
}

void append_values(std::string& out, const double* v, std::size_t count) {
  char buf[40];
  for (std::size_t i = 0; i < count; ++i) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out.append(buf, static_cast<std::size_t>(len));
    out.push_back((i + 1) % 8 == 0 ? '\n' : ' ');
  }
  if (count % 8 != 0) out.push_back('\n');
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out.good()) throw ParseError(path + ": write failed");
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

std::uint32_t get_u32(const std::string& path, const std::string& data,
                      std::size_t& pos) {
  if (pos + 4 > data.size()) fail(path, "truncated integer", pos);
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + b])) << (8 * b);
  pos += 4;
  return v;
}

double get_f64(const std::string& path, const std::string& data,
               std::size_t& pos) {
  if (pos + 8 > data.size()) fail(path, "truncated value", pos);
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + b])) << (8 * b);
  pos += 8;
  return std::bit_cast<double>(v);
}

DenseTensor read_tensor_text(const std::string& path, const std::string& data) {
  TextCursor cur(path, data);
  if (cur.token("header") != "TDNS") fail(path, "bad magic", 0);
  const std::int64_t n = cur.integer("order");
  Shape shape(read_dims(cur, path, n));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(shape.num_entries()));
  for (index_t i = 0; i < shape.num_entries(); ++i)
    values.push_back(cur.real("value"));
  cur.expect_end();
  return DenseTensor(std::move(shape), std::move(values));
}

DenseTensor read_tensor_binary(const std::string& path, const std::string& data) {
  std::size_t pos = 4; // past magic
  const std::uint32_t n = get_u32(path, data, pos);
  if (n < 1 || n > 64) fail(path, "implausible order", 4);
  std::vector<index_t> dims;
  dims.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::size_t at = pos;
    const std::uint32_t d = get_u32(path, data, pos);
    if (d < 1) fail(path, "nonpositive dimension", at);
    dims.push_back(static_cast<index_t>(d));
  }
  Shape shape(std::move(dims));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(shape.num_entries()));
  for (index_t i = 0; i < shape.num_entries(); ++i)
    values.push_back(get_f64(path, data, pos));
  if (pos != data.size()) fail(path, "trailing data", pos);
  return DenseTensor(std::move(shape), std::move(values));
}

} // namespace

DenseTensor read_tensor(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() >= 4 && data.compare(0, 4, "TDNB") == 0)
    return read_tensor_binary(path, data);
  return read_tensor_text(path, data);
}

void write_tensor(const std::string& path, const DenseTensor& t,
                  TensorFormat format) {
  std::string out;
  if (format == TensorFormat::binary) {
    out.reserve(8 + 4 * static_cast<std::size_t>(t.order()) +
                8 * static_cast<std::size_t>(t.shape().num_entries()));
    out += "TDNB";
    put_u32(out, static_cast<std::uint32_t>(t.order()));
    for (int n = 1; n <= t.order(); ++n) {
      const index_t d = t.shape().dim(n);
      if (d > std::numeric_limits<std::uint32_t>::max())
        throw ArgumentError(path + ": dimension too large for binary format");
      put_u32(out, static_cast<std::uint32_t>(d));
    }
    for (index_t i = 0; i < t.shape().num_entries(); ++i)
      put_f64(out, t.data()[i]);
  } else {
    out += "TDNS";
    for (int n = 0; n <= t.order(); ++n)
      out += " " + std::to_string(n == 0 ? t.order() : t.shape().dim(n));
    out.push_back('\n');
    append_values(out, t.data(), static_cast<std::size_t>(t.shape().num_entries()));
  }
  write_file(path, out);
}

KruskalModel read_model(const std::string& path) {
  const std::string data = read_file(path);
  TextCursor cur(path, data);
  if (cur.token("header") != "KRUS") fail(path, "bad magic", 0);
  const std::int64_t n = cur.integer("order");
  const std::size_t rank_at = cur.next_offset();
  const std::int64_t r = cur.integer("rank");
  if (r < 1) fail(path, "nonpositive rank", rank_at);
  const std::vector<index_t> dims = read_dims(cur, path, n);
  FactorList factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (std::int64_t mode = 0; mode < n; ++mode) {
    Eigen::MatrixXd a(dims[static_cast<std::size_t>(mode)], r);
    for (index_t c = 0; c < r; ++c)
      for (index_t i = 0; i < a.rows(); ++i) a(i, c) = cur.real("factor value");
    factors.push_back(std::move(a));
  }
  cur.expect_end();
  return KruskalModel(std::move(factors));
}

void write_model(const std::string& path, const KruskalModel& model) {
  std::string out = "KRUS " + std::to_string(model.order()) + " " +
                    std::to_string(model.rank());
  for (int n = 1; n <= model.order(); ++n)
    out += " " + std::to_string(model.factor(n).rows());
  out.push_back('\n');
  for (int n = 1; n <= model.order(); ++n) {
    const Eigen::MatrixXd& a = model.factor(n);
    append_values(out, a.data(), static_cast<std::size_t>(a.size()));
  }
  write_file(path, out);
}

} // namespace cpd
