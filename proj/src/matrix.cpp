#include "hdlrt/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "hdlrt/error.hpp"

namespace hdlrt {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix storage has " + std::to_string(values_.size()) +
                    " entries, expected " + std::to_string(rows * cols));
  }
}

Matrix Matrix::identity(std::size_t d) {
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "data matrix must have n >= 1 and p >= 1");
  }
  for (double v : values_.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "data matrix contains a non-finite entry");
    }
  }
}

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : DataMatrix(Matrix(n, p, std::move(values))) {}

DataMatrix stack_rows(std::span<const DataMatrix> parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to stack");
  const std::size_t p = parts.front().p();
  std::size_t n = 0;
  for (const auto& part : parts) {
    if (part.p() != p) {
      throw Error(ErrorCode::DimensionMismatch, "stacked groups must share the dimension p");
    }
    n += part.n();
  }
  std::vector<double> values;
  values.reserve(n * p);
  for (const auto& part : parts) {
    const auto v = part.matrix().values();
    values.insert(values.end(), v.begin(), v.end());
  }
  return DataMatrix(n, p, std::move(values));
}

SymmetricMatrix::SymmetricMatrix(std::size_t d) : values_(d, d) {}

SymmetricMatrix::SymmetricMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  }
  for (std::size_t i = 0; i < values_.rows(); ++i)
    for (std::size_t j = i + 1; j < values_.cols(); ++j)
      if (values_(i, j) != values_(j, i)) {
        throw Error(ErrorCode::InvalidArgument,
                    "matrix is not exactly symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t d) {
  return SymmetricMatrix(Matrix::identity(d));
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
  SymmetricMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error(ErrorCode::InvalidDesign, "partition needs at least one block");
  cumulative_.reserve(sizes_.size() + 1);
  cumulative_.push_back(0);
  for (std::size_t s : sizes_) {
    if (s == 0) throw Error(ErrorCode::InvalidDesign, "block sizes must be positive");
    cumulative_.push_back(cumulative_.back() + s);
  }
}

BlockPartition BlockPartition::uniform(std::size_t count, std::size_t size) {
  return BlockPartition(std::vector<std::size_t>(count, size));
}

BlockPartition BlockPartition::unit(std::size_t p) { return uniform(p, 1); }

BlockPartition BlockPartition::scenario1(std::size_t p) {
  if (p == 0 || p % 3 != 0) {
    throw Error(ErrorCode::InvalidDesign,
                "scenario 1 needs p divisible by 3, got p = " + std::to_string(p));
  }
  return uniform(3, p / 3);
}

BlockPartition BlockPartition::scenario2(std::size_t p) {
  if (p < 2 || p % 2 != 0) {
    throw Error(ErrorCode::InvalidDesign,
                "scenario 2 needs an even p >= 2, got p = " + std::to_string(p));
  }
  const std::size_t q = p / 2;
  std::vector<std::size_t> sizes(q - 1, 1);
  sizes.push_back(q + 1);
  return BlockPartition(std::move(sizes));
}

namespace {

std::size_t parse_positive(std::string_view token, std::string_view whole) {
  std::size_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value == 0) {
    throw Error(ErrorCode::ParseError,
                "invalid partition '" + std::string(whole) + "': bad size '" +
                    std::string(token) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

BlockPartition BlockPartition::parse(std::string_view text) {
  const auto whole = trim(text);
  if (whole.empty()) throw Error(ErrorCode::ParseError, "empty partition");
  if (const auto x = whole.find('x'); x != std::string_view::npos) {
    const auto count = parse_positive(trim(whole.substr(0, x)), whole);
    const auto size = parse_positive(trim(whole.substr(x + 1)), whole);
    return uniform(count, size);
  }
  std::vector<std::size_t> sizes;
  std::string_view rest = whole;
  while (true) {
    const auto comma = rest.find(',');
    sizes.push_back(parse_positive(trim(rest.substr(0, comma)), whole));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return BlockPartition(std::move(sizes));
}

std::size_t BlockPartition::max_size() const {
  return *std::max_element(sizes_.begin(), sizes_.end());
}

std::size_t BlockPartition::min_size() const {
  return *std::min_element(sizes_.begin(), sizes_.end());
}

std::size_t BlockPartition::block_of(std::size_t j) const {
  if (j >= p()) throw Error(ErrorCode::IndexOutOfRange, "column outside the partition");
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), j);
  return static_cast<std::size_t>(it - cumulative_.begin()) - 1;
}

}  // namespace hdlrt
