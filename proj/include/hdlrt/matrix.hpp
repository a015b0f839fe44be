#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hdlrt {

// Dense row-major matrix of doubles. Plain value type; no expression
// templates, no aliasing tricks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

// Largest absolute entry.
double max_abs(const Matrix& a);

// Observations stored as rows: n samples by p variables. Entries are finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);
  DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

  std::size_t n() const noexcept { return values_.rows(); }
  std::size_t p() const noexcept { return values_.cols(); }

  double operator()(std::size_t k, std::size_t j) const { return values_(k, j); }
  std::span<const double> observation(std::size_t k) const { return values_.row(k); }

  const Matrix& matrix() const noexcept { return values_; }

  // Variables as rows (p by n), the layout used by the projection recursion.
  Matrix variables() const { return values_.transposed(); }

  friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

 private:
  Matrix values_;
};

// Stack the rows of several data matrices sharing the same p.
DataMatrix stack_rows(std::span<const DataMatrix> parts);

// Symmetric square matrix. Construction from a general matrix requires
// exact symmetry; set() mirrors every write.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t d);
  explicit SymmetricMatrix(Matrix values);

  static SymmetricMatrix identity(std::size_t d);
  static SymmetricMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return values_.rows(); }

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    values_(i, j) = v;
    values_(j, i) = v;
  }

  const Matrix& matrix() const noexcept { return values_; }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  Matrix values_;
};

// Ordered block sizes (p_1, ..., p_q) of a p-dimensional vector. Blocks are
// addressed with 0-based indices; block i covers columns [start(i), end(i)).
class BlockPartition {
 public:
  explicit BlockPartition(std::vector<std::size_t> sizes);

  // count blocks of equal size.
  static BlockPartition uniform(std::size_t count, std::size_t size);
  // p blocks of size one (diagonal covariance hypothesis).
  static BlockPartition unit(std::size_t p);
  // q = 3 equal blocks; p must be divisible by 3.
  static BlockPartition scenario1(std::size_t p);
  // q = p/2 blocks of sizes 1, ..., 1, q + 1; p must be even.
  static BlockPartition scenario2(std::size_t p);
  // "2,2,3" or the shorthand "30x2".
  static BlockPartition parse(std::string_view text);

  std::size_t q() const noexcept { return sizes_.size(); }
  std::size_t p() const noexcept { return cumulative_.back(); }
  std::size_t size(std::size_t i) const { return sizes_.at(i); }
  std::size_t start(std::size_t i) const { return cumulative_.at(i); }
  std::size_t end(std::size_t i) const { return cumulative_.at(i + 1); }
  std::size_t max_size() const;
  std::size_t min_size() const;

  // Index of the block containing column j.
  std::size_t block_of(std::size_t j) const;

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  // (0, p_1, p_1 + p_2, ..., p)
  const std::vector<std::size_t>& cumulative() const noexcept { return cumulative_; }

  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> cumulative_;
};

}  // namespace hdlrt
