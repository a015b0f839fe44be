#include "hdlrt/matrix_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hdlrt/error.hpp"

namespace hdlrt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

// Upper triangle of sum_k y_k y_k^T, mirrored.
SymmetricMatrix accumulate_outer(const DataMatrix& data, double scale) {
  const std::size_t p = data.p();
  Matrix acc(p, p);
  for (std::size_t k = 0; k < data.n(); ++k) {
    const auto y = data.observation(k);
    for (std::size_t i = 0; i < p; ++i) {
      const double yi = y[i];
      if (yi == 0.0) continue;
      auto out = acc.row(i);
      for (std::size_t j = i; j < p; ++j) out[j] += yi * y[j];
    }
  }
  SymmetricMatrix s(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) s.set(i, j, acc(i, j) * scale);
  return s;
}

}  // namespace

SymmetricMatrix sample_covariance(const DataMatrix& data) {
  return accumulate_outer(data, 1.0 / static_cast<double>(data.n()));
}

SymmetricMatrix scatter_matrix(const DataMatrix& data) { return accumulate_outer(data, 1.0); }

double log_det_cholesky(const SymmetricMatrix& a) {
  const std::size_t d = a.dim();
  Matrix l(d, d);
  double log_det = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto lj = l.row(j);
    double pivot = a(j, j) - dot(lj.first(j), lj.first(j));
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "Cholesky pivot " + std::to_string(j) + " is not positive (" +
                      std::to_string(pivot) + ")");
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    log_det += 2.0 * std::log(ljj);
    for (std::size_t i = j + 1; i < d; ++i) {
      const auto li = l.row(i);
      l(i, j) = (a(i, j) - dot(li.first(j), lj.first(j))) / ljj;
    }
  }
  return log_det;
}

ProjectionSteps log_det_incremental_variables(const Matrix& variables, ColumnRange range) {
  const std::size_t n = variables.cols();
  if (range.first > range.last || range.last > variables.rows()) {
    throw Error(ErrorCode::IndexOutOfRange, "column range outside the data");
  }
  if (range.size() > n) {
    throw Error(ErrorCode::DimensionExceedsSample,
                "projection recursion needs at most n = " + std::to_string(n) +
                    " columns, got " + std::to_string(range.size()));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double degenerate_factor = static_cast<double>(n) * eps * eps;

  ProjectionSteps out;
  out.quad_forms.reserve(range.size());
  // Orthonormal basis of the columns processed so far, one per row.
  Matrix basis(range.size(), n);
  std::vector<double> v(n);

  for (std::size_t step = 0; step < range.size(); ++step) {
    const auto b = variables.row(range.first + step);
    std::copy(b.begin(), b.end(), v.begin());
    const double norm0_sq = dot(v, v);
    double before_sq = norm0_sq;
    double residual_sq = norm0_sq;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < step; ++k) {
        const auto qk = basis.row(k);
        axpy(-dot(qk, v), qk, v);
      }
      residual_sq = dot(v, v);
      // Second pass only when the first one cancelled a large share of v.
      if (residual_sq >= 0.5 * before_sq) break;
      before_sq = residual_sq;
    }
    if (!(residual_sq > degenerate_factor * norm0_sq) || norm0_sq == 0.0) {
      throw Error(ErrorCode::DegenerateColumn,
                  "column " + std::to_string(range.first + step) +
                      " is (numerically) in the span of the preceding columns");
    }
    out.quad_forms.push_back(residual_sq);
    out.log_det += std::log(residual_sq);
    const double inv = 1.0 / std::sqrt(residual_sq);
    auto q = basis.row(step);
    for (std::size_t k = 0; k < n; ++k) q[k] = v[k] * inv;
  }
  return out;
}

ProjectionSteps log_det_incremental(const DataMatrix& data, ColumnRange range) {
  if (range.last > data.p() || range.first > range.last) {
    throw Error(ErrorCode::IndexOutOfRange, "column range outside the data");
  }
  // Copy only the requested variables, as rows.
  Matrix vars(range.size(), data.n());
  for (std::size_t k = 0; k < data.n(); ++k) {
    const auto y = data.observation(k);
    for (std::size_t j = 0; j < range.size(); ++j) vars(j, k) = y[range.first + j];
  }
  return log_det_incremental_variables(vars, ColumnRange{0, range.size()});
}

SymmetricMatrix extract_block(const SymmetricMatrix& a, const BlockPartition& part,
                              std::size_t i) {
  if (i >= part.q()) {
    throw Error(ErrorCode::IndexOutOfRange, "block index " + std::to_string(i) +
                                                " out of range for q = " +
                                                std::to_string(part.q()));
  }
  if (part.p() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "partition does not match matrix dimension");
  }
  const std::size_t start = part.start(i);
  const std::size_t size = part.size(i);
  SymmetricMatrix block(size);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = r; c < size; ++c) block.set(r, c, a(start + r, start + c));
  return block;
}

SymmetricEigen jacobi_eigen(const SymmetricMatrix& input) {
  const std::size_t d = input.dim();
  Matrix a = input.matrix();
  Matrix v = Matrix::identity(d);

  double frob_sq = 0.0;
  for (double x : a.values()) frob_sq += x * x;
  const double target = 1e-12 * std::sqrt(frob_sq);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 30;
  int sweeps = 0;
  while (sweeps < kMaxSweeps && off_norm() > target) {
    ++sweeps;
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.values[i] = a(i, i);
  out.vectors = std::move(v);
  out.sweeps = sweeps;
  return out;
}

SymmetricMatrix symmetric_sqrt(const SymmetricMatrix& a) {
  const std::size_t d = a.dim();
  const auto eig = jacobi_eigen(a);

  double frob_sq = 0.0;
  for (double x : a.matrix().values()) frob_sq += x * x;
  const double tol = 1e-10 * std::sqrt(frob_sq);

  std::vector<double> roots(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lambda = eig.values[k];
    if (lambda < -tol) {
      throw Error(ErrorCode::NegativeEigenvalue,
                  "matrix has eigenvalue " + std::to_string(lambda) + " < 0");
    }
    roots[k] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }

  SymmetricMatrix out(d);
  const Matrix& v = eig.vectors;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += v(i, k) * roots[k] * v(j, k);
      out.set(i, j, s);
    }
  }
  return out;
}

SymmetricMatrix compound_symmetry_sqrt(double delta, std::size_t p) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "compound symmetry needs 0 <= delta < 1");
  }
  const double small = std::sqrt(1.0 - delta);
  const double large = std::sqrt(1.0 - delta + static_cast<double>(p) * delta);
  // (large - small) / p without the cancellation.
  const double b = delta / (large + small);
  SymmetricMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.set(i, i, small + b);
    for (std::size_t j = i + 1; j < p; ++j) out.set(i, j, b);
  }
  return out;
}

SymmetricMatrix compound_symmetry(double delta, std::size_t p) {
  SymmetricMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < p; ++j) out.set(i, j, delta);
  }
  return out;
}

DataMatrix transform_observations(const DataMatrix& data, const Matrix& m) {
  if (m.rows() != data.p() || m.cols() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch,
                "transform is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    " but data has p = " + std::to_string(data.p()));
  }
  return DataMatrix(multiply(data.matrix(), m.transposed()));
}

}  // namespace hdlrt
