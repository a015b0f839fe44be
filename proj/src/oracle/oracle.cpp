#include "oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hdlrt/error.hpp"

namespace hdlrt::oracle {

namespace {

struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
};

LuFactors lu_factor(Matrix a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "LU needs a square matrix");
  const std::size_t d = a.rows();
  const double tol =
      static_cast<double>(d) * std::numeric_limits<double>::epsilon() * max_abs(a);
  LuFactors f{std::move(a), std::vector<std::size_t>(d), 1};
  for (std::size_t i = 0; i < d; ++i) f.perm[i] = i;
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < d; ++i)
      if (std::abs(m(i, k)) > std::abs(m(pivot, k))) pivot = i;
    if (!(std::abs(m(pivot, k)) > tol)) {
      throw Error(ErrorCode::SingularMatrix, "LU pivot " + std::to_string(k) + " vanishes");
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < d; ++j) std::swap(m(k, j), m(pivot, j));
      std::swap(f.perm[k], f.perm[pivot]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      const double factor = m(i, k) / m(k, k);
      m(i, k) = factor;
      for (std::size_t j = k + 1; j < d; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return f;
}

Matrix gram(const Matrix& vars) {
  // vars is p by n; returns vars * vars^T.
  const std::size_t p = vars.rows();
  Matrix g(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < vars.cols(); ++k) s += vars(i, k) * vars(j, k);
      g(i, j) = s;
    }
  return g;
}

// ||b_target - B c||^2 where B holds columns [first, target) and c solves the
// normal equations.
double projected_residual(const Matrix& vars, const Matrix& g, std::size_t first,
                          std::size_t target) {
  const std::size_t n = vars.cols();
  const std::size_t m = target - first;
  std::vector<double> r(vars.row(target).begin(), vars.row(target).end());
  if (m > 0) {
    Matrix sub(m, m);
    std::vector<double> rhs(m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) sub(a, b) = g(first + a, first + b);
      rhs[a] = g(first + a, target);
    }
    const auto coef = lu_solve(sub, std::move(rhs));
    for (std::size_t a = 0; a < m; ++a) {
      const auto col = vars.row(first + a);
      for (std::size_t k = 0; k < n; ++k) r[k] -= coef[a] * col[k];
    }
  }
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

}  // namespace

SignedLogDet lu_log_det(const Matrix& a) {
  const auto f = lu_factor(a);
  SignedLogDet out{0.0, f.sign};
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double u = f.lu(k, k);
    out.log_abs += std::log(std::abs(u));
    if (u < 0.0) out.sign = -out.sign;
  }
  return out;
}

SignedLogDet lu_log_det(const SymmetricMatrix& a) { return lu_log_det(a.matrix()); }

std::vector<double> lu_solve(const Matrix& a, std::vector<double> b) {
  const auto f = lu_factor(a);
  const std::size_t d = a.rows();
  std::vector<double> x(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = d; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < d; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

double naive_log_vn(const DataMatrix& data, const BlockPartition& part) {
  if (data.p() >= data.n()) {
    throw Error(ErrorCode::DimensionExceedsSample, "naive_log_vn needs p < n");
  }
  if (part.p() != data.p()) throw Error(ErrorCode::DimensionMismatch, "partition mismatch");
  const std::size_t p = data.p();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  Matrix s(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < data.n(); ++k) acc += data(k, i) * data(k, j);
      s(i, j) = acc * inv_n;
    }
  double value = lu_log_det(s).log_abs;
  for (std::size_t b = 0; b < part.q(); ++b) {
    const std::size_t start = part.start(b);
    const std::size_t size = part.size(b);
    Matrix block(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) block(i, j) = s(start + i, start + j);
    value -= lu_log_det(block).log_abs;
  }
  return value;
}

DiagnosticTrace martingale_trace(const DataMatrix& data, const BlockPartition& part) {
  if (data.p() >= data.n()) {
    throw Error(ErrorCode::DimensionExceedsSample, "martingale_trace needs p < n");
  }
  if (part.p() != data.p()) throw Error(ErrorCode::DimensionMismatch, "partition mismatch");
  const Matrix vars = data.variables();
  const Matrix g = gram(vars);
  const std::size_t p = data.p();
  const double n = static_cast<double>(data.n());

  DiagnosticTrace trace;
  trace.n = data.n();
  trace.first_step = part.size(0);
  trace.quad_forms.resize(p);
  trace.block_quad_forms.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t start = part.start(part.block_of(i));
    trace.quad_forms[i] = projected_residual(vars, g, 0, i);
    trace.block_quad_forms[i] = projected_residual(vars, g, start, i);
    const double norm_sq = g(i, i);
    if (!(trace.quad_forms[i] > 0.0) || !(trace.block_quad_forms[i] > 0.0) ||
        trace.quad_forms[i] <= n * std::numeric_limits<double>::epsilon() * 1e-8 * norm_sq) {
      throw Error(ErrorCode::DegenerateColumn,
                  "column " + std::to_string(i) + " lies in the span of earlier columns");
    }
  }
  for (std::size_t i = trace.first_step; i < p; ++i) {
    const double start = static_cast<double>(part.start(part.block_of(i)));
    // 0-based column i is 1-based step i + 1, so n - (i + 1) + 1 = n - i.
    const double full_df = n - static_cast<double>(i);
    const double block_df = full_df + start;
    trace.x_terms.push_back((trace.quad_forms[i] - full_df) / full_df);
    trace.x_block_terms.push_back((trace.block_quad_forms[i] - block_df) / block_df);
    trace.sigma1_sum += 2.0 * (1.0 / full_df - 1.0 / block_df);
  }
  return trace;
}

}  // namespace hdlrt::oracle
