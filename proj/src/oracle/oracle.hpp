#pragma once

// Brute-force reference implementations. These deliberately use different
// algorithms from the library paths (LU instead of Cholesky, explicit
// least-squares projections instead of incremental orthogonalization) and
// are only linked into the tests and the hidden `debug trace` command.

#include <cstddef>
#include <vector>

#include "hdlrt/matrix.hpp"

namespace hdlrt::oracle {

struct SignedLogDet {
  double log_abs = 0.0;
  int sign = 1;
};

// LU with partial pivoting. Throws SingularMatrix for a pivot below
// d * eps * max|A|.
SignedLogDet lu_log_det(const Matrix& a);
SignedLogDet lu_log_det(const SymmetricMatrix& a);

// Solve A x = b with LU and partial pivoting.
std::vector<double> lu_solve(const Matrix& a, std::vector<double> b);

// log |S| - sum_i log |S_ii| with S formed explicitly and every determinant
// taken by LU.
double naive_log_vn(const DataMatrix& data, const BlockPartition& part);

// Per-column terms of the martingale decomposition of log V_n.
struct DiagnosticTrace {
  std::size_t n = 0;
  std::size_t first_step = 0;  // p_1, 0-based index of the first X_i
  // b_i^T P(i-1) b_i for every column i (projection on all earlier columns).
  std::vector<double> quad_forms;
  // b_i^T P(start of i's block; i-1) b_i for every column i.
  std::vector<double> block_quad_forms;
  // X_i and X_{g(i),i} for columns i >= p_1.
  std::vector<double> x_terms;
  std::vector<double> x_block_terms;
  // sum over i >= p_1 of 2 (1/(n-i+1) - 1/(n-i+1+p*_{g(i)-1})).
  double sigma1_sum = 0.0;
};

DiagnosticTrace martingale_trace(const DataMatrix& data, const BlockPartition& part);

}  // namespace hdlrt::oracle
