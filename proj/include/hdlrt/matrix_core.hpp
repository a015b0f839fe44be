#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hdlrt/matrix.hpp"

namespace hdlrt {

/// (1/n) * sum_k y_k y_k^T over the rows of `data`. No mean-centering: the
/// model has a known zero mean.
SymmetricMatrix sample_covariance(const DataMatrix& data);

/// sum_k y_k y_k^T (the unnormalized scatter matrix).
SymmetricMatrix scatter_matrix(const DataMatrix& data);

/// Log-determinant from the Cholesky factor, sum_i 2 log L_ii.
/// Throws NotPositiveDefinite when a pivot is <= 0 or not finite.
double log_det_cholesky(const SymmetricMatrix& a);

/// Half-open column range [first, last), 0-based.
struct ColumnRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const noexcept { return last - first; }
};

/// Result of the projection recursion over a column range.
struct ProjectionSteps {
  double log_det = 0.0;
  /// b_i^T P b_i per column, where P projects onto the orthogonal
  /// complement of the earlier columns in the range.
  std::vector<double> quad_forms;
};

/// log |B^T B| for the columns B of `data` in `range`, computed as
/// sum_i log(b_i^T P b_i) by modified Gram-Schmidt with one
/// reorthogonalization pass. Throws DegenerateColumn on rank deficiency.
ProjectionSteps log_det_incremental(const DataMatrix& data, ColumnRange range);

/// Same recursion on a variables-as-rows (p by n) matrix; lets callers that
/// process several ranges transpose the data once.
ProjectionSteps log_det_incremental_variables(const Matrix& variables, ColumnRange range);

/// Principal submatrix of block `i` (0-based) of `part`.
SymmetricMatrix extract_block(const SymmetricMatrix& a, const BlockPartition& part,
                              std::size_t i);

/// Eigen-decomposition A = V diag(values) V^T from cyclic Jacobi rotations.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;  // columns are eigenvectors
  int sweeps = 0;
};

SymmetricEigen jacobi_eigen(const SymmetricMatrix& a);

/// Symmetric PSD square root via Jacobi. Throws NegativeEigenvalue when an
/// eigenvalue is below -1e-10 * ||A||_F.
SymmetricMatrix symmetric_sqrt(const SymmetricMatrix& a);

/// Closed-form root a*I + b*1 of (1 - delta) I + delta 1 for 0 <= delta < 1.
SymmetricMatrix compound_symmetry_sqrt(double delta, std::size_t p);

/// The compound-symmetry matrix (1 - delta) I + delta 1 itself.
SymmetricMatrix compound_symmetry(double delta, std::size_t p);

/// Rows y_k mapped to M y_k, i.e. data * M^T. M must be p by p.
DataMatrix transform_observations(const DataMatrix& data, const Matrix& m);

}  // namespace hdlrt
