#pragma once

#include <cstddef>

#include "hdlrt/matrix.hpp"
#include "hdlrt/report.hpp"

namespace hdlrt {

// How determinants of the sample covariance and its blocks are evaluated.
enum class DeterminantRoute {
  Projection,  // projection recursion on the data columns (default)
  Cholesky,    // Cholesky of the explicitly formed sample covariance
};

// Centering and scale of log V_n under the null.
struct BlockTestConstants {
  double mu_n = 0.0;
  double sigma_n = 1.0;
  std::size_t n = 0;
  std::size_t p = 0;
  BlockPartition partition{{1}};

  double variance() const { return sigma_n * sigma_n; }
};

/// log V_n = log |S| - sum_i log |S_ii| for the sample covariance S of
/// `data` and its diagonal blocks under `part`. Always <= 0 up to rounding.
///
/// Requires p < n (DimensionExceedsSample otherwise). With the projection
/// route the covariance is never formed: each determinant is a product of
/// squared residual norms of the data columns.
double log_vn(const DataMatrix& data, const BlockPartition& part,
              DeterminantRoute route = DeterminantRoute::Projection);

/// mu_n = sum_i (n - p_i - 1/2) log(1 - p_i/n) - (n - p - 1/2) log(1 - p/n)
/// sigma_n^2 = 2 { sum_i log(1 - p_i/n) - log(1 - p/n) }
/// Requires 2 <= p < n and q >= 2 (InvalidDesign otherwise).
BlockTestConstants block_constants(std::size_t n, const BlockPartition& part);

/// Lower-tail test of a block-diagonal covariance: reject when
/// log V_n <= sigma_n u_alpha + mu_n. Regime diagnostics (p/n close to 1,
/// one dominant block, very small blocks) are reported as warnings.
TestReport block_test(const DataMatrix& data, const BlockPartition& part, double alpha,
                      DeterminantRoute route = DeterminantRoute::Projection);

/// Warnings for the asymptotic regime of the block test; empty when the
/// design looks comfortable.
std::vector<std::string> block_assumption_warnings(std::size_t n, const BlockPartition& part);

/// log |R| for the sample correlation matrix R of `data` (no centering).
/// Throws ZeroVariance when a column has (numerically) zero second moment.
double log_det_correlation(const DataMatrix& data);

/// Constants of the diagonal-covariance test:
/// mu = p (n - 3/2) log(1 - 1/n) - (n - p - 1/2) log(1 - p/n)
/// sigma^2 = 2 { p log(1 - 1/n) - log(1 - p/n) }
BlockTestConstants correlation_constants(std::size_t n, std::size_t p);

/// Diagonal-covariance test on log |R|.
TestReport correlation_test(const DataMatrix& data, double alpha);

}  // namespace hdlrt
