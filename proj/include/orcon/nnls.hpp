#pragma once

#include <Eigen/Core>

namespace orcon {

struct NnlsResult {
  Eigen::VectorXd alpha;  // nonnegative coefficients
  Eigen::VectorXd beta;   // free coefficients
  double residualNorm = 0;
};

/// Minimizes ||target + N alpha + F beta||_2 over alpha >= 0 and free beta.
/// The free block is eliminated by least squares (orthogonal projection) and
/// the nonnegative block is solved by a Lawson-Hanson active-set iteration
/// with lowest-index tie-breaking, so results are deterministic. Empty
/// column blocks are allowed.
NnlsResult nnls_residual(const Eigen::MatrixXd& nonneg, const Eigen::MatrixXd& freeCols,
                         const Eigen::VectorXd& target);

}  // namespace orcon
