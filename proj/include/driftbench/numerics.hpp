#pragma once

#include <Eigen/Dense>

namespace driftbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest jitter cholesky_psd will add to the diagonal before giving up.
inline constexpr double kMaxJitter = 1e-4;

/// Returns (M + M^T) / 2. Throws DimensionError for a non-square input.
Matrix symmetrize(const Matrix& M);

/// Lower-triangular L with L L^T = M + j I.
///
/// Positive semidefinite (singular) inputs are accepted: a zero pivot
/// yields a zero column instead of a failure. If the factorization fails
/// or does not reconstruct M, j walks the ladder {0, jitter, 10 jitter, ...}
/// up to kMaxJitter. A jitter of zero disables the ladder.
///
/// Throws NumericalError when M is indefinite beyond the cap; the message
/// carries the smallest eigenvalue of M.
Matrix cholesky_psd(const Matrix& M, double jitter = 1e-12);

/// Inverse of a symmetric positive-definite matrix, symmetrized.
/// Throws NumericalError if M is singular or indefinite.
Matrix sym_inverse(const Matrix& M);

/// True iff every eigenvalue of the symmetric matrix M is >= -tol.
bool is_psd(const Matrix& M, double tol);

/// Smallest eigenvalue of the symmetrized M.
double min_eigenvalue(const Matrix& M);

/// Throws NumericalError naming `what` if M has a NaN or Inf entry.
void require_finite(const Matrix& M, const char* what);

}  // namespace driftbench
