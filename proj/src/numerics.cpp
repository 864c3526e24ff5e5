#include "driftbench/numerics.hpp"

#include "driftbench/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace driftbench {

namespace {

void require_square(const Matrix& M, const char* op)
{
    if (M.rows() != M.cols()) {
        std::ostringstream msg;
        msg << op << ": expected a square matrix, got " << M.rows() << "x" << M.cols();
        throw DimensionError(msg.str());
    }
}

void require_symmetric(const Matrix& M, const char* op)
{
    require_square(M, op);
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw NumericalError(std::string(op) + ": matrix is not symmetric");
    }
}

// Outer-product Cholesky that tolerates zero pivots. Returns false on a
// clearly negative pivot.
bool semidefinite_cholesky(const Matrix& A, Matrix& L)
{
    const Eigen::Index n = A.rows();
    L.setZero(n, n);
    const double pivot_tol =
        64.0 * std::numeric_limits<double>::epsilon() * (1.0 + A.diagonal().cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < n; ++k) {
        double d = A(k, k) - L.row(k).head(k).squaredNorm();
        if (d < -pivot_tol) {
            return false;
        }
        if (d <= pivot_tol) {
            continue;  // zero column
        }
        const double lkk = std::sqrt(d);
        L(k, k) = lkk;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            L(i, k) = (A(i, k) - L.row(i).head(k).dot(L.row(k).head(k))) / lkk;
        }
    }
    return L.allFinite();
}

}  // namespace

Matrix symmetrize(const Matrix& M)
{
    require_square(M, "symmetrize");
    return 0.5 * (M + M.transpose());
}

double min_eigenvalue(const Matrix& M)
{
    require_square(M, "min_eigenvalue");
    if (M.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(M), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_psd(const Matrix& M, double tol)
{
    if (!M.allFinite()) {
        return false;
    }
    return min_eigenvalue(M) >= -tol;
}

Matrix cholesky_psd(const Matrix& M, double jitter)
{
    require_symmetric(M, "cholesky_psd");
    require_finite(M, "cholesky_psd input");
    const Eigen::Index n = M.rows();
    const Matrix S = symmetrize(M);
    const double tol = 1e-8 * (1.0 + S.norm());
    const Matrix I = Matrix::Identity(n, n);

    Matrix L;
    double j = 0.0;
    while (true) {
        const Matrix target = S + j * I;
        if (semidefinite_cholesky(target, L) &&
            (L * L.transpose() - target).cwiseAbs().maxCoeff() <= tol) {
            return L;
        }
        if (jitter <= 0.0) {
            break;
        }
        j = (j == 0.0) ? jitter : 10.0 * j;
        if (j > kMaxJitter * (1.0 + 1e-12)) {
            break;
        }
    }
    std::ostringstream msg;
    msg << "cholesky_psd: matrix is indefinite beyond jitter cap " << kMaxJitter
        << " (smallest eigenvalue " << min_eigenvalue(S) << ")";
    throw NumericalError(msg.str());
}

Matrix sym_inverse(const Matrix& M)
{
    require_symmetric(M, "sym_inverse");
    require_finite(M, "sym_inverse input");
    const Matrix S = symmetrize(M);
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "sym_inverse: matrix is not positive definite (smallest eigenvalue "
            << min_eigenvalue(S) << ")";
        throw NumericalError(msg.str());
    }
    const Eigen::Index n = S.rows();
    Matrix inv = symmetrize(llt.solve(Matrix::Identity(n, n)));
    if (!inv.allFinite()) {
        throw NumericalError("sym_inverse: matrix is numerically singular");
    }
    return inv;
}

void require_finite(const Matrix& M, const char* what)
{
    if (!M.allFinite()) {
        throw NumericalError(std::string(what) + ": non-finite entry");
    }
}

}  // namespace driftbench
