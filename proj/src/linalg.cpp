#include "cnsdg/linalg.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cstdio>
#include <ostream>

namespace cnsdg {

SparseMatrix SparseMatrix::from_triplets(int n, const std::vector<Triplet>& triplets) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return SparseMatrix(std::move(m));
}

void SparseMatrix::dump_coordinate(std::ostream& os) const {
    char buf[64];
    for (int r = 0; r < rows(); ++r)
        for (int idx = row_offsets()[r]; idx < row_offsets()[r + 1]; ++idx) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r, col_indices()[idx],
                          values()[idx]);
            os << buf;
        }
}

Vector direct_solve(const SparseMatrix& A, const Vector& b) {
    Eigen::SparseMatrix<double> acol = A.eigen(); // SparseLU wants column-major
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(acol);
    if (lu.info() != Eigen::Success) throw SingularMatrixError("direct_solve: factorization failed");
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SingularMatrixError("direct_solve: solve failed");
    const double bnorm = b.norm();
    if (bnorm > 0.0) {
        Vector r = b - A.eigen() * x;
        if (r.norm() > 1e-12 * bnorm) {
            x += lu.solve(r); // one step of iterative refinement
            r = b - A.eigen() * x;
            if (r.norm() > 1e-12 * bnorm)
                throw LinearSolveError("direct_solve: residual exceeds tolerance");
        }
    }
    return x;
}

Vector krylov_solve(const SparseMatrix& A, const Vector& b, double tol, bool symmetric,
                    const Vector* guess, int* iterations) {
    if (iterations) *iterations = 0;
    if (b.norm() == 0.0) return Vector::Zero(A.rows());

    auto run = [&](auto& solver) -> Vector {
        solver.setTolerance(tol);
        solver.setMaxIterations(std::max(200, 4 * A.rows()));
        solver.compute(A.eigen());
        Vector x;
        if (guess)
            x = solver.solveWithGuess(b, *guess);
        else
            x = solver.solve(b);
        if (iterations) *iterations = static_cast<int>(solver.iterations());
        if (solver.info() != Eigen::Success) {
            // BiCGSTAB can stall short of a strict tolerance; accept if the
            // true residual meets it, otherwise report non-convergence.
            if ((b - A.eigen() * x).norm() <= tol * b.norm()) return x;
            throw NoConvergenceError("krylov_solve: no convergence",
                                     static_cast<int>(solver.iterations()));
        }
        return x;
    };

    if (symmetric) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>,
                                 Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>>
            cg;
        return run(cg);
    }
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double, Eigen::RowMajor>,
                    Eigen::DiagonalPreconditioner<double>>
        bicg;
    return run(bicg);
}

MonotonicityReport mmatrix_sign_check(const SparseMatrix& A) {
    constexpr double tol = 1e-13;
    MonotonicityReport rep;
    rep.diag_positive = true;
    rep.offdiag_nonpositive = true;
    rep.rowsums_nonnegative = true;
    rep.some_rowsum_positive = false;

    const int n = A.rows();
    for (int r = 0; r < n; ++r) {
        double rowsum = 0.0;
        bool saw_diag = false;
        for (int idx = A.row_offsets()[r]; idx < A.row_offsets()[r + 1]; ++idx) {
            const int c = A.col_indices()[idx];
            const double v = A.values()[idx];
            rowsum += v;
            if (c == r) {
                saw_diag = true;
                if (!(v > tol)) rep.diag_positive = false;
            } else if (v > tol) {
                rep.offdiag_nonpositive = false;
            }
        }
        if (!saw_diag) rep.diag_positive = false;
        if (rowsum < -tol) rep.rowsums_nonnegative = false;
        if (rowsum > tol) rep.some_rowsum_positive = true;
    }
    rep.verdict = rep.sign_ok() ? "M-matrix by sign conditions" : "sign conditions not met";
    return rep;
}

double inverse_nonneg_check(const SparseMatrix& A, int n_max) {
    if (A.rows() > n_max)
        throw TooLargeError("inverse_nonneg_check: dimension " + std::to_string(A.rows()) +
                            " exceeds cap " + std::to_string(n_max));
    Eigen::MatrixXd dense(A.eigen());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(dense);
    if (!lu.isInvertible()) throw SingularMatrixError("inverse_nonneg_check: singular matrix");
    return lu.inverse().minCoeff();
}

MonotonicityReport verify_monotonicity(const SparseMatrix& A, int n_max) {
    MonotonicityReport rep = mmatrix_sign_check(A);
    if (A.rows() <= n_max) {
        rep.min_inverse_entry = inverse_nonneg_check(A, n_max);
        rep.inverse_checked = true;
        if (rep.sign_ok())
            rep.verdict = "M-matrix by sign conditions; inverse nonnegativity " +
                          std::string(rep.inverse_nonneg() ? "confirmed" : "VIOLATED");
        else
            rep.verdict = rep.inverse_nonneg() ? "monotone (inverse nonnegative), sign conditions not met"
                                               : "not monotone";
    }
    return rep;
}

} // namespace cnsdg
