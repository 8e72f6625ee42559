/// @file linalg.hpp
/// @brief Sparse storage, direct and iterative solvers, and the M-matrix /
/// inverse-nonnegativity verification utilities.

#ifndef CNSDG_LINALG_HPP
#define CNSDG_LINALG_HPP

#include "cnsdg/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <string>
#include <vector>

namespace cnsdg {

using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;

/// Square row-compressed sparse matrix. Column indices are sorted per row and
/// explicit zeros are pruned on finalize.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(Eigen::SparseMatrix<double, Eigen::RowMajor> m) : m_(std::move(m)) {
        m_.makeCompressed();
    }

    static SparseMatrix from_triplets(int n, const std::vector<Triplet>& triplets);

    int rows() const { return static_cast<int>(m_.rows()); }
    int nnz() const { return static_cast<int>(m_.nonZeros()); }

    const int* row_offsets() const { return m_.outerIndexPtr(); }
    const int* col_indices() const { return m_.innerIndexPtr(); }
    const double* values() const { return m_.valuePtr(); }
    double* values() { return m_.valuePtr(); }

    /// Drops stored entries that are exactly zero.
    void prune() { m_.prune(0.0); }

    const Eigen::SparseMatrix<double, Eigen::RowMajor>& eigen() const { return m_; }
    Eigen::SparseMatrix<double, Eigen::RowMajor>& eigen() { return m_; }

    Vector multiply(const Vector& x) const { return m_ * x; }

    /// Coordinate text dump: "row col value" per line, 17 significant digits.
    void dump_coordinate(std::ostream& os) const;

private:
    Eigen::SparseMatrix<double, Eigen::RowMajor> m_;
};

struct MonotonicityReport {
    bool diag_positive = false;
    bool offdiag_nonpositive = false;
    bool rowsums_nonnegative = false;
    bool some_rowsum_positive = false;
    bool inverse_checked = false;
    double min_inverse_entry = 0.0;
    std::string verdict;

    bool sign_ok() const {
        return diag_positive && offdiag_nonpositive && rowsums_nonnegative &&
               some_rowsum_positive;
    }
    bool inverse_nonneg() const { return inverse_checked && min_inverse_entry >= -1e-11; }
};

/// Sparse LU solve; residual is verified to 1e-12 * ||b|| (one refinement
/// step is applied if needed). Throws SingularMatrixError.
Vector direct_solve(const SparseMatrix& A, const Vector& b);

/// Diagonal-preconditioned Krylov solve: conjugate gradients when symmetric,
/// BiCGSTAB otherwise, to relative residual tol. Throws NoConvergenceError.
Vector krylov_solve(const SparseMatrix& A, const Vector& b, double tol, bool symmetric,
                    const Vector* guess = nullptr, int* iterations = nullptr);

/// Lemma-style sign conditions with tolerance 1e-13 on the comparisons.
MonotonicityReport mmatrix_sign_check(const SparseMatrix& A);

/// Dense inversion; returns the minimum entry of A^{-1}.
/// Throws TooLargeError when rows() > n_max and SingularMatrixError.
double inverse_nonneg_check(const SparseMatrix& A, int n_max = 2000);

/// Runs the sign check and, when the dimension permits, the inverse check.
MonotonicityReport verify_monotonicity(const SparseMatrix& A, int n_max = 2000);

} // namespace cnsdg

#endif
