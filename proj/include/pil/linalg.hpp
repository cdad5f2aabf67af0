#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pil/matrix.hpp"
#include "pil/solver_kind.hpp"

namespace pil {

// Relative thresholds shared by the factorizations.
inline constexpr double pivot_tolerance = 1e-12;
inline constexpr double deflation_tolerance = 1e-12;

struct LuFactors {
    DenseMatrix l;                  // unit lower triangular
    DenseMatrix u;                  // upper triangular
    std::vector<std::size_t> perm;  // row perm[i] of the input is row i of l*u
};

struct QrFactors {
    DenseMatrix q;  // n x m, orthonormal columns
    DenseMatrix r;  // m x m, upper triangular, non-negative diagonal
};

// a = q * t * q^T with q orthogonal.
struct SimilarityFactors {
    DenseMatrix q;
    DenseMatrix t;
};

struct SvdFactors {
    DenseMatrix u;  // n x k, orthonormal columns
    Vector sigma;   // descending, non-negative
    DenseMatrix v;  // m x k, orthonormal columns
};

// Partial pivoting (max-magnitude pivot per column). Throws
// Errc::singular_matrix when a pivot drops below pivot_tolerance * max|a|.
LuFactors lu_decompose(const DenseMatrix& a);

// y_i = (t_i - sum_{j<i} L_ij y_j) / L_ii
Vector forward_substitute(const DenseMatrix& l, std::span<const double> t);
// w_i = (y_i - sum_{j>i} U_ij w_j) / U_ii
Vector backward_substitute(const DenseMatrix& u, std::span<const double> y);

// Reorders t by perm, then runs the forward and backward sweeps.
Vector lu_solve(const LuFactors& f, std::span<const double> t);

// Thin QR by modified Gram-Schmidt. Requires rows >= cols.
QrFactors mgs_qr(const DenseMatrix& a);
// Thin QR from Householder reflectors. Requires rows >= cols.
QrFactors householder_qr(const DenseMatrix& a);

// Orthogonal reduction of a symmetric matrix to symmetric tridiagonal form.
SimilarityFactors hessenberg_reduce(const DenseMatrix& a);

// Symmetric Schur form: t is diagonal with eigenvalues in descending order.
SimilarityFactors schur_decompose(const DenseMatrix& a);

// Thin SVD by one-sided Jacobi rotations.
SvdFactors svd(const DenseMatrix& a);

// Inverse of an upper triangular matrix, column by column.
DenseMatrix triangular_inverse(const DenseMatrix& r);

// Solves t * x = b for every column of b. t must be tridiagonal.
DenseMatrix tridiagonal_solve(const DenseMatrix& t, const DenseMatrix& b);

// Flop model of each solver for an m x n problem, floored to an integer.
// Formulas are used verbatim; nothing is assumed about which of m or n is
// larger, so Householder can come out negative when m < n/3.
std::int64_t flop_estimate(SolverKind method, std::int64_t m, std::int64_t n);

}  // namespace pil
