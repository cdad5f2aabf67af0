#pragma once

// Test-only helpers: random inputs and reference computations that do not
// go through the library's factorizations.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "pil/matrix.hpp"

namespace pil::test {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& gen, double lo = -1.0,
                                 double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseMatrix m(rows, cols);
    for (auto& x : m.data()) x = dist(gen);
    return m;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

inline DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& gen) {
    DenseMatrix a = random_matrix(n, n, gen);
    DenseMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

// Gauss-Jordan inverse with full pivoting in extended precision.
inline std::vector<std::vector<long double>> reference_inverse(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(2 * n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
        m[i][n + i] = 1.0L;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[p][k])) p = i;
        if (m[p][k] == 0.0L) throw std::runtime_error("reference_inverse: singular");
        std::swap(m[p], m[k]);
        const long double piv = m[k][k];
        for (auto& x : m[k]) x /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const long double f = m[i][k];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<std::vector<long double>> inv(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

// Least-squares weights from the normal equations solved in extended precision.
inline Vector reference_least_squares(const DenseMatrix& h, const Vector& t, double lambda = 0.0) {
    const std::size_t m = h.cols();
    DenseMatrix a(m, m);
    std::vector<long double> rhs(m, 0.0L);
    std::vector<std::vector<long double>> acc(m, std::vector<long double>(m, 0.0L));
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t i = 0; i < m; ++i) {
            rhs[i] += static_cast<long double>(h(r, i)) * t[r];
            for (std::size_t j = 0; j < m; ++j) acc[i][j] += static_cast<long double>(h(r, i)) * h(r, j);
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = static_cast<double>(acc[i][j] + (i == j ? lambda : 0.0L));
    const auto inv = reference_inverse(a);
    Vector w(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        long double s = 0.0L;
        for (std::size_t j = 0; j < m; ++j) s += inv[i][j] * rhs[j];
        w[i] = static_cast<double>(s);
    }
    return w;
}

inline double rel_diff(const Vector& a, const Vector& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

inline double orthogonality_error(const DenseMatrix& q) {
    const DenseMatrix g = q.transpose() * q;
    return frobenius_norm(g - DenseMatrix::identity(g.rows()));
}

// Largest |entry| strictly below the diagonal.
inline double below_diagonal(const DenseMatrix& a, std::size_t band = 0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j + band < i && j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j)));
    return worst;
}

// Largest |entry| outside the tridiagonal band.
inline double outside_tridiagonal(const DenseMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (j + 1 < i || i + 1 < j) worst = std::max(worst, std::abs(a(i, j)));
    return worst;
}

}  // namespace pil::test
