#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

constexpr double symmetry_tolerance = 1e-10;

void require_symmetric(const DenseMatrix& a, const char* who) {
    if (!a.is_square()) throw Error(Errc::dimension_mismatch, std::string(who) + " needs a square matrix");
    if (!is_symmetric(a, symmetry_tolerance))
        throw Error(Errc::not_symmetric, std::string(who) + ": input is not symmetric");
}

// Rotates rows i and i+1 of m over columns [c0, c1]:
//   row_i   <- c*row_i - s*row_{i+1}
//   row_i+1 <- s*row_i + c*row_{i+1}
void rotate_rows(DenseMatrix& m, std::size_t i, double c, double s, std::size_t c0, std::size_t c1) {
    double* a = m.row(i).data();
    double* b = m.row(i + 1).data();
    for (std::size_t j = c0; j <= c1; ++j) {
        const double x = a[j];
        const double y = b[j];
        a[j] = c * x - s * y;
        b[j] = s * x + c * y;
    }
}

void rotate_cols(DenseMatrix& m, std::size_t j, double c, double s, std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i <= r1; ++i) {
        const double x = m(i, j);
        const double y = m(i, j + 1);
        m(i, j) = c * x - s * y;
        m(i, j + 1) = s * x + c * y;
    }
}

// One implicit symmetric QR step with Wilkinson shift on the unreduced block
// [lo, hi] of the tridiagonal t. Rotations are accumulated into the rows of qt.
void implicit_qr_step(DenseMatrix& t, DenseMatrix& qt, std::size_t lo, std::size_t hi) {
    const double a = t(hi - 1, hi - 1);
    const double b = t(hi, hi - 1);
    const double d = (a - t(hi, hi)) / 2.0;
    const double denom = d + std::copysign(std::hypot(d, b), d == 0.0 ? 1.0 : d);
    const double mu = denom == 0.0 ? t(hi, hi) : t(hi, hi) - b * b / denom;

    double x = t(lo, lo) - mu;
    double z = t(lo + 1, lo);
    const std::size_t n = t.rows();
    for (std::size_t k = lo; k < hi; ++k) {
        const double r = std::hypot(x, z);
        const double c = r == 0.0 ? 1.0 : x / r;
        const double s = r == 0.0 ? 0.0 : -z / r;

        const std::size_t c0 = k > lo ? k - 1 : lo;
        const std::size_t c1 = std::min(hi, k + 2);
        rotate_rows(t, k, c, s, c0, c1);
        rotate_cols(t, k, c, s, c0, c1);
        rotate_rows(qt, k, c, s, 0, n - 1);

        if (k > lo) {
            t(k + 1, k - 1) = 0.0;
            t(k - 1, k + 1) = 0.0;
        }
        if (k + 1 < hi) {
            x = t(k + 1, k);
            z = t(k + 2, k);
        }
    }
}

}  // namespace

SimilarityFactors hessenberg_reduce(const DenseMatrix& a) {
    require_symmetric(a, "hessenberg_reduce");
    const std::size_t n = a.rows();
    DenseMatrix t = a;
    DenseMatrix q = DenseMatrix::identity(n);

    Vector v;
    Vector p;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        v.assign(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) v[i] = t(k + 1 + i, k);
        double tail = 0.0;
        for (std::size_t i = 1; i < len; ++i) tail = std::max(tail, std::abs(v[i]));
        if (tail == 0.0) continue;

        const double xnorm = norm2(v);
        const double alpha = v[0] > 0.0 ? -xnorm : xnorm;
        v[0] -= alpha;
        const double vnorm = norm2(v);
        for (auto& e : v) e /= vnorm;

        // Trailing block B <- H B H with H = I - 2 v v^T:
        //   p = B v, w = p - (v^T p) v, B <- B - 2 v w^T - 2 w v^T.
        p.assign(len, 0.0);
        for (std::size_t i = 0; i < len; ++i) {
            const double* bi = t.row(k + 1 + i).data() + k + 1;
            double s = 0.0;
            for (std::size_t j = 0; j < len; ++j) s += bi[j] * v[j];
            p[i] = s;
        }
        const double vp = dot(v, p);
        for (std::size_t i = 0; i < len; ++i) p[i] -= vp * v[i];
        for (std::size_t i = 0; i < len; ++i) {
            double* bi = t.row(k + 1 + i).data() + k + 1;
            const double vi2 = 2.0 * v[i];
            const double wi2 = 2.0 * p[i];
            for (std::size_t j = 0; j < len; ++j) bi[j] -= vi2 * p[j] + wi2 * v[j];
        }
        t(k + 1, k) = alpha;
        t(k, k + 1) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            t(i, k) = 0.0;
            t(k, i) = 0.0;
        }

        // q <- q H on columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            double* qi = q.row(i).data() + k + 1;
            double s = 0.0;
            for (std::size_t j = 0; j < len; ++j) s += qi[j] * v[j];
            s *= 2.0;
            for (std::size_t j = 0; j < len; ++j) qi[j] -= s * v[j];
        }
    }

    // Exact symmetric tridiagonal structure.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j + 1 < i || i + 1 < j) t(i, j) = 0.0;
        }
        if (i + 1 < n) {
            const double off = 0.5 * (t(i + 1, i) + t(i, i + 1));
            t(i + 1, i) = off;
            t(i, i + 1) = off;
        }
    }
    return {std::move(q), std::move(t)};
}

DenseMatrix tridiagonal_solve(const DenseMatrix& t, const DenseMatrix& b) {
    if (!t.is_square() || b.rows() != t.rows())
        throw Error(Errc::dimension_mismatch, "tridiagonal_solve: shape mismatch");
    const std::size_t n = t.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((j + 1 < i || i + 1 < j) && t(i, j) != 0.0)
                throw Error(Errc::invalid_argument, "tridiagonal_solve: matrix is not tridiagonal");

    const double threshold = pivot_tolerance * max_abs(t);
    // Thomas elimination: modified super-diagonal and pivots.
    Vector upper(n, 0.0);
    Vector pivot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double sub = i > 0 ? t(i, i - 1) : 0.0;
        const double piv = t(i, i) - (i > 0 ? sub * upper[i - 1] : 0.0);
        if (std::abs(piv) < threshold || piv == 0.0)
            throw Error(Errc::singular_matrix,
                        "tridiagonal_solve: vanishing pivot at row " + std::to_string(i));
        pivot[i] = piv;
        upper[i] = i + 1 < n ? t(i, i + 1) / piv : 0.0;
    }

    DenseMatrix x = b;
    const std::size_t k = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.row(i);
        const double sub = i > 0 ? t(i, i - 1) : 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double prev = i > 0 ? x(i - 1, c) : 0.0;
            xi[c] = (xi[c] - sub * prev) / pivot[i];
        }
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        auto xi = x.row(i);
        auto xn = x.row(i + 1);
        for (std::size_t c = 0; c < k; ++c) xi[c] -= upper[i] * xn[c];
    }
    return x;
}

SimilarityFactors schur_decompose(const DenseMatrix& a) {
    require_symmetric(a, "schur_decompose");
    const std::size_t n = a.rows();
    auto [q, t] = hessenberg_reduce(a);
    DenseMatrix qt = q.transpose();

    const double anorm = frobenius_norm(a);
    const std::size_t max_steps = 100 * n;
    std::size_t steps = 0;
    std::size_t hi = n - 1;
    while (hi > 0) {
        for (std::size_t i = 0; i < hi; ++i) {
            const double off = std::abs(t(i + 1, i));
            if (off <= DBL_EPSILON * (std::abs(t(i, i)) + std::abs(t(i + 1, i + 1))) ||
                off <= DBL_MIN) {
                t(i + 1, i) = 0.0;
                t(i, i + 1) = 0.0;
            }
        }
        while (hi > 0 && t(hi, hi - 1) == 0.0) --hi;
        if (hi == 0) break;
        std::size_t lo = hi - 1;
        while (lo > 0 && t(lo, lo - 1) != 0.0) --lo;

        if (steps == max_steps) {
            double worst = 0.0;
            for (std::size_t i = 0; i < hi; ++i) worst = std::max(worst, std::abs(t(i + 1, i)));
            if (worst > deflation_tolerance * anorm)
                throw Error(Errc::no_convergence,
                            "schur_decompose: off-diagonal " + std::to_string(worst) + " after " +
                                std::to_string(steps) + " QR steps");
            break;
        }
        implicit_qr_step(t, qt, lo, hi);
        ++steps;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return t(i, i) > t(j, j); });

    DenseMatrix qs(n, n);
    DenseMatrix ts(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        ts(c, c) = t(src, src);
        for (std::size_t i = 0; i < n; ++i) qs(i, c) = qt(src, i);
    }
    return {std::move(qs), std::move(ts)};
}

}  // namespace pil
