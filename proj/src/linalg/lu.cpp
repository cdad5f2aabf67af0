#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

LuFactors lu_decompose(const DenseMatrix& a) {
    if (!a.is_square()) throw Error(Errc::dimension_mismatch, "lu_decompose needs a square matrix");
    const std::size_t n = a.rows();
    const double threshold = pivot_tolerance * max_abs(a);

    DenseMatrix work = a;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(work(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(work(i, k)) > best) {
                best = std::abs(work(i, k));
                p = i;
            }
        }
        if (best < threshold || best == 0.0)
            throw Error(Errc::singular_matrix,
                        "lu_decompose: pivot " + std::to_string(best) + " in column " +
                            std::to_string(k) + " below tolerance");
        if (p != k) {
            std::swap_ranges(work.row(k).begin(), work.row(k).end(), work.row(p).begin());
            std::swap(perm[k], perm[p]);
        }
        const double pivot = work(k, k);
        auto rk = work.row(k);
        for (std::size_t i = k + 1; i < n; ++i) {
            auto ri = work.row(i);
            const double factor = ri[k] / pivot;
            ri[k] = factor;
            if (factor == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) ri[j] -= factor * rk[j];
        }
    }

    DenseMatrix l = DenseMatrix::identity(n);
    DenseMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = work(i, j);
        for (std::size_t j = i; j < n; ++j) u(i, j) = work(i, j);
    }
    return {std::move(l), std::move(u), std::move(perm)};
}

Vector forward_substitute(const DenseMatrix& l, std::span<const double> t) {
    if (!l.is_square() || t.size() != l.rows())
        throw Error(Errc::dimension_mismatch, "forward_substitute: shape mismatch");
    const std::size_t n = l.rows();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (l(i, i) == 0.0)
            throw Error(Errc::singular_matrix,
                        "forward_substitute: zero diagonal at " + std::to_string(i));
        auto li = l.row(i);
        double s = t[i];
        for (std::size_t j = 0; j < i; ++j) s -= li[j] * y[j];
        y[i] = s / li[i];
    }
    return y;
}

Vector backward_substitute(const DenseMatrix& u, std::span<const double> y) {
    if (!u.is_square() || y.size() != u.rows())
        throw Error(Errc::dimension_mismatch, "backward_substitute: shape mismatch");
    const std::size_t n = u.rows();
    Vector w(n);
    for (std::size_t i = n; i-- > 0;) {
        if (u(i, i) == 0.0)
            throw Error(Errc::singular_matrix,
                        "backward_substitute: zero diagonal at " + std::to_string(i));
        auto ui = u.row(i);
        double s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= ui[j] * w[j];
        w[i] = s / ui[i];
    }
    return w;
}

Vector lu_solve(const LuFactors& f, std::span<const double> t) {
    if (t.size() != f.perm.size()) throw Error(Errc::dimension_mismatch, "lu_solve: length mismatch");
    Vector permuted(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) permuted[i] = t[f.perm[i]];
    return backward_substitute(f.u, forward_substitute(f.l, permuted));
}

DenseMatrix triangular_inverse(const DenseMatrix& r) {
    if (!r.is_square()) throw Error(Errc::dimension_mismatch, "triangular_inverse needs a square matrix");
    const std::size_t n = r.rows();
    const double threshold = pivot_tolerance * max_abs(r);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(r(i, i)) < threshold || r(i, i) == 0.0)
            throw Error(Errc::singular_matrix,
                        "triangular_inverse: diagonal entry " + std::to_string(i) + " vanishes");
    }
    // Column j of the inverse solves r x = e_j; only rows 0..j are nonzero.
    DenseMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i-- > 0;) {
            double s = (i == j) ? 1.0 : 0.0;
            for (std::size_t k = i + 1; k <= j; ++k) s -= r(i, k) * inv(k, j);
            inv(i, j) = s / r(i, i);
        }
    }
    return inv;
}

}  // namespace pil
