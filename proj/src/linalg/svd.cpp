#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

constexpr int max_sweeps = 60;

// Householder triangularization that tolerates rank deficiency. Returns the
// thin q (n x m) and upper triangular r (m x m) with a = q r.
QrFactors householder_unchecked(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    DenseMatrix work = a;
    std::vector<Vector> reflectors(m);
    Vector scratch;

    auto apply = [&](DenseMatrix& target, const Vector& v, std::size_t k) {
        const std::size_t width = target.cols() - k;
        scratch.assign(width, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double* ti = target.row(k + i).data() + k;
            for (std::size_t j = 0; j < width; ++j) scratch[j] += v[i] * ti[j];
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            double* ti = target.row(k + i).data() + k;
            const double f = 2.0 * v[i];
            for (std::size_t j = 0; j < width; ++j) ti[j] -= f * scratch[j];
        }
    };

    for (std::size_t k = 0; k < m; ++k) {
        Vector v(n - k);
        for (std::size_t i = k; i < n; ++i) v[i - k] = work(i, k);
        const double xnorm = norm2(v);
        const double alpha = v[0] > 0.0 ? -xnorm : xnorm;
        v[0] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm > 0.0) {
            for (auto& e : v) e /= vnorm;
            apply(work, v, k);
        } else {
            v.assign(v.size(), 0.0);
        }
        work(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) work(i, k) = 0.0;
        reflectors[k] = std::move(v);
    }

    DenseMatrix q(n, m);
    for (std::size_t i = 0; i < m; ++i) q(i, i) = 1.0;
    for (std::size_t k = m; k-- > 0;) apply(q, reflectors[k], k);

    DenseMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) r(i, j) = work(i, j);
    return {std::move(q), std::move(r)};
}

// Hestenes one-sided Jacobi on the columns of a square or tall matrix.
// cols[j] holds column j; vt[j] holds column j of the right factor.
void jacobi_sweeps(std::vector<Vector>& cols, std::vector<Vector>& vt) {
    const std::size_t k = cols.size();
    const double tol = std::sqrt(static_cast<double>(cols.front().size())) * DBL_EPSILON;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                Vector& ci = cols[i];
                Vector& cj = cols[j];
                const double alpha = dot(ci, ci);
                const double beta = dot(cj, cj);
                const double gamma = dot(ci, cj);
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
                rotated = true;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (std::size_t r = 0; r < ci.size(); ++r) {
                    const double x = ci[r];
                    const double y = cj[r];
                    ci[r] = c * x - s * y;
                    cj[r] = s * x + c * y;
                }
                Vector& vi = vt[i];
                Vector& vj = vt[j];
                for (std::size_t r = 0; r < vi.size(); ++r) {
                    const double x = vi[r];
                    const double y = vj[r];
                    vi[r] = c * x - s * y;
                    vj[r] = s * x + c * y;
                }
            }
        }
        if (!rotated) return;
    }
    throw Error(Errc::no_convergence,
                "svd: Jacobi rotations did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

// Replaces the zero columns of u (n x k) with unit vectors orthogonal to the rest.
void complete_basis(DenseMatrix& u, const std::vector<bool>& filled) {
    const std::size_t n = u.rows();
    std::size_t probe = 0;
    for (std::size_t c = 0; c < u.cols(); ++c) {
        if (filled[c]) continue;
        for (; probe < n; ++probe) {
            Vector v(n, 0.0);
            v[probe] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t o = 0; o < u.cols(); ++o) {
                    if (o == c || (!filled[o] && o > c)) continue;
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) s += u(i, o) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= s * u(i, o);
                }
            }
            const double nv = norm2(v);
            if (nv > 0.5) {
                for (std::size_t i = 0; i < n; ++i) u(i, c) = v[i] / nv;
                ++probe;
                break;
            }
        }
    }
}

SvdFactors svd_tall(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    // Tall inputs are first reduced to their m x m triangular factor.
    DenseMatrix q(1, 1);
    DenseMatrix core = a;
    const bool preconditioned = n > m;
    if (preconditioned) {
        auto f = householder_unchecked(a);
        q = std::move(f.q);
        core = std::move(f.r);
    }

    const std::size_t len = core.rows();
    std::vector<Vector> cols(m);
    std::vector<Vector> vt(m, Vector(m, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        cols[j] = core.col(j);
        vt[j][j] = 1.0;
    }
    jacobi_sweeps(cols, vt);

    Vector norms(m);
    for (std::size_t j = 0; j < m; ++j) norms[j] = norm2(cols[j]);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    DenseMatrix ucore(len, m);
    DenseMatrix v(m, m);
    Vector sigma(m);
    std::vector<bool> filled(m, false);
    for (std::size_t c = 0; c < m; ++c) {
        const std::size_t src = order[c];
        sigma[c] = norms[src];
        for (std::size_t i = 0; i < m; ++i) v(i, c) = vt[src][i];
        if (norms[src] > 0.0) {
            for (std::size_t i = 0; i < len; ++i) ucore(i, c) = cols[src][i] / norms[src];
            filled[c] = true;
        }
    }
    complete_basis(ucore, filled);

    DenseMatrix u = preconditioned ? q * ucore : std::move(ucore);
    return {std::move(u), std::move(sigma), std::move(v)};
}

}  // namespace

SvdFactors svd(const DenseMatrix& a) {
    if (a.rows() >= a.cols()) return svd_tall(a);
    auto f = svd_tall(a.transpose());
    return {std::move(f.v), std::move(f.sigma), std::move(f.u)};
}

}  // namespace pil
