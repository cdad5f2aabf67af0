#include <cmath>
#include <string>

#include "pil/error.hpp"
#include "pil/linalg.hpp"

namespace pil {

namespace {

void require_tall(const DenseMatrix& a, const char* who) {
    if (a.rows() < a.cols())
        throw Error(Errc::dimension_mismatch,
                    std::string(who) + " needs rows >= cols, got " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()));
}

[[noreturn]] void rank_deficient(const char* who, std::size_t column) {
    throw Error(Errc::rank_deficient,
                std::string(who) + ": column " + std::to_string(column) +
                    " is numerically dependent on the previous ones");
}

// Reflector I - 2 v v^T acting on rows k.. of a, columns col0.. .
void apply_reflector(DenseMatrix& a, std::span<const double> v, std::size_t k, std::size_t col0,
                     Vector& scratch) {
    const std::size_t width = a.cols() - col0;
    scratch.assign(width, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        const double* ai = a.row(k + i).data() + col0;
        for (std::size_t j = 0; j < width; ++j) scratch[j] += vi * ai[j];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = 2.0 * v[i];
        if (f == 0.0) continue;
        double* ai = a.row(k + i).data() + col0;
        for (std::size_t j = 0; j < width; ++j) ai[j] -= f * scratch[j];
    }
}

}  // namespace

QrFactors mgs_qr(const DenseMatrix& a) {
    require_tall(a, "mgs_qr");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    // Columns stored contiguously; q[j] is the j-th orthonormal column.
    std::vector<Vector> q(m);
    DenseMatrix r(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        Vector v = a.col(j);
        const double initial = norm2(v);
        for (std::size_t i = 0; i < j; ++i) {
            const double rij = dot(q[i], v);
            r(i, j) = rij;
            for (std::size_t k = 0; k < n; ++k) v[k] -= rij * q[i][k];
        }
        const double rjj = norm2(v);
        if (initial == 0.0 || rjj < pivot_tolerance * initial) rank_deficient("mgs_qr", j);
        r(j, j) = rjj;
        for (auto& x : v) x /= rjj;
        q[j] = std::move(v);
    }

    DenseMatrix qm(n, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i) qm(i, j) = q[j][i];
    return {std::move(qm), std::move(r)};
}

QrFactors householder_qr(const DenseMatrix& a) {
    require_tall(a, "householder_qr");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    Vector initial(m);
    for (std::size_t j = 0; j < m; ++j) initial[j] = norm2(a.col(j));

    DenseMatrix work = a;
    std::vector<Vector> reflectors(m);
    Vector scratch;
    for (std::size_t k = 0; k < m; ++k) {
        Vector x(n - k);
        for (std::size_t i = k; i < n; ++i) x[i - k] = work(i, k);
        const double xnorm = norm2(x);
        if (initial[k] == 0.0 || xnorm < pivot_tolerance * initial[k]) rank_deficient("householder_qr", k);

        const double alpha = x[0] > 0.0 ? -xnorm : xnorm;
        Vector v = std::move(x);
        v[0] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm > 0.0) {
            for (auto& e : v) e /= vnorm;
            apply_reflector(work, v, k, k, scratch);
        } else {
            v.assign(v.size(), 0.0);
        }
        work(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) work(i, k) = 0.0;
        reflectors[k] = std::move(v);
    }

    // Q = H_0 H_1 ... H_{m-1} applied to the first m columns of the identity.
    DenseMatrix q(n, m);
    for (std::size_t i = 0; i < m; ++i) q(i, i) = 1.0;
    for (std::size_t k = m; k-- > 0;) apply_reflector(q, reflectors[k], k, k, scratch);

    DenseMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) r(i, j) = work(i, j);

    // Non-negative diagonal of r.
    for (std::size_t k = 0; k < m; ++k) {
        if (r(k, k) >= 0.0) continue;
        for (std::size_t j = k; j < m; ++j) r(k, j) = -r(k, j);
        for (std::size_t i = 0; i < n; ++i) q(i, k) = -q(i, k);
    }
    return {std::move(q), std::move(r)};
}

}  // namespace pil
