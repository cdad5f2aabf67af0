#include "pil/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pil/error.hpp"

namespace pil {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        throw Error(Errc::invalid_argument, "matrix dimensions must be at least 1x1");
}

void check_finite(std::span<const double> data) {
    for (std::size_t k = 0; k < data.size(); ++k) {
        if (!std::isfinite(data[k]))
            throw Error(Errc::invalid_argument,
                        "non-finite matrix entry at flat index " + std::to_string(k));
    }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Errc::dimension_mismatch, "matrix shapes differ");
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
    check_shape(rows, cols);
    data_.assign(rows * cols, 0.0);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_shape(rows, cols);
    if (data_.size() != rows * cols)
        throw Error(Errc::dimension_mismatch,
                    "matrix data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(rows) + "x" + std::to_string(cols));
    check_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    check_shape(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(Errc::dimension_mismatch, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
    check_finite(values);
    DenseMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
    return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Vector DenseMatrix::col(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(Errc::dimension_mismatch,
                    "cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " by " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < bk.size(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b);
    DenseMatrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < cd.size(); ++k) cd[k] += bd[k];
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b);
    DenseMatrix c = a;
    auto cd = c.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < cd.size(); ++k) cd[k] -= bd[k];
    return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (auto& x : c.data()) x *= s;
    return c;
}

Vector multiply(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw Error(Errc::dimension_mismatch, "matrix-vector size mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.rows()) throw Error(Errc::dimension_mismatch, "matrix-vector size mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < ai.size(); ++j) y[j] += ai[j] * xi;
    }
    return y;
}

DenseMatrix gram(const DenseMatrix& a) {
    const std::size_t m = a.cols();
    DenseMatrix g(m, m);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto ar = a.row(r);
        for (std::size_t i = 0; i < m; ++i) {
            const double ari = ar[i];
            if (ari == 0.0) continue;
            double* gi = g.row(i).data();
            for (std::size_t j = i; j < m; ++j) gi[j] += ari * ar[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.data()); }

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double norm2(std::span<const double> x) {
    // Scaled accumulation avoids overflow on large entries.
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (double v : x) {
        const double s = v / scale;
        sum += s * s;
    }
    return scale * std::sqrt(sum);
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

bool is_symmetric(const DenseMatrix& a, double rel_tol) {
    if (!a.is_square()) return false;
    const double tol = rel_tol * std::max(max_abs(a), 1e-300);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

}  // namespace pil
