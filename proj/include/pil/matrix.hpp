#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pil {

using Vector = std::vector<double>;

// Row-major dense real matrix. Always at least 1x1 and every entry finite;
// the checked constructors reject anything else.
class DenseMatrix {
public:
    // Zero-filled rows x cols.
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> values);
    static DenseMatrix column(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Vector col(std::size_t j) const;

    DenseMatrix transpose() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

// a * x
Vector multiply(const DenseMatrix& a, std::span<const double> x);
// a^T * x
Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x);
// a^T * a, exploiting symmetry of the result.
DenseMatrix gram(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double norm2(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

bool is_symmetric(const DenseMatrix& a, double rel_tol);

}  // namespace pil
