#include "robclust/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robclust/simd.hpp"

namespace robclust {

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t c = 0; c < cols_; ++c)
        for (std::size_t r = 0; r < rows_; ++r) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj != 0.0) simd::axpy(bkj, a.col_ptr(k), c.col_ptr(j), a.rows());
        }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: inner dimension mismatch");
    Matrix c(a.rows(), b.rows());
    for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double bjk = b(j, k);
            if (bjk != 0.0) simd::axpy(bjk, a.col_ptr(k), c.col_ptr(j), a.rows());
        }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: inner dimension mismatch");
    Matrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = simd::dot(a.col_ptr(i), b.col_ptr(j), a.rows());
    return c;
}

double frobenius_norm(const Matrix& a) {
    return std::sqrt(simd::dot(a.data().data(), a.data().data(), a.data().size()));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

} // namespace robclust
