#include "robclust/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace robclust {

SymmetricEigen eigen_symmetric(const Matrix& input, int max_sweeps) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw std::invalid_argument("eigen_symmetric: matrix not square");
    Matrix a = input;
    Matrix v = Matrix::identity(n);

    double total = 0.0;
    for (double x : a.data()) total += x * x;
    const double tol = 1e-30 * std::max(total, 1e-300);

    bool done = n < 2;
    for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
        double off = 0.0;
        for (std::size_t q = 1; q < n; ++q)
            for (std::size_t p = 0; p < q; ++p) off += a(p, q) * a(p, q);
        if (off <= tol) {
            done = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!done) {
        double off = 0.0;
        for (std::size_t q = 1; q < n; ++q)
            for (std::size_t p = 0; p < q; ++p) off += a(p, q) * a(p, q);
        if (off > 1e-20 * std::max(total, 1e-300)) throw std::runtime_error("eigen_symmetric: Jacobi did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]);
        std::copy(v.col_ptr(order[i]), v.col_ptr(order[i]) + n, out.vectors.col_ptr(i));
    }
    return out;
}

} // namespace robclust
