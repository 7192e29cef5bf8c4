#pragma once

// Test-side generators and independent oracles. Nothing here calls into the
// library's update code; oracles are direct (often long double) evaluations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "robclust/core.hpp"

namespace testing {

using robclust::DataSet;
using robclust::Matrix;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(rng); }
    std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    }

    Matrix matrix(std::size_t r, std::size_t c, double sd = 1.0) {
        Matrix m(r, c);
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i) m(i, j) = normal(sd);
        return m;
    }

    DataSet data(std::size_t p, std::size_t n, double sd = 1.0) {
        DataSet d;
        d.x = matrix(p, n, sd);
        return d;
    }

    // Gaussian blobs around C random centers, plus a few far points.
    DataSet blobs(std::size_t p, std::size_t C, std::size_t per, std::size_t far, double spread = 6.0) {
        Matrix centers = matrix(p, C, spread);
        DataSet d;
        d.x = Matrix(p, C * per + far);
        std::size_t col = 0;
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t k = 0; k < per; ++k, ++col)
                for (std::size_t i = 0; i < p; ++i) d.x(i, col) = centers(i, c) + normal(0.5);
        for (std::size_t k = 0; k < far; ++k, ++col)
            for (std::size_t i = 0; i < p; ++i) d.x(i, col) = uniform(-4 * spread, 4 * spread);
        return d;
    }

    // Random row-stochastic matrix with strictly positive entries.
    Matrix stochastic(std::size_t n, std::size_t c) {
        Matrix u(n, c);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < c; ++j) s += (u(i, j) = uniform(0.05, 1.0));
            for (std::size_t j = 0; j < c; ++j) u(i, j) /= s;
        }
        return u;
    }

    std::vector<int> labels(std::size_t n, int k) {
        std::vector<int> l(n);
        for (auto& v : l) v = static_cast<int>(index(0, static_cast<std::size_t>(k - 1)));
        return l;
    }
};

// Golden-section minimizer of a unimodal function on [a, b].
inline long double golden_min(const std::function<long double(long double)>& f, long double a, long double b,
                              int iters = 200) {
    const long double g = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double c = b - g * (b - a), d = a + g * (b - a);
    long double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2;
}

inline long double sq_norm(const std::vector<long double>& v) {
    long double s = 0;
    for (auto x : v) s += x * x;
    return s;
}

// Weighted-mean residual, evaluated directly in long double.
inline std::vector<long double> residual_ld(const DataSet& x, const Matrix& m, const Matrix& u, double q,
                                            std::size_t n) {
    const std::size_t p = x.p(), C = m.cols();
    std::vector<long double> r(p, 0.0L);
    long double w = 0;
    for (std::size_t c = 0; c < C; ++c) {
        const long double uq = std::pow(static_cast<long double>(u(n, c)), static_cast<long double>(q));
        w += uq;
        for (std::size_t i = 0; i < p; ++i) r[i] += uq * (static_cast<long double>(x.x(i, n)) - m(i, c));
    }
    for (auto& v : r) v /= w;
    return r;
}

// Direct two-loop evaluation of the robust k-means objective.
inline long double rkm_cost_ld(const DataSet& x, const Matrix& u, double q, const Matrix& m, const Matrix& o,
                               double lambda) {
    long double s = 0;
    for (std::size_t n = 0; n < x.n(); ++n) {
        long double on = 0;
        for (std::size_t i = 0; i < x.p(); ++i) on += static_cast<long double>(o(i, n)) * o(i, n);
        on = std::sqrt(on);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            long double d = 0;
            for (std::size_t i = 0; i < x.p(); ++i) {
                const long double e = static_cast<long double>(x.x(i, n)) - m(i, c) - o(i, n);
                d += e * e;
            }
            const long double uq = std::pow(static_cast<long double>(u(n, c)), static_cast<long double>(q));
            s += uq * d + (on > 0 ? uq * lambda * on : 0.0L);
        }
    }
    return s;
}

// Spherical mixture negative log-likelihood plus penalty, long double.
inline long double rpc_objective_ld(const DataSet& x, const std::vector<double>& pi, const Matrix& m, double sigma,
                                    const Matrix& o, double lambda) {
    const long double pi_ld = 3.141592653589793238462643383279502884L;
    const std::size_t p = x.p();
    long double nll = 0, pen = 0;
    for (std::size_t n = 0; n < x.n(); ++n) {
        long double lik = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            long double d = 0;
            for (std::size_t i = 0; i < p; ++i) {
                const long double e = static_cast<long double>(x.x(i, n)) - m(i, c) - o(i, n);
                d += e * e;
            }
            const long double s2 = static_cast<long double>(sigma) * sigma;
            lik += pi[c] * std::exp(-d / (2 * s2)) / std::pow(2 * pi_ld * s2, p / 2.0L);
        }
        nll -= std::log(lik);
        long double on = 0;
        for (std::size_t i = 0; i < p; ++i) on += static_cast<long double>(o(i, n)) * o(i, n);
        pen += std::sqrt(on);
    }
    return nll + (lambda > 0 ? lambda * pen / sigma : 0.0L);
}

// ARI by enumerating every pair of points.
inline double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    long double both = 0, sa = 0, sb = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool ia = a[i] == a[j], ib = b[i] == b[j];
            both += ia && ib;
            sa += ia;
            sb += ib;
            total += 1;
        }
    if (total == 0) return 1.0;
    const long double expected = sa * sb / total;
    const long double maxv = (sa + sb) / 2;
    if (maxv == expected) return 1.0;
    return static_cast<double>((both - expected) / (maxv - expected));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace testing
