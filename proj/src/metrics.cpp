#include "robclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "robclust/simd.hpp"

namespace robclust::metrics {
namespace {

using i128 = __int128;

i128 pairs(i128 n) { return n * (n - 1) / 2; }

} // namespace

double ari(const std::vector<int>& a, const std::vector<int>& b, const std::vector<bool>& exclude) {
    if (a.size() != b.size()) throw DimensionError("partitions differ in length");
    if (!exclude.empty() && exclude.size() != a.size()) throw DimensionError("exclusion mask length differs");
    std::map<std::pair<int, int>, long long> cells;
    std::map<int, long long> rows, cols;
    long long n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!exclude.empty() && exclude[i]) continue;
        ++cells[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
        ++n;
    }
    if (n < 2) throw std::invalid_argument("ARI needs at least two points");
    i128 index = 0, sa = 0, sb = 0;
    for (const auto& [k, v] : cells) index += pairs(v);
    for (const auto& [k, v] : rows) sa += pairs(v);
    for (const auto& [k, v] : cols) sb += pairs(v);
    const i128 total = pairs(n);
    // (index - sa sb / T) / ((sa + sb)/2 - sa sb / T), scaled by 2T
    const i128 num = 2 * index * total - 2 * sa * sb;
    const i128 den = (sa + sb) * total - 2 * sa * sb;
    if (den == 0) return 1.0;
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

std::vector<std::size_t> hungarian(const Matrix& cost) {
    const std::size_t n = cost.rows();
    if (cost.cols() != n) throw DimensionError("assignment cost must be square");
    // potentials formulation, 1-based with a sentinel column 0
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

double rmse_centers(const Matrix& est, const Matrix& truth) {
    if (est.rows() != truth.rows() || est.cols() != truth.cols()) throw DimensionError("centroid shapes differ");
    const std::size_t C = est.cols();
    if (C == 0) throw DimensionError("no centroids");
    Matrix d(C, C);
    for (std::size_t i = 0; i < C; ++i)
        for (std::size_t j = 0; j < C; ++j) d(i, j) = simd::squared_distance(est.col_ptr(i), truth.col_ptr(j), est.rows());
    double best = kInf;
    if (C <= 8) {
        std::vector<std::size_t> perm(C);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            double s = 0.0;
            for (std::size_t i = 0; i < C; ++i) s += d(i, perm[i]);
            best = std::min(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        const auto assign = hungarian(d);
        best = 0.0;
        for (std::size_t i = 0; i < C; ++i) best += d(i, assign[i]);
    }
    return std::sqrt(best / static_cast<double>(C));
}

PRF outlier_prf(const std::vector<bool>& flagged, const std::vector<bool>& truth) {
    if (flagged.size() != truth.size()) throw DimensionError("flag vectors differ in length");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < flagged.size(); ++i) {
        if (flagged[i] && truth[i]) ++tp;
        else if (flagged[i]) ++fp;
        else if (truth[i]) ++fn;
    }
    PRF r;
    r.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    r.recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

} // namespace robclust::metrics
