#include "robclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "robclust/simd.hpp"

namespace robclust {

void DataSet::validate() const {
    if (n() < 1 || p() < 1) throw DimensionError("dataset needs N >= 1 and p >= 1");
    for (double v : x.data())
        if (!std::isfinite(v)) throw std::invalid_argument("dataset contains a non-finite entry");
    if (truth_labels && truth_labels->size() != n()) throw DimensionError("truth_labels length differs from N");
    if (truth_outliers && truth_outliers->size() != n()) throw DimensionError("truth_outliers length differs from N");
}

DataSet dataset_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionError("no rows");
    const std::size_t p = rows.front().size();
    DataSet d;
    d.x = Matrix(p, rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        if (rows[n].size() != p) throw DimensionError("ragged rows");
        std::copy(rows[n].begin(), rows[n].end(), d.x.col_ptr(n));
    }
    d.validate();
    return d;
}

std::vector<int> Membership::labels() const {
    std::vector<int> out(n());
    for (std::size_t i = 0; i < n(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < this->c(); ++c)
            if (u(i, c) > u(i, best)) best = c;
        out[i] = static_cast<int>(best);
    }
    return out;
}

Membership Membership::from_labels(const std::vector<int>& labels, std::size_t C) {
    Membership m;
    m.u = Matrix(labels.size(), C);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= C) throw DimensionError("label out of range");
        m.u(i, labels[i]) = 1.0;
    }
    return m;
}

OutlierState OutlierState::zeros(std::size_t p, std::size_t n) {
    OutlierState s;
    s.o = Matrix(p, n);
    s.norms.assign(n, 0.0);
    return s;
}

OutlierState OutlierState::from_matrix(Matrix o) {
    OutlierState s;
    s.o = std::move(o);
    s.refresh_norms();
    return s;
}

void OutlierState::refresh_norms() {
    norms.resize(o.cols());
    for (std::size_t n = 0; n < o.cols(); ++n) norms[n] = std::sqrt(simd::dot(o.col_ptr(n), o.col_ptr(n), o.rows()));
}

std::size_t OutlierState::count() const {
    return static_cast<std::size_t>(std::count_if(norms.begin(), norms.end(), [](double v) { return v > 0.0; }));
}

std::vector<bool> OutlierState::flagged() const {
    std::vector<bool> f(norms.size());
    for (std::size_t n = 0; n < norms.size(); ++n) f[n] = norms[n] > 0.0;
    return f;
}

void FitConfig::validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
    if (eps_stop && !(*eps_stop > 0.0)) throw std::invalid_argument("eps_stop must be > 0");
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("q must be >= 1");
    if (reweight && reweight->epsilon && !(*reweight->epsilon > 0.0))
        throw std::invalid_argument("reweight epsilon must be > 0");
}

std::vector<bool> FitResult::flagged() const {
    std::vector<bool> f(outlier_norms.size());
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = outlier_norms[n] > 0.0;
    return f;
}

std::size_t FitResult::outlier_count() const {
    return static_cast<std::size_t>(
        std::count_if(outlier_norms.begin(), outlier_norms.end(), [](double v) { return v > 0.0; }));
}

namespace {

void check_shapes(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o) {
    if (u.n() != x.n() || m.m.rows() != x.p() || u.c() != m.m.cols() || o.o.rows() != x.p() || o.o.cols() != x.n() ||
        o.norms.size() != x.n())
        throw DimensionError("inconsistent dimensions");
}

} // namespace

double rkm_cost(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o, double lambda) {
    check_shapes(x, u, m, o);
    const std::size_t p = x.p();
    double total = 0.0;
    for (std::size_t n = 0; n < x.n(); ++n) {
        // lambda = inf with o = 0 contributes nothing
        const double pen = o.norms[n] > 0.0 ? lambda * o.norms[n] : 0.0;
        for (std::size_t c = 0; c < u.c(); ++c) {
            const double w = u.u(n, c);
            if (w == 0.0) continue;
            const double wq = u.q == 1.0 ? w : std::pow(w, u.q);
            total += wq * (simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(c), o.o.col_ptr(n), p) + pen);
        }
    }
    return total;
}

double rpc_objective(const DataSet& x, const MixtureParams& params, double lambda) {
    if (!(params.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    const std::size_t C = params.pi.size();
    if (params.m.m.cols() != C || params.m.m.rows() != x.p() || params.o.o.rows() != x.p() ||
        params.o.o.cols() != x.n())
        throw DimensionError("inconsistent dimensions");
    const std::size_t p = x.p();
    const double s2 = params.sigma * params.sigma;
    const double log_norm = -0.5 * static_cast<double>(p) * std::log(2.0 * std::numbers::pi * s2);
    std::vector<double> lp(C);
    double nll = 0.0;
    double pen = 0.0;
    for (std::size_t n = 0; n < x.n(); ++n) {
        double mx = -kInf;
        for (std::size_t c = 0; c < C; ++c) {
            const double d = simd::squared_distance3(x.x.col_ptr(n), params.m.m.col_ptr(c), params.o.o.col_ptr(n), p);
            lp[c] = std::log(params.pi[c]) + log_norm - d / (2.0 * s2);
            mx = std::max(mx, lp[c]);
        }
        double acc = 0.0;
        for (std::size_t c = 0; c < C; ++c) acc += std::exp(lp[c] - mx);
        nll -= mx + std::log(acc);
        if (params.o.norms[n] > 0.0) pen += params.o.norms[n];
    }
    return nll + (pen > 0.0 ? lambda * pen / params.sigma : 0.0);
}

std::vector<Violation> validate_membership(const Membership& u, double tol) {
    std::vector<Violation> out;
    const bool hard = u.mode == MembershipMode::hard;
    for (std::size_t n = 0; n < u.n(); ++n) {
        double s = 0.0;
        bool box = true;
        bool binary = true;
        for (std::size_t c = 0; c < u.c(); ++c) {
            const double v = u.u(n, c);
            s += v;
            if (!(v >= -tol && v <= 1.0 + tol)) box = false;
            if (v != 0.0 && v != 1.0) binary = false;
        }
        if (!box) out.push_back({Constraint::c4_box, n, false});
        if (hard && !binary) out.push_back({Constraint::c1_binary, n, false});
        if (!(std::abs(s - 1.0) <= tol)) out.push_back({Constraint::c3_row_sum, n, false});
    }
    for (std::size_t c = 0; c < u.c(); ++c) {
        bool any = false;
        for (std::size_t n = 0; n < u.n() && !any; ++n) any = u.u(n, c) > 0.0;
        if (!any) out.push_back({Constraint::c2_nonempty, c, true});
    }
    return out;
}

} // namespace robclust
