#include "robclust/rkm.hpp"

#include <algorithm>
#include <cmath>

#include "robclust/simd.hpp"

namespace robclust::rkm {
namespace {

inline double powq(double u, double q) { return q == 1.0 ? u : (u == 0.0 ? 0.0 : std::pow(u, q)); }

// Give each empty cluster the point farthest from its own compensated centroid,
// taken from a cluster that keeps at least one other member.
int repair_empty(Membership& u, const DataSet& x, const Centroids& m, const OutlierState& o) {
    int repairs = 0;
    const std::size_t C = u.c();
    for (std::size_t c = 0; c < C; ++c) {
        double mass = 0.0;
        for (std::size_t n = 0; n < u.n(); ++n) mass += u.u(n, c);
        if (mass > 0.0) continue;
        std::vector<int> labels = u.labels();
        std::vector<std::size_t> sizes(C, 0);
        for (int l : labels) ++sizes[l];
        double best = -1.0;
        std::size_t pick = u.n();
        for (std::size_t n = 0; n < u.n(); ++n) {
            if (sizes[labels[n]] < 2) continue;
            const double d = simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(labels[n]), o.o.col_ptr(n), x.p());
            if (d > best) {
                best = d;
                pick = n;
            }
        }
        if (pick == u.n()) throw EmptyClusterError(c);
        for (std::size_t k = 0; k < C; ++k) u.u(pick, k) = 0.0;
        u.u(pick, c) = 1.0;
        ++repairs;
    }
    return repairs;
}

double max_norm(const Residuals& r) {
    double best = 0.0;
    for (std::size_t n = 0; n < r.r.cols(); ++n)
        best = std::max(best, std::sqrt(simd::dot(r.r.col_ptr(n), r.r.col_ptr(n), r.r.rows())));
    return best;
}

std::vector<double> log_penalty(const OutlierState& o, double lambda, double eps) {
    std::vector<double> pen(o.norms.size(), 0.0);
    for (std::size_t n = 0; n < pen.size(); ++n)
        if (o.norms[n] > 0.0) pen[n] = lambda * std::log1p(o.norms[n] / eps);
    return pen;
}

std::vector<double> l2_penalty(const OutlierState& o, double lambda) {
    std::vector<double> pen(o.norms.size(), 0.0);
    for (std::size_t n = 0; n < pen.size(); ++n)
        if (o.norms[n] > 0.0) pen[n] = lambda * o.norms[n];
    return pen;
}

double cost_with_penalty(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o,
                         const std::vector<double>& pen) {
    double total = 0.0;
    for (std::size_t n = 0; n < x.n(); ++n)
        for (std::size_t c = 0; c < u.c(); ++c) {
            const double w = powq(u.u(n, c), u.q);
            if (w == 0.0) continue;
            total += w * (simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(c), o.o.col_ptr(n), x.p()) + pen[n]);
        }
    return total;
}

FitResult run(const DataSet& x, std::size_t C, const FitConfig& cfg, const Start& start, std::optional<double> eps) {
    x.validate();
    cfg.validate();
    if (C < 1 || C > x.n()) throw std::invalid_argument("C must be in [1, N]");
    if (start.u.n() != x.n() || start.u.c() != C) throw DimensionError("initial membership has wrong shape");

    const double eps_stop = cfg.eps_stop.value_or(1e-6);
    const bool soft = cfg.soft();
    const std::size_t N = x.n();

    Membership u = start.u;
    u.q = cfg.q;
    u.mode = soft ? MembershipMode::soft : MembershipMode::hard;
    OutlierState o = start.o ? *start.o : OutlierState::zeros(x.p(), N);
    if (o.o.rows() != x.p() || o.o.cols() != N) throw DimensionError("initial outliers have wrong shape");
    std::optional<Centroids> m_prev = start.m;
    const Membership u0 = u;
    const OutlierState o0 = o;

    FitResult res;
    res.lambda = cfg.lambda;
    res.epsilon = eps.value_or(0.0);
    Centroids m;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        try {
            m = update_centroids(x, u, o);
        } catch (const EmptyClusterError&) {
            if (!m_prev) throw;
            res.repairs += repair_empty(u, x, *m_prev, o);
            m = update_centroids(x, u, o);
        }
        Residuals r = compute_residuals(x, m, u);
        res.activation_trace.push_back(2.0 * max_norm(r));

        PerPointLambda lam = eps ? reweight(o, cfg.lambda, *eps) : PerPointLambda(N, cfg.lambda);
        o = shrink_outliers(r, lam);

        std::vector<double> pen = eps ? log_penalty(o, cfg.lambda, *eps) : l2_penalty(o, cfg.lambda);
        if (soft) {
            u = update_memberships_soft(x, m, o, pen, cfg.q);
        } else {
            u = update_memberships_hard(x, m, o);
        }
        res.repairs += repair_empty(u, x, m, o);

        res.cost_trace.push_back(cost_with_penalty(x, u, m, o, pen));
        res.outlier_count_trace.push_back(o.count());
        res.iterations = t;

        if (m_prev) {
            const double diff = frobenius_norm([&] {
                Matrix d = m.m;
                for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= m_prev->m.data()[i];
                return d;
            }());
            const double scale = frobenius_norm(m.m);
            bool stop = diff <= eps_stop * scale;
            // A warm start may only stop after one cycle if nothing else moved either.
            if (stop && t == 1)
                stop = max_abs_diff(o.o, o0.o) <= eps_stop * std::max(scale, 1.0) && max_abs_diff(u.u, u0.u) <= eps_stop;
            if (stop) {
                res.converged = true;
                break;
            }
        }
        m_prev = m;
    }

    res.memberships = std::move(u);
    res.centroids = std::move(m);
    res.outlier_norms = o.norms;
    res.outliers = std::move(o);
    return res;
}

} // namespace

Centroids update_centroids(const DataSet& x, const Membership& u, const OutlierState& o) {
    if (u.n() != x.n() || o.o.cols() != x.n() || o.o.rows() != x.p()) throw DimensionError("inconsistent dimensions");
    const std::size_t p = x.p();
    Centroids m{Matrix(p, u.c())};
    std::vector<double> diff(p);
    for (std::size_t c = 0; c < u.c(); ++c) {
        double mass = 0.0;
        double* mc = m.m.col_ptr(c);
        for (std::size_t n = 0; n < x.n(); ++n) {
            const double w = powq(u.u(n, c), u.q);
            if (w == 0.0) continue;
            mass += w;
            simd::axpy(w, x.x.col_ptr(n), mc, p);
            simd::axpy(-w, o.o.col_ptr(n), mc, p);
        }
        if (!(mass > 0.0)) throw EmptyClusterError(c);
        for (std::size_t i = 0; i < p; ++i) mc[i] /= mass;
    }
    return m;
}

Residuals compute_residuals(const DataSet& x, const Centroids& m, const Membership& u) {
    if (u.n() != x.n() || m.m.rows() != x.p() || m.m.cols() != u.c()) throw DimensionError("inconsistent dimensions");
    const std::size_t p = x.p();
    Residuals r{Matrix(p, x.n())};
    for (std::size_t n = 0; n < x.n(); ++n) {
        double mass = 0.0;
        double* rn = r.r.col_ptr(n);
        for (std::size_t c = 0; c < u.c(); ++c) {
            const double w = powq(u.u(n, c), u.q);
            if (w == 0.0) continue;
            mass += w;
            simd::axpy(-w, m.m.col_ptr(c), rn, p);
        }
        for (std::size_t i = 0; i < p; ++i) rn[i] = x.x(i, n) + rn[i] / mass;
    }
    return r;
}

OutlierState shrink_outliers(const Residuals& r, const PerPointLambda& lam) {
    if (lam.size() != r.r.cols()) throw DimensionError("lambda vector length differs from N");
    OutlierState o = OutlierState::zeros(r.r.rows(), r.r.cols());
    for (std::size_t n = 0; n < r.r.cols(); ++n) {
        const double* rn = r.r.col_ptr(n);
        const double nr = std::sqrt(simd::dot(rn, rn, r.r.rows()));
        const double half = lam[n] / 2.0;
        if (!(nr > half)) continue;
        const double s = 1.0 - half / nr;
        double* on = o.o.col_ptr(n);
        for (std::size_t i = 0; i < r.r.rows(); ++i) on[i] = s * rn[i];
        o.norms[n] = std::sqrt(simd::dot(on, on, r.r.rows()));
        if (o.norms[n] == 0.0) std::fill(on, on + r.r.rows(), 0.0);
    }
    return o;
}

Membership update_memberships_soft(const DataSet& x, const Centroids& m, const OutlierState& o,
                                   const std::vector<double>& penalty, double q) {
    if (!(q > 1.0)) throw std::invalid_argument("soft update needs q > 1");
    if (penalty.size() != x.n()) throw DimensionError("penalty length differs from N");
    const std::size_t C = m.m.cols();
    Membership u{Matrix(x.n(), C), q, MembershipMode::soft};
    const double e = 1.0 / (q - 1.0);
    std::vector<double> d(C), l(C);
    for (std::size_t n = 0; n < x.n(); ++n) {
        std::size_t zero = C;
        for (std::size_t c = 0; c < C; ++c) {
            d[c] = simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(c), o.o.col_ptr(n), x.p()) + penalty[n];
            if (d[c] == 0.0 && zero == C) zero = c;
        }
        if (zero != C) {
            u.u(n, zero) = 1.0;
            continue;
        }
        // u_c = 1 / sum_c' (d_c/d_c')^e, evaluated as a softmax of -e log d
        double mx = -kInf;
        for (std::size_t c = 0; c < C; ++c) {
            l[c] = -e * std::log(d[c]);
            mx = std::max(mx, l[c]);
        }
        double s = 0.0;
        for (std::size_t c = 0; c < C; ++c) s += std::exp(l[c] - mx);
        for (std::size_t c = 0; c < C; ++c) u.u(n, c) = std::exp(l[c] - mx) / s;
    }
    return u;
}

Membership update_memberships_soft(const DataSet& x, const Centroids& m, const OutlierState& o, double lambda,
                                   double q) {
    return update_memberships_soft(x, m, o, l2_penalty(o, lambda), q);
}

Membership update_memberships_hard(const DataSet& x, const Centroids& m, const OutlierState& o) {
    const std::size_t C = m.m.cols();
    Membership u{Matrix(x.n(), C), 1.0, MembershipMode::hard};
    for (std::size_t n = 0; n < x.n(); ++n) {
        std::size_t best = 0;
        double bd = kInf;
        for (std::size_t c = 0; c < C; ++c) {
            const double d = simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(c), o.o.col_ptr(n), x.p());
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        u.u(n, best) = 1.0;
    }
    return u;
}

PerPointLambda reweight(const OutlierState& o_prev, double lambda, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    PerPointLambda lam(o_prev.norms.size());
    for (std::size_t n = 0; n < lam.size(); ++n) lam[n] = lambda / (o_prev.norms[n] + epsilon);
    return lam;
}

double default_epsilon(const std::vector<double>& norms) {
    std::vector<double> nz;
    for (double v : norms)
        if (v > 0.0) nz.push_back(v);
    if (nz.empty()) return 1e-6;
    auto mid = nz.begin() + static_cast<std::ptrdiff_t>(nz.size() / 2);
    std::nth_element(nz.begin(), mid, nz.end());
    double med = *mid;
    if (nz.size() % 2 == 0) med = 0.5 * (med + *std::max_element(nz.begin(), mid));
    return std::max(1e-2 * med, 1e-6);
}

Membership random_membership(std::size_t N, std::size_t C, double q, std::mt19937_64& rng) {
    if (C < 1 || C > N) throw std::invalid_argument("C must be in [1, N]");
    Membership u{Matrix(N, C), q, q > 1.0 ? MembershipMode::soft : MembershipMode::hard};
    if (q > 1.0) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::size_t n = 0; n < N; ++n) {
            double s = 0.0;
            for (std::size_t c = 0; c < C; ++c) s += (u.u(n, c) = unif(rng));
            for (std::size_t c = 0; c < C; ++c) u.u(n, c) /= s;
        }
        return u;
    }
    std::uniform_int_distribution<std::size_t> pick(0, C - 1);
    std::vector<std::size_t> label(N);
    std::vector<std::size_t> size(C, 0);
    for (std::size_t n = 0; n < N; ++n) ++size[label[n] = pick(rng)];
    std::uniform_int_distribution<std::size_t> point(0, N - 1);
    for (std::size_t c = 0; c < C; ++c) {
        while (size[c] == 0) {
            const std::size_t n = point(rng);
            if (size[label[n]] < 2) continue;
            --size[label[n]];
            label[n] = c;
            ++size[c];
        }
    }
    for (std::size_t n = 0; n < N; ++n) u.u(n, label[n]) = 1.0;
    return u;
}

Start start_from(const FitResult& fit) {
    Start s{fit.memberships, fit.outliers, fit.centroids};
    return s;
}

FitResult rkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    Start s{random_membership(x.n(), C, cfg.q, rng), std::nullopt, std::nullopt};
    return rkm_fit(x, C, cfg, s);
}

FitResult rkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const Start& start) {
    return run(x, C, cfg, start, std::nullopt);
}

FitResult wrkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const FitResult& warm) {
    if (!warm.outliers || !warm.centroids) throw std::invalid_argument("warm start must be an rkm fit");
    double eps = default_epsilon(warm.outlier_norms);
    if (cfg.reweight && cfg.reweight->epsilon) eps = *cfg.reweight->epsilon;
    return wrkm_fit(x, C, cfg, start_from(warm), eps);
}

FitResult wrkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const Start& start, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    return run(x, C, cfg, start, epsilon);
}

double wrkm_cost(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o, double lambda,
                 double epsilon) {
    return cost_with_penalty(x, u, m, o, log_penalty(o, lambda, epsilon));
}

} // namespace robclust::rkm
