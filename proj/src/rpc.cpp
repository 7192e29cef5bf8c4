#include "robclust/rpc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "robclust/rkm.hpp"
#include "robclust/simd.hpp"

namespace robclust::rpc {
namespace {

Matrix distances(const DataSet& x, const Centroids& m, const OutlierState& o) {
    Matrix d(x.n(), m.m.cols());
    for (std::size_t c = 0; c < m.m.cols(); ++c)
        for (std::size_t n = 0; n < x.n(); ++n)
            d(n, c) = simd::squared_distance3(x.x.col_ptr(n), m.m.col_ptr(c), o.o.col_ptr(n), x.p());
    return d;
}

double scatter(const Matrix& dist, const Posteriors& g) {
    double b = 0.0;
    for (std::size_t i = 0; i < dist.data().size(); ++i) b += g.gamma.data()[i] * dist.data()[i];
    return b;
}

double norm_sum(const OutlierState& o) { return std::accumulate(o.norms.begin(), o.norms.end(), 0.0); }

double log_penalty_sum(const OutlierState& o, double eps) {
    double s = 0.0;
    for (double v : o.norms)
        if (v > 0.0) s += std::log1p(v / eps);
    return s;
}

// A component whose posteriors all underflowed keeps its previous mean.
Centroids means_with_fallback(const DataSet& x, const Posteriors& g, const OutlierState& o, const Centroids& prev) {
    Centroids m = prev;
    for (std::size_t c = 0; c < m.m.cols(); ++c) {
        double mass = 0.0;
        std::vector<double> acc(x.p(), 0.0);
        for (std::size_t n = 0; n < x.n(); ++n) {
            const double w = g.gamma(n, c);
            if (w == 0.0) continue;
            mass += w;
            simd::axpy(w, x.x.col_ptr(n), acc.data(), x.p());
            simd::axpy(-w, o.o.col_ptr(n), acc.data(), x.p());
        }
        if (mass > 0.0)
            for (std::size_t i = 0; i < x.p(); ++i) m.m(i, c) = acc[i] / mass;
    }
    return m;
}

// sigma floor relative to the data scale
double sigma_floor(const DataSet& x) { return 1e-6 * std::sqrt(std::max(data_variance(x), 1e-300)); }

FitResult run(const DataSet& x, std::size_t C, const FitConfig& cfg, const MixtureParams& start,
              std::optional<double> eps) {
    x.validate();
    cfg.validate();
    if (C < 1 || C > x.n()) throw std::invalid_argument("C must be in [1, N]");
    if (start.pi.size() != C || start.m.m.cols() != C || start.m.m.rows() != x.p() || start.o.o.cols() != x.n())
        throw DimensionError("initial parameters have wrong shape");
    if (!(start.sigma > 0.0)) throw std::invalid_argument("initial sigma must be > 0");

    const double eps_stop = cfg.eps_stop.value_or(1e-8);
    const double lambda = cfg.lambda;
    const double N = static_cast<double>(x.n());
    const double D = N * static_cast<double>(x.p());
    const double floor = sigma_floor(x);

    MixtureParams th = start;
    auto penalty = [&](const OutlierState& o) {
        const double s = eps ? log_penalty_sum(o, *eps) : norm_sum(o);
        return s > 0.0 ? lambda * s : 0.0;
    };

    MixtureEval ev = evaluate_mixture(distances(x, th.m, th.o), th.pi, th.sigma, static_cast<double>(x.p()));
    double prev = ev.nll + penalty(th.o) / th.sigma;

    FitResult res;
    res.lambda = lambda;
    res.epsilon = eps.value_or(0.0);
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const Posteriors& g = ev.post;
        th.pi = update_pi(g);
        try {
            th.m = update_means_em(x, g, th.o);
        } catch (const EmptyClusterError&) {
            th.m = means_with_fallback(x, g, th.o, th.m);
            ++res.repairs;
        }

        // residuals for the threshold trace and the outlier step
        std::vector<double> tau(x.n(), lambda * th.sigma);
        if (eps) {
            std::vector<double> lam = rkm::reweight(th.o, lambda, *eps);
            for (std::size_t n = 0; n < x.n(); ++n) tau[n] = lam[n] * th.sigma;
        }
        double rmax = 0.0;
        std::vector<double> rn(x.p());
        for (std::size_t n = 0; n < x.n(); ++n) {
            std::copy(x.x.col_ptr(n), x.x.col_ptr(n) + x.p(), rn.begin());
            for (std::size_t c = 0; c < C; ++c) simd::axpy(-g.gamma(n, c), th.m.m.col_ptr(c), rn.data(), x.p());
            rmax = std::max(rmax, std::sqrt(simd::dot(rn.data(), rn.data(), x.p())));
        }
        res.activation_trace.push_back(rmax / th.sigma);
        th.o = shrink_outliers_em(x, th.m, g, tau);

        const Matrix dist = distances(x, th.m, th.o);
        double sigma;
        try {
            sigma = solve_sigma(penalty(th.o), scatter(dist, g), D);
        } catch (const DegenerateFitError&) {
            sigma = 0.0;
        }
        if (sigma < floor) {
            sigma = floor;
            res.degenerate = true;
        }
        th.sigma = sigma;

        ev = evaluate_mixture(dist, th.pi, th.sigma, static_cast<double>(x.p()));
        const double obj = ev.nll + penalty(th.o) / th.sigma;
        res.cost_trace.push_back(obj);
        res.outlier_count_trace.push_back(th.o.count());
        res.iterations = t;
        const bool stop = std::abs(prev - obj) <= eps_stop * std::abs(obj);
        prev = obj;
        if (stop) {
            res.converged = true;
            break;
        }
    }

    res.memberships = Membership{ev.post.gamma, 1.0, MembershipMode::soft};
    res.pi = th.pi;
    res.sigma = th.sigma;
    res.centroids = th.m;
    res.outlier_norms = th.o.norms;
    res.outliers = std::move(th.o);
    return res;
}

} // namespace

MixtureEval evaluate_mixture(const Matrix& dist, const std::vector<double>& pi, double sigma, double dim) {
    const std::size_t N = dist.rows();
    const std::size_t C = dist.cols();
    if (pi.size() != C) throw DimensionError("pi length differs from C");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    const double s2 = sigma * sigma;
    const double log_norm = -0.5 * dim * std::log(2.0 * std::numbers::pi * s2);
    std::vector<double> logpi(C);
    for (std::size_t c = 0; c < C; ++c) logpi[c] = std::log(pi[c]);
    MixtureEval ev;
    ev.post.gamma = Matrix(N, C);
    std::vector<double> lp(C);
    for (std::size_t n = 0; n < N; ++n) {
        double mx = -kInf;
        for (std::size_t c = 0; c < C; ++c) {
            lp[c] = logpi[c] - dist(n, c) / (2.0 * s2);
            mx = std::max(mx, lp[c]);
        }
        double s = 0.0;
        for (std::size_t c = 0; c < C; ++c) s += (lp[c] = std::exp(lp[c] - mx));
        for (std::size_t c = 0; c < C; ++c) ev.post.gamma(n, c) = lp[c] / s;
        ev.nll -= log_norm + mx + std::log(s);
    }
    return ev;
}

Posteriors e_step(const DataSet& x, const MixtureParams& params) {
    if (params.m.m.rows() != x.p() || params.o.o.cols() != x.n()) throw DimensionError("inconsistent dimensions");
    return evaluate_mixture(distances(x, params.m, params.o), params.pi, params.sigma, static_cast<double>(x.p()))
        .post;
}

std::vector<double> update_pi(const Posteriors& g) {
    const std::size_t N = g.gamma.rows();
    std::vector<double> pi(g.gamma.cols());
    for (std::size_t c = 0; c < pi.size(); ++c) pi[c] = simd::sum(g.gamma.col_ptr(c), N) / static_cast<double>(N);
    return pi;
}

Centroids update_means_em(const DataSet& x, const Posteriors& g, const OutlierState& o) {
    Membership u{g.gamma, 1.0, MembershipMode::soft};
    return rkm::update_centroids(x, u, o);
}

OutlierState shrink_outliers_em(const DataSet& x, const Centroids& m, const Posteriors& g, double lambda,
                                double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    return shrink_outliers_em(x, m, g, std::vector<double>(x.n(), lambda * sigma));
}

OutlierState shrink_outliers_em(const DataSet& x, const Centroids& m, const Posteriors& g,
                                const std::vector<double>& thresholds) {
    if (thresholds.size() != x.n() || g.gamma.rows() != x.n() || g.gamma.cols() != m.m.cols())
        throw DimensionError("inconsistent dimensions");
    // rows of gamma sum to one, so this is x_n - sum_c gamma_nc m_c
    rkm::Residuals r{Matrix(x.p(), x.n())};
    for (std::size_t n = 0; n < x.n(); ++n) {
        double* rn = r.r.col_ptr(n);
        std::copy(x.x.col_ptr(n), x.x.col_ptr(n) + x.p(), rn);
        for (std::size_t c = 0; c < m.m.cols(); ++c) simd::axpy(-g.gamma(n, c), m.m.col_ptr(c), rn, x.p());
    }
    std::vector<double> lam(thresholds.size());
    for (std::size_t n = 0; n < lam.size(); ++n) lam[n] = 2.0 * thresholds[n];
    return rkm::shrink_outliers(r, lam);
}

double solve_sigma(double penalty_sum, double scatter, double dim) {
    if (!(dim > 0.0)) throw std::invalid_argument("dimension must be > 0");
    const double a = penalty_sum / (2.0 * dim);
    const double b = scatter / dim;
    if (a == 0.0 && b == 0.0) throw DegenerateFitError("all residuals vanished; sigma is zero");
    return a + std::sqrt(b + a * a);
}

double update_sigma(const DataSet& x, const Centroids& m, const OutlierState& o, const Posteriors& g, double lambda) {
    const double ns = norm_sum(o);
    return solve_sigma(ns > 0.0 ? lambda * ns : 0.0, scatter(distances(x, m, o), g),
                       static_cast<double>(x.n()) * static_cast<double>(x.p()));
}

double data_variance(const DataSet& x) {
    std::vector<double> mean(x.p(), 0.0);
    for (std::size_t n = 0; n < x.n(); ++n) simd::axpy(1.0, x.x.col_ptr(n), mean.data(), x.p());
    for (double& v : mean) v /= static_cast<double>(x.n());
    double s = 0.0;
    for (std::size_t n = 0; n < x.n(); ++n) s += simd::squared_distance(x.x.col_ptr(n), mean.data(), x.p());
    return s / static_cast<double>(x.n()) / static_cast<double>(x.p());
}

MixtureParams init_params(const DataSet& x, std::size_t C, std::mt19937_64& rng) {
    if (C < 1 || C > x.n()) throw std::invalid_argument("C must be in [1, N]");
    std::vector<std::size_t> idx(x.n());
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates: C distinct points
    for (std::size_t c = 0; c < C; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, x.n() - 1);
        std::swap(idx[c], idx[pick(rng)]);
    }
    MixtureParams th;
    th.pi.assign(C, 1.0 / static_cast<double>(C));
    th.m.m = Matrix(x.p(), C);
    for (std::size_t c = 0; c < C; ++c) std::copy(x.x.col_ptr(idx[c]), x.x.col_ptr(idx[c]) + x.p(), th.m.m.col_ptr(c));
    th.sigma = std::sqrt(data_variance(x));
    if (!(th.sigma > 0.0)) th.sigma = 1.0;
    th.o = OutlierState::zeros(x.p(), x.n());
    return th;
}

MixtureParams params_from(const FitResult& fit) {
    if (!fit.centroids || !fit.outliers || fit.pi.empty()) throw std::invalid_argument("not an rpc fit");
    return MixtureParams{fit.pi, *fit.centroids, fit.sigma, *fit.outliers};
}

FitResult rpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return run(x, C, cfg, init_params(x, C, rng), std::nullopt);
}

FitResult rpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const MixtureParams& start) {
    return run(x, C, cfg, start, std::nullopt);
}

FitResult wrpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const FitResult& warm) {
    double eps = rkm::default_epsilon(warm.outlier_norms);
    if (cfg.reweight && cfg.reweight->epsilon) eps = *cfg.reweight->epsilon;
    return run(x, C, cfg, params_from(warm), eps);
}

FitResult wrpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const MixtureParams& start,
                   double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    return run(x, C, cfg, start, epsilon);
}

double wrpc_objective(const DataSet& x, const MixtureParams& params, double lambda, double epsilon) {
    const double nll =
        evaluate_mixture(distances(x, params.m, params.o), params.pi, params.sigma, static_cast<double>(x.p())).nll;
    const double s = log_penalty_sum(params.o, epsilon);
    return nll + (s > 0.0 ? lambda * s / params.sigma : 0.0);
}

} // namespace robclust::rpc
