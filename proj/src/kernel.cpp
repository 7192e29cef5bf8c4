#include "robclust/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robclust/eigen.hpp"
#include "robclust/rkm.hpp"
#include "robclust/rpc.hpp"
#include "robclust/simd.hpp"

namespace robclust::kernel {
namespace {

inline double powq(double u, double q) { return q == 1.0 ? u : (u == 0.0 ? 0.0 : std::pow(u, q)); }

// Quantities of the residuals delta_n = e_n - B W_n' that the updates need:
// KB, G = B'KB, (K Delta)_nn and ||delta_n||_K^2.
struct Geometry {
    Matrix kb;
    Matrix g;
    std::vector<double> kd;
    std::vector<double> dn2;
};

Geometry residual_geometry(const Matrix& K, const Matrix& B, const Matrix& W) {
    const std::size_t N = K.rows();
    const std::size_t C = B.cols();
    Geometry geo;
    geo.kb = matmul(K, B);
    geo.g = matmul_tn(B, geo.kb);
    geo.kd.resize(N);
    geo.dn2.resize(N);
    std::vector<double> w(C), gw(C);
    for (std::size_t n = 0; n < N; ++n) {
        double kbw = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            w[c] = W(n, c);
            kbw += geo.kb(n, c) * w[c];
        }
        double wgw = 0.0;
        for (std::size_t c = 0; c < C; ++c) wgw += w[c] * simd::dot(geo.g.col_ptr(c), w.data(), C);
        geo.kd[n] = K(n, n) - kbw;
        geo.dn2[n] = std::max(0.0, K(n, n) - 2.0 * kbw + wgw);
    }
    return geo;
}

// Delta = I - B W'
Matrix residual_coeffs(const Matrix& B, const Matrix& W) {
    Matrix d = matmul_nt(B, W);
    for (double& v : d.data()) v = -v;
    for (std::size_t n = 0; n < d.rows(); ++n) d(n, n) += 1.0;
    return d;
}

Matrix scale_columns(Matrix m, const std::vector<double>& s) {
    for (std::size_t n = 0; n < m.cols(); ++n) {
        double* col = m.col_ptr(n);
        if (s[n] == 0.0) {
            std::fill(col, col + m.rows(), 0.0);
        } else {
            for (std::size_t i = 0; i < m.rows(); ++i) col[i] *= s[n];
        }
    }
    return m;
}

// ||e_n - beta_c - alpha_n||_K^2 with alpha_n = s_n delta_n.
Matrix kernel_distances(const Matrix& K, const Geometry& geo, const Matrix& W, const std::vector<double>& s) {
    const std::size_t N = K.rows();
    const std::size_t C = geo.kb.cols();
    Matrix d(N, C);
    std::vector<double> w(C);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t c = 0; c < C; ++c) w[c] = W(n, c);
        const double sn = s[n];
        const double self = K(n, n) + sn * sn * geo.dn2[n] - 2.0 * sn * geo.kd[n];
        for (std::size_t c = 0; c < C; ++c) {
            const double cross = sn == 0.0 ? 0.0 : 2.0 * sn * (geo.kb(n, c) - simd::dot(geo.g.col_ptr(c), w.data(), C));
            d(n, c) = std::max(0.0, self + geo.g(c, c) - 2.0 * geo.kb(n, c) + cross);
        }
    }
    return d;
}

// Distances from explicit coefficient matrices; used once for warm starts.
Matrix explicit_distances(const Matrix& K, const Matrix& B, const Matrix& A) {
    const std::size_t N = K.rows();
    const std::size_t C = B.cols();
    const Matrix kb = matmul(K, B);
    const Matrix g = matmul_tn(B, kb);
    const Matrix ka = matmul(K, A);
    const Matrix cross = matmul_tn(kb, A);  // C x N: beta_c' K alpha_n
    Matrix d(N, C);
    for (std::size_t n = 0; n < N; ++n) {
        const double aa = simd::dot(A.col_ptr(n), ka.col_ptr(n), N);
        for (std::size_t c = 0; c < C; ++c)
            d(n, c) = std::max(0.0, K(n, n) + g(c, c) + aa - 2.0 * kb(n, c) - 2.0 * ka(n, n) + 2.0 * cross(c, n));
    }
    return d;
}

std::vector<double> shrink_scales(const std::vector<double>& dn2, const std::vector<double>& thresholds,
                                  std::vector<double>& norms) {
    std::vector<double> s(dn2.size(), 0.0);
    norms.assign(dn2.size(), 0.0);
    for (std::size_t n = 0; n < dn2.size(); ++n) {
        const double nr = std::sqrt(dn2[n]);
        if (nr > thresholds[n]) {
            s[n] = 1.0 - thresholds[n] / nr;
            norms[n] = s[n] * nr;
            if (norms[n] == 0.0) s[n] = 0.0;
        }
    }
    return s;
}

void check_kernel(const KernelMatrix& k, std::size_t C) {
    if (k.k.rows() != k.k.cols() || k.n() == 0) throw DimensionError("kernel matrix must be square and nonempty");
    if (C < 1 || C > k.n()) throw std::invalid_argument("C must be in [1, N]");
    for (std::size_t n = 0; n < k.n(); ++n)
        if (!(k.k(n, n) > 0.0)) throw std::invalid_argument("kernel matrix is not positive definite");
}

int repair_empty(Membership& u, const Matrix& dist) {
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
        for (std::size_t n = 0; n < u.n(); ++n)
            if (sizes[labels[n]] >= 2 && dist(n, labels[n]) > best) {
                best = dist(n, labels[n]);
                pick = n;
            }
        if (pick == u.n()) throw EmptyClusterError(c);
        for (std::size_t k = 0; k < C; ++k) u.u(pick, k) = 0.0;
        u.u(pick, c) = 1.0;
        ++repairs;
    }
    return repairs;
}

double beta_change(const Matrix& B, const Matrix& kb, const Matrix& B_prev, const Matrix& kb_prev) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t c = 0; c < B.cols(); ++c)
        for (std::size_t i = 0; i < B.rows(); ++i) {
            num += (B(i, c) - B_prev(i, c)) * (kb(i, c) - kb_prev(i, c));
            den += B(i, c) * kb(i, c);
        }
    return den > 0.0 ? num / den : (num > 0.0 ? kInf : 0.0);
}

} // namespace

bool is_psd(const Matrix& k, double tau) {
    const std::size_t n = k.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = k(j, j) + tau;
        for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = k(i, j);
            for (std::size_t p = 0; p < j; ++p) v -= l(i, p) * l(j, p);
            l(i, j) = v / ljj;
        }
    }
    return true;
}

KernelMatrix make_kernel(Matrix k) {
    const std::size_t n = k.rows();
    if (k.cols() != n || n == 0) throw std::invalid_argument("kernel matrix must be square and nonempty");
    double trace = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += k(i, i);
    for (double v : k.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("kernel matrix has a non-finite entry");
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            if (std::abs(k(i, j) - k(j, i)) > 1e-9 * std::max(scale, 1.0))
                throw std::invalid_argument("kernel matrix is not symmetric");
            k(i, j) = k(j, i) = 0.5 * (k(i, j) + k(j, i));
        }
    const double tau = 1e-8 * std::max(trace, 0.0) / static_cast<double>(n);
    if (!is_psd(k, std::max(tau, 1e-300))) throw std::invalid_argument("kernel matrix is not positive semidefinite");
    return KernelMatrix{std::move(k)};
}

KernelMatrix gram_linear(const DataSet& x) { return make_kernel(matmul_tn(x.x, x.x)); }

KernelMatrix kernel_gaussian(const DataSet& x, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const std::size_t N = x.n();
    Matrix k(N, N);
    for (std::size_t j = 0; j < N; ++j) {
        k(j, j) = 1.0;
        for (std::size_t i = j + 1; i < N; ++i)
            k(i, j) = k(j, i) = std::exp(-alpha * simd::squared_distance(x.x.col_ptr(i), x.x.col_ptr(j), x.p()));
    }
    return make_kernel(std::move(k));
}

KernelMatrix kernel_polynomial(const DataSet& x, int degree) {
    if (degree < 1) throw std::invalid_argument("degree must be >= 1");
    Matrix k = matmul_tn(x.x, x.x);
    for (double& v : k.data()) {
        double r = 1.0;
        for (int d = 0; d < degree; ++d) r *= v;
        v = r;
    }
    return make_kernel(std::move(k));
}

namespace {

Matrix normalized_adjacency(const Matrix& adjacency) {
    const std::size_t N = adjacency.rows();
    if (adjacency.cols() != N || N == 0) throw DimensionError("adjacency must be square and nonempty");
    std::vector<double> dinv(N);
    for (std::size_t n = 0; n < N; ++n) {
        double deg = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            if (adjacency(n, m) < 0.0) throw GraphError(n, "negative edge weight");
            deg += adjacency(n, m);
        }
        if (!(deg > 0.0)) throw GraphError(n, "isolated node");
        dinv[n] = 1.0 / std::sqrt(deg);
    }
    Matrix s(N, N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) s(i, j) = dinv[i] * adjacency(i, j) * dinv[j];
    return s;
}

} // namespace

KernelMatrix kernel_graph(const Matrix& adjacency, double nu_margin) {
    if (!(nu_margin > 0.0)) throw std::invalid_argument("nu_margin must be > 0");
    Matrix s = normalized_adjacency(adjacency);
    const double lmin = eigen_symmetric(s).values.front();
    const double nu = std::abs(lmin) + nu_margin;
    for (std::size_t n = 0; n < s.rows(); ++n) s(n, n) += nu;
    return make_kernel(std::move(s));
}

double alpha_kappa_heuristic(const DataSet& x) {
    const std::size_t N = x.n();
    if (N < 2) throw std::invalid_argument("need at least two points");
    std::vector<double> d;
    d.reserve(N * (N - 1) / 2);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = j + 1; i < N; ++i) d.push_back(simd::squared_distance(x.x.col_ptr(i), x.x.col_ptr(j), x.p()));
    const std::size_t h = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h), d.end());
    double med = d[h];
    if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h)));
    if (!(med > 0.0)) throw std::invalid_argument("median pairwise distance is zero");
    return 1.0 / med;
}

Membership spectral_init(const Matrix& adjacency, std::size_t C, std::uint64_t seed, int restarts) {
    const std::size_t N = adjacency.rows();
    if (C < 1 || C > N) throw std::invalid_argument("C must be in [1, N]");
    Matrix l = normalized_adjacency(adjacency);
    for (double& v : l.data()) v = -v;
    for (std::size_t n = 0; n < N; ++n) l(n, n) += 1.0;
    const SymmetricEigen eig = eigen_symmetric(l);

    DataSet emb;
    emb.x = Matrix(C, N);
    for (std::size_t n = 0; n < N; ++n) {
        double nr = 0.0;
        for (std::size_t c = 0; c < C; ++c) nr += eig.vectors(n, c) * eig.vectors(n, c);
        nr = std::sqrt(nr);
        for (std::size_t c = 0; c < C; ++c) emb.x(c, n) = nr > 0.0 ? eig.vectors(n, c) / nr : 0.0;
    }
    std::optional<FitResult> best;
    for (int r = 0; r < std::max(restarts, 1); ++r) {
        FitConfig cfg;
        cfg.seed = seed + static_cast<std::uint64_t>(r);
        FitResult fit = rkm::rkm_fit(emb, C, cfg);
        if (!best || fit.final_cost() < best->final_cost()) best = std::move(fit);
    }
    return best->memberships;
}

Start start_from(const FitResult& fit) {
    if (!fit.kernel_state) throw std::invalid_argument("not a kernel fit");
    return Start{fit.memberships, fit.kernel_state->a, fit.kernel_state->b};
}

ProbStart prob_start_from(const FitResult& fit) {
    if (!fit.kernel_state || fit.pi.empty()) throw std::invalid_argument("not a probabilistic kernel fit");
    return ProbStart{fit.kernel_state->b, fit.pi, fit.sigma, fit.kernel_state->a, fit.kernel_state->dist};
}

double kernel_variance(const KernelMatrix& k) {
    const double N = static_cast<double>(k.n());
    double trace = 0.0;
    for (std::size_t n = 0; n < k.n(); ++n) trace += k.k(n, n);
    const double total = simd::sum(k.k.data().data(), k.k.data().size());
    return std::max(trace / N - total / (N * N), 0.0) / N;
}

ProbStart random_prob_start(const KernelMatrix& k, std::size_t C, std::mt19937_64& rng) {
    const std::size_t N = k.n();
    if (C < 1 || C > N) throw std::invalid_argument("C must be in [1, N]");
    std::vector<std::size_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t c = 0; c < C; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, N - 1);
        std::swap(idx[c], idx[pick(rng)]);
    }
    ProbStart s;
    s.b = Matrix(N, C);
    for (std::size_t c = 0; c < C; ++c) s.b(idx[c], c) = 1.0;
    s.pi.assign(C, 1.0 / static_cast<double>(C));
    s.sigma = std::sqrt(kernel_variance(k));
    if (!(s.sigma > 0.0)) s.sigma = 1.0;
    return s;
}

FitResult krkm_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return krkm_fit(k, C, cfg, Start{rkm::random_membership(k.n(), C, cfg.q, rng), std::nullopt, std::nullopt});
}

FitResult krkm_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg, const Start& start) {
    check_kernel(k, C);
    cfg.validate();
    const std::size_t N = k.n();
    const Matrix& K = k.k;
    if (start.u.n() != N || start.u.c() != C) throw DimensionError("initial membership has wrong shape");
    const double eps_stop = cfg.eps_stop.value_or(1e-6);
    const bool soft = cfg.soft();
    const double lambda = cfg.lambda;

    Membership u = start.u;
    u.q = cfg.q;
    u.mode = soft ? MembershipMode::soft : MembershipMode::hard;
    Matrix A = start.a ? *start.a : Matrix(N, N);
    if (A.rows() != N || A.cols() != N) throw DimensionError("initial outlier coefficients have wrong shape");
    std::optional<Matrix> B_prev = start.b;
    std::optional<Matrix> kb_prev;
    if (B_prev) kb_prev = matmul(K, *B_prev);
    const Membership u0 = u;
    const Matrix A0 = A;

    FitResult res;
    res.lambda = lambda;
    Matrix B, W, dist;
    std::vector<double> norms(N, 0.0);
    std::optional<Matrix> dist_prev;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        Matrix uq(N, C);
        for (std::size_t i = 0; i < uq.data().size(); ++i) uq.data()[i] = powq(u.u.data()[i], u.q);
        std::vector<double> colsum(C, 0.0), rowsum(N, 0.0);
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t n = 0; n < N; ++n) {
                colsum[c] += uq(n, c);
                rowsum[n] += uq(n, c);
            }
        for (std::size_t c = 0; c < C; ++c)
            if (!(colsum[c] > 0.0)) throw EmptyClusterError(c);
        Matrix uhat = uq;
        W = uq;
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t n = 0; n < N; ++n) {
                uhat(n, c) /= colsum[c];
                W(n, c) /= rowsum[n];
            }

        // B = (I - A) Uhat
        B = uhat;
        const Matrix au = matmul(A, uhat);
        for (std::size_t i = 0; i < B.data().size(); ++i) B.data()[i] -= au.data()[i];

        Geometry geo = residual_geometry(K, B, W);
        double dmax = 0.0;
        for (double v : geo.dn2) dmax = std::max(dmax, v);
        res.activation_trace.push_back(2.0 * std::sqrt(dmax));

        std::vector<double> half(N, lambda / 2.0);
        const std::vector<double> s = shrink_scales(geo.dn2, half, norms);
        A = scale_columns(residual_coeffs(B, W), s);
        dist = kernel_distances(K, geo, W, s);

        std::vector<double> pen(N, 0.0);
        for (std::size_t n = 0; n < N; ++n)
            if (norms[n] > 0.0) pen[n] = lambda * norms[n];
        if (soft) {
            const double e = 1.0 / (cfg.q - 1.0);
            std::vector<double> l(C);
            for (std::size_t n = 0; n < N; ++n) {
                std::size_t zero = C;
                for (std::size_t c = 0; c < C && zero == C; ++c)
                    if (dist(n, c) + pen[n] == 0.0) zero = c;
                if (zero != C) {
                    for (std::size_t c = 0; c < C; ++c) u.u(n, c) = c == zero ? 1.0 : 0.0;
                    continue;
                }
                double mx = -kInf;
                for (std::size_t c = 0; c < C; ++c) mx = std::max(mx, l[c] = -e * std::log(dist(n, c) + pen[n]));
                double sum = 0.0;
                for (std::size_t c = 0; c < C; ++c) sum += std::exp(l[c] - mx);
                for (std::size_t c = 0; c < C; ++c) u.u(n, c) = std::exp(l[c] - mx) / sum;
            }
        } else {
            for (std::size_t n = 0; n < N; ++n) {
                std::size_t best = 0;
                for (std::size_t c = 1; c < C; ++c)
                    if (dist(n, c) < dist(n, best)) best = c;
                for (std::size_t c = 0; c < C; ++c) u.u(n, c) = c == best ? 1.0 : 0.0;
            }
        }
        res.repairs += repair_empty(u, dist);

        double cost = 0.0;
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t c = 0; c < C; ++c) {
                const double w = powq(u.u(n, c), u.q);
                if (w != 0.0) cost += w * (dist(n, c) + pen[n]);
            }
        res.cost_trace.push_back(cost);
        res.outlier_count_trace.push_back(
            static_cast<std::size_t>(std::count_if(norms.begin(), norms.end(), [](double v) { return v > 0.0; })));
        res.iterations = t;

        if (B_prev) {
            bool stop = beta_change(B, geo.kb, *B_prev, *kb_prev) <= eps_stop * eps_stop;
            if (stop && t == 1) stop = max_abs_diff(A, A0) <= eps_stop && max_abs_diff(u.u, u0.u) <= eps_stop;
            if (stop) {
                res.converged = true;
                break;
            }
        }
        B_prev = B;
        kb_prev = std::move(geo.kb);
    }

    res.memberships = std::move(u);
    res.outlier_norms = norms;
    res.kernel_state = KernelState{std::move(A), B, residual_coeffs(B, W), std::move(dist)};
    return res;
}

FitResult krpc_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return krpc_fit(k, C, cfg, random_prob_start(k, C, rng));
}

FitResult krpc_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg, const ProbStart& start) {
    check_kernel(k, C);
    cfg.validate();
    const std::size_t N = k.n();
    const Matrix& K = k.k;
    if (start.b.rows() != N || start.b.cols() != C || start.pi.size() != C) throw DimensionError("bad start shape");
    if (!(start.sigma > 0.0)) throw std::invalid_argument("initial sigma must be > 0");
    const double eps_stop = cfg.eps_stop.value_or(1e-8);
    const double lambda = cfg.lambda;
    const double dim = static_cast<double>(N);
    const double floor = 1e-6 * std::sqrt(std::max(kernel_variance(k), 1e-300));

    Matrix A = start.a ? *start.a : Matrix(N, N);
    Matrix B = start.b;
    std::vector<double> pi = start.pi;
    double sigma = start.sigma;
    Matrix dist = start.dist ? *start.dist : explicit_distances(K, B, A);
    std::vector<double> norms(N, 0.0);
    if (start.a) {
        // ||alpha_n||_K for the starting penalty
        const Matrix ka = matmul(K, A);
        for (std::size_t n = 0; n < N; ++n) norms[n] = std::sqrt(std::max(0.0, simd::dot(A.col_ptr(n), ka.col_ptr(n), N)));
        for (std::size_t n = 0; n < N; ++n)
            if (std::all_of(A.col_ptr(n), A.col_ptr(n) + N, [](double v) { return v == 0.0; })) norms[n] = 0.0;
    }
    auto penalty = [&] {
        double s = 0.0;
        for (double v : norms) s += v;
        return s > 0.0 ? lambda * s : 0.0;
    };

    rpc::MixtureEval ev = rpc::evaluate_mixture(dist, pi, sigma, dim);
    double prev = ev.nll + penalty() / sigma;

    FitResult res;
    res.lambda = lambda;
    Matrix gamma;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        gamma = ev.post.gamma;
        pi = rpc::update_pi(ev.post);

        // B = (I - A) Gamma diag(1 / (N pi)); a starved component keeps its coefficients
        Matrix ghat = gamma;
        std::vector<bool> starved(C, false);
        for (std::size_t c = 0; c < C; ++c) {
            const double mass = dim * pi[c];
            if (!(mass > 0.0)) {
                starved[c] = true;
                ++res.repairs;
                continue;
            }
            for (std::size_t n = 0; n < N; ++n) ghat(n, c) /= mass;
        }
        Matrix Bn = ghat;
        const Matrix ag = matmul(A, ghat);
        for (std::size_t i = 0; i < Bn.data().size(); ++i) Bn.data()[i] -= ag.data()[i];
        for (std::size_t c = 0; c < C; ++c)
            if (starved[c]) std::copy(B.col_ptr(c), B.col_ptr(c) + N, Bn.col_ptr(c));
        B = std::move(Bn);

        Geometry geo = residual_geometry(K, B, gamma);
        double dmax = 0.0;
        for (double v : geo.dn2) dmax = std::max(dmax, v);
        res.activation_trace.push_back(std::sqrt(dmax) / sigma);

        std::vector<double> tau(N, lambda * sigma);
        const std::vector<double> s = shrink_scales(geo.dn2, tau, norms);
        A = scale_columns(residual_coeffs(B, gamma), s);
        dist = kernel_distances(K, geo, gamma, s);

        double scatter = 0.0;
        for (std::size_t i = 0; i < dist.data().size(); ++i) scatter += gamma.data()[i] * dist.data()[i];
        double sig;
        try {
            sig = rpc::solve_sigma(penalty(), scatter, dim * dim);
        } catch (const DegenerateFitError&) {
            sig = 0.0;
        }
        if (sig < floor) {
            sig = floor;
            res.degenerate = true;
        }
        sigma = sig;

        ev = rpc::evaluate_mixture(dist, pi, sigma, dim);
        const double obj = ev.nll + penalty() / sigma;
        res.cost_trace.push_back(obj);
        res.outlier_count_trace.push_back(
            static_cast<std::size_t>(std::count_if(norms.begin(), norms.end(), [](double v) { return v > 0.0; })));
        res.iterations = t;
        const bool stop = std::abs(prev - obj) <= eps_stop * std::abs(obj);
        prev = obj;
        if (stop) {
            res.converged = true;
            break;
        }
    }

    res.memberships = Membership{ev.post.gamma, 1.0, MembershipMode::soft};
    res.pi = pi;
    res.sigma = sigma;
    res.outlier_norms = norms;
    Matrix delta = gamma.empty() ? Matrix::identity(N) : residual_coeffs(B, gamma);
    res.kernel_state = KernelState{std::move(A), std::move(B), std::move(delta), std::move(dist)};
    return res;
}

Matrix reconstruct(const DataSet& x, const Matrix& coeffs) { return matmul(x.x, coeffs); }

} // namespace robclust::kernel
