// Acceptance suite: one PASS / FAIL / SKIP line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "robclust/data.hpp"
#include "robclust/kernel.hpp"
#include "robclust/metrics.hpp"
#include "robclust/path.hpp"
#include "robclust/rkm.hpp"
#include "robclust/rpc.hpp"
#include "support.hpp"

using namespace robclust;
using path::Algorithm;
using testing::Gen;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Best of `restarts` random inits by converged lambda = inf cost.
path::Init best_init(Algorithm a, const path::Input& in, std::size_t C, std::uint64_t seed0, int restarts) {
    path::Init best;
    double bc = kInf;
    for (int r = 0; r < restarts; ++r) {
        FitConfig cfg;
        cfg.seed = seed0 + static_cast<std::uint64_t>(r);
        const auto init = path::random_init(a, in, C, cfg);
        const FitResult f = path::fit(a, in, C, cfg, init);
        if (f.final_cost() < bc) {
            bc = f.final_cost();
            best = init;
        }
    }
    return best;
}

std::size_t longest_run(const path::PathResult& pr, std::size_t count) {
    std::size_t best = 0, run = 0;
    for (const auto& p : pr.points) {
        run = p.count == count ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

// A1 / A2: spherical defaults, path targeting the planted count.
Outcome spherical_identification(Algorithm a, int G, double limit_s, bool need_plateau) {
    int pass = 0;
    double worst = 0;
    std::string per;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t0 = Clock::now();
        data::SphericalSpec spec;
        spec.seed = seed;
        const DataSet x = data::gen_spherical(spec);
        const path::Input in{&x, nullptr};
        const auto init = best_init(a, in, 4, 1000 * seed, 10);
        FitConfig cfg;
        const auto grid = path::make_grid(path::lambda_max(a, in, 4, cfg, init), G);
        const auto pr = path::path_fit(a, in, 4, 80, grid, cfg, init, {false});
        const std::size_t plateau = longest_run(pr, 80);
        const double f1 = metrics::outlier_prf(pr.selected_fit.flagged(), *x.truth_outliers).f1;
        const bool ok = f1 >= 0.95 && (!need_plateau || plateau >= 3);
        pass += ok;
        worst = std::max(worst, seconds_since(t0));
        per += fmt(" %s%.2f", need_plateau ? fmt("p%zu/", plateau).c_str() : "", f1);
    }
    const bool ok = pass >= 8 && worst < limit_s;
    return {ok ? Status::pass : Status::fail,
            fmt("%d/10 seeds (need 8), slowest seed %.1fs (limit %.0fs); f1:", pass, worst, limit_s) + per};
}

Outcome a1() { return spherical_identification(Algorithm::rkm, 1000, 30, true); }
Outcome a2() { return spherical_identification(Algorithm::rpc, 200, 60, false); }

Outcome a3() {
    const auto t0 = Clock::now();
    struct Row {
        const char* name;
        Algorithm a;
        double q;
        bool robust, weighted;
        double sum = 0;
    };
    std::string detail;
    bool ok = true;
    for (std::size_t nout : {40u, 80u}) {
        Row rows[] = {{"kmeans", Algorithm::rkm, 1, false, false},  {"rkm", Algorithm::rkm, 1, true, false},
                      {"skmeans", Algorithm::rkm, 1.5, false, false}, {"srkm", Algorithm::rkm, 1.5, true, false},
                      {"swrkm", Algorithm::wrkm, 1.5, true, true},    {"em", Algorithm::rpc, 1, false, false},
                      {"rpc", Algorithm::rpc, 1, true, false},        {"wrpc", Algorithm::wrpc, 1, true, true}};
        for (std::uint64_t s = 0; s < 10; ++s) {
            data::SphericalSpec spec;
            spec.seed = s;
            spec.n_outliers = nout;
            const DataSet x = data::gen_spherical(spec);
            const path::Input in{&x, nullptr};
            for (std::uint64_t r = 0; r < 10; ++r) {
                FitResult prev;
                for (auto& row : rows) {
                    FitConfig cfg;
                    cfg.seed = 5000 + 100 * s + r;
                    cfg.q = row.q;
                    FitResult f;
                    if (row.weighted) {
                        // reweight the tuned unweighted fit at its selected lambda
                        cfg.reweight = Reweight{};
                        cfg.lambda = prev.lambda;
                        f = row.a == Algorithm::wrkm ? rkm::wrkm_fit(x, 4, cfg, prev) : rpc::wrpc_fit(x, 4, cfg, prev);
                    } else {
                        const auto init = path::random_init(row.a, in, 4, cfg);
                        if (!row.robust) {
                            f = path::fit(row.a, in, 4, cfg, init);
                        } else {
                            const auto grid = path::make_grid(path::lambda_max(row.a, in, 4, cfg, init), 100);
                            f = path::path_fit(row.a, in, 4, nout, grid, cfg, init).selected_fit;
                        }
                    }
                    row.sum += metrics::rmse_centers(f.centroids->m, spec.centers);
                    prev = std::move(f);
                }
            }
        }
        double m[8];
        for (int i = 0; i < 8; ++i) m[i] = rows[i].sum / 100.0;
        const bool level = m[1] < m[0] && m[3] < m[2] && m[6] < m[5] && m[4] <= m[3] && m[7] <= m[6];
        ok = ok && level;
        detail += fmt(" [%zu out: km %.3f rkm %.3f | skm %.3f srkm %.3f swrkm %.3f | em %.3f rpc %.3f wrpc %.3f]", nout,
                      m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7]);
    }
    const double t = seconds_since(t0);
    ok = ok && t < 600;
    return {ok ? Status::pass : Status::fail, fmt("orderings %s, %.1fs (limit 600s);", ok ? "hold" : "violated", t) + detail};
}

Outcome a4() {
    std::string detail;
    bool ok = true;
    double worst = 0;
    for (Algorithm a : {Algorithm::krkm, Algorithm::krpc})
        for (double alpha : {0.2, -1.0}) {
            int pass = 0;
            double f1_sum = 0, ari_sum = 0;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto t0 = Clock::now();
                data::RingsSpec spec;
                spec.seed = seed;
                const DataSet x = data::gen_rings(spec);
                const auto k = kernel::kernel_gaussian(x, alpha > 0 ? alpha : kernel::alpha_kappa_heuristic(x));
                const path::Input in{nullptr, &k};
                const auto init = best_init(a, in, 2, 100 * seed, 10);
                FitConfig cfg;
                const auto grid = path::make_grid(path::lambda_max(a, in, 2, cfg, init), 1000);
                const auto pr = path::path_fit(a, in, 2, 60, grid, cfg, init);
                const auto& f = pr.selected_fit;
                const double f1 = metrics::outlier_prf(f.flagged(), *x.truth_outliers).f1;
                std::vector<bool> drop = f.flagged();
                for (std::size_t n = 0; n < drop.size(); ++n) drop[n] = drop[n] || (*x.truth_labels)[n] < 0;
                const double ari = metrics::ari(f.labels(), *x.truth_labels, drop);
                pass += f1 >= 0.90 && ari >= 0.95;
                f1_sum += f1;
                ari_sum += ari;
                worst = std::max(worst, seconds_since(t0));
            }
            ok = ok && pass >= 8;
            detail += fmt(" %s alpha=%s: %d/10 (mean f1 %.2f, ari %.2f);", path::algorithm_name(a).data(),
                          alpha > 0 ? "0.2" : "auto", pass, f1_sum / 10, ari_sum / 10);
        }
    ok = ok && worst < 60;
    return {ok ? Status::pass : Status::fail, fmt("need 8/10 in each, slowest seed %.1fs (limit 60s);", worst) + detail};
}

Outcome a5() {
    const auto t0 = Clock::now();
    Gen g(505);
    int good = 0;
    double worst_u = 0, worst_cost = 0, worst_mo = 0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t N = g.index(10, 60), p = g.index(1, 5), C = g.index(1, 4);
        const DataSet x = g.blobs(p, C, N / C, N - (N / C) * C + 2);
        FitConfig cfg;
        cfg.q = t % 2 ? 1.5 : 1.0;
        std::mt19937_64 rng(static_cast<std::uint64_t>(t));
        const Membership u0 = rkm::random_membership(x.n(), C, cfg.q, rng);
        {
            FitConfig probe = cfg;
            probe.lambda = kInf;
            const path::Input in{&x, nullptr};
            path::Init init;
            init.rkm = rkm::Start{u0, std::nullopt, std::nullopt};
            cfg.lambda = 0.3 * path::lambda_max(Algorithm::rkm, in, C, probe, init);
        }
        const FitResult a = rkm::rkm_fit(x, C, cfg, rkm::Start{u0, std::nullopt, std::nullopt});
        const FitResult b = kernel::krkm_fit(kernel::gram_linear(x), C, cfg, kernel::Start{u0, std::nullopt, std::nullopt});
        const double du = max_abs_diff(a.memberships.u, b.memberships.u);
        const double dc = testing::rel_diff(a.final_cost(), b.final_cost());
        const double scale = 1 + frobenius_norm(x.x) / std::sqrt(static_cast<double>(x.n()));
        const double dm = std::max(max_abs_diff(a.centroids->m, kernel::reconstruct(x, b.kernel_state->b)),
                                   max_abs_diff(a.outliers->o, kernel::reconstruct(x, b.kernel_state->a))) /
                          scale;
        worst_u = std::max(worst_u, du);
        worst_cost = std::max(worst_cost, dc);
        worst_mo = std::max(worst_mo, dm);
        const bool u_ok = cfg.q == 1.0 ? a.memberships.u == b.memberships.u : du <= 1e-8;
        good += u_ok && dc <= 1e-8 && dm <= 1e-8;
    }
    const double t = seconds_since(t0);
    const bool ok = good == 20 && t < 10;
    return {ok ? Status::pass : Status::fail,
            fmt("%d/20 instances; max |dU| %.1e (hard: exact), cost rel %.1e, M/O rel %.1e; %.2fs (limit 10s)", good,
                worst_u, worst_cost, worst_mo, t)};
}

Outcome a6() {
    const auto t0 = Clock::now();
    Gen g(606);
    int good = 0, flag_ok = 0;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const bool em = t % 2;
        const std::size_t p = g.index(1, 5), C = g.index(1, 4);
        const DataSet x = g.data(p, 1, 3.0);
        const Matrix m = g.matrix(p, C, 2.0);
        const Matrix w = g.stochastic(1, C);
        const double q = em ? 1.0 : (t % 4 == 0 ? 1.0 : g.uniform(1.01, 2.5));
        const double lam = g.uniform(0, 8), sigma = g.uniform(0.2, 3);
        Membership u;
        u.u = w;
        u.q = q;
        u.mode = MembershipMode::soft;
        OutlierState o;
        std::vector<long double> r(p);
        double thr;
        if (em) {
            rpc::Posteriors post{w};
            o = rpc::shrink_outliers_em(x, Centroids{m}, post, lam, sigma);
            thr = lam * sigma;
            for (std::size_t i = 0; i < p; ++i) {
                r[i] = x.x(i, 0);
                for (std::size_t c = 0; c < C; ++c) r[i] -= w(0, c) * m(i, c);
            }
        } else {
            const auto rr = rkm::compute_residuals(x, Centroids{m}, u);
            o = rkm::shrink_outliers(rr, {lam});
            thr = lam / 2;
            for (std::size_t i = 0; i < p; ++i) r[i] = rr.r(i, 0);
        }
        auto obj = [&](const std::vector<long double>& ov) {
            long double s = 0, wsum = 0;
            const long double on = std::sqrt(testing::sq_norm(ov));
            for (std::size_t c = 0; c < C; ++c) {
                long double d = 0;
                for (std::size_t i = 0; i < p; ++i) {
                    const long double e = x.x(i, 0) - m(i, c) - ov[i];
                    d += e * e;
                }
                const long double wc = std::pow(static_cast<long double>(w(0, c)), static_cast<long double>(q));
                s += wc * d;
                wsum += wc;
            }
            if (em) return s / (2.0L * sigma * sigma) + lam * on / sigma;
            return s + lam * wsum * on;
        };
        // the minimizer lies on the ray through r; line search along it
        auto along = [&](long double s) {
            std::vector<long double> v(p);
            for (std::size_t i = 0; i < p; ++i) v[i] = s * r[i];
            return obj(v);
        };
        std::vector<long double> grid_best(p, 0.0L);
        long double best = along(0);
        for (int k = 1; k <= 2000; ++k) best = std::min(best, along(k / 1000.0L));
        const long double sg = testing::golden_min(along, 0, 1.5);
        best = std::min(best, along(sg));
        std::vector<long double> ov(p);
        for (std::size_t i = 0; i < p; ++i) ov[i] = o.o(i, 0);
        const double gap = static_cast<double>((obj(ov) - best) / std::max(1.0L, std::abs(best)));
        worst = std::max(worst, gap);
        good += gap <= 1e-8;
        const double rn = std::sqrt(static_cast<double>(testing::sq_norm(r)));
        flag_ok += (o.norms[0] > 0.0) == (rn > thr);
    }
    const double t = seconds_since(t0);
    const bool ok = good == 1000 && flag_ok == 1000 && t < 5;
    return {ok ? Status::pass : Status::fail,
            fmt("%d/1000 within 1e-8 of line search (worst %.1e), flag rule %d/1000; %.2fs (limit 5s)", good, worst,
                flag_ok, t)};
}

Outcome a7() {
    const auto t0 = Clock::now();
    struct Kind {
        const char* name;
        Algorithm a;
        double q;
        int mono = 0, conv = 0;
    };
    Kind kinds[] = {{"rkm", Algorithm::rkm, 1.0},  {"srkm", Algorithm::rkm, 1.5}, {"wrkm", Algorithm::wrkm, 1.0},
                    {"rpc", Algorithm::rpc, 1.0},  {"wrpc", Algorithm::wrpc, 1.0}, {"krkm", Algorithm::krkm, 1.0},
                    {"krpc", Algorithm::krpc, 1.0}};
    for (std::uint64_t s = 0; s < 50; ++s) {
        data::SphericalSpec spec;
        spec.seed = 700 + s;
        spec.n_per_cluster = 25;
        spec.n_outliers = 20;
        const DataSet x = data::gen_spherical(spec);
        const auto k = kernel::kernel_gaussian(x, kernel::alpha_kappa_heuristic(x));
        const path::Input in{&x, &k};
        for (auto& kd : kinds) {
            FitConfig cfg;
            cfg.seed = s;
            cfg.q = kd.q;
            const auto init = path::random_init(kd.a, in, 4, cfg);
            cfg.lambda = 0.3 * path::lambda_max(kd.a, in, 4, cfg, init);
            if (kd.a == Algorithm::wrkm || kd.a == Algorithm::wrpc) cfg.reweight = Reweight{};
            // weighted kinds: the trace checked is the reweighted stage's own
            const FitResult f = path::fit(kd.a, in, 4, cfg, init);
            bool mono = true;
            for (std::size_t i = 1; i < f.cost_trace.size(); ++i)
                mono = mono && f.cost_trace[i] <= f.cost_trace[i - 1] + 1e-10 * std::abs(f.cost_trace[i - 1]);
            kd.mono += mono;
            kd.conv += f.converged;
        }
    }
    bool ok = true;
    std::string detail;
    for (const auto& kd : kinds) {
        ok = ok && kd.mono == 50 && kd.conv >= 48;
        detail += fmt(" %s %d/%d", kd.name, kd.mono, kd.conv);
    }
    return {ok ? Status::pass : Status::fail,
            fmt("monotone/converged of 50 (need 50 / 48):%s; %.1fs", detail.c_str(), seconds_since(t0))};
}

Outcome a8() {
    Gen g(808);
    int good = 0, exact = 0, scatter_ok = 0;
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const double L = g.uniform(0, 100), B = g.uniform(1e-3, 1e3), D = g.uniform(1, 1e4);
        const double s = rpc::solve_sigma(L, B, D);
        const double res = std::abs(D * s * s - L * s - B) / std::max({D * s * s, L * s, B});
        worst = std::max(worst, res);
        good += res <= 1e-8;
        exact += rpc::solve_sigma(0.0, B, D) == std::sqrt(B / D);
    }
    // O = 0 through the block update: weighted scatter / (N p)
    for (int t = 0; t < 100; ++t) {
        const DataSet x = g.data(g.index(1, 4), g.index(3, 30), 2.0);
        const Matrix m = g.matrix(x.p(), 3);
        const rpc::Posteriors post{g.stochastic(x.n(), 3)};
        long double sc = 0;
        for (std::size_t n = 0; n < x.n(); ++n)
            for (std::size_t c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < x.p(); ++i) {
                    const long double e = static_cast<long double>(x.x(i, n)) - m(i, c);
                    sc += post.gamma(n, c) * e * e;
                }
        const double want = static_cast<double>(std::sqrt(sc / (x.n() * x.p())));
        const double got = rpc::update_sigma(x, Centroids{m}, OutlierState::zeros(x.p(), x.n()), post, 3.0);
        scatter_ok += testing::rel_diff(got, want) <= 1e-14;
    }
    const bool ok = good == 1000 && exact == 1000 && scatter_ok == 100;
    return {ok ? Status::pass : Status::fail,
            fmt("plug-back %d/1000 (worst %.1e), O=0 closed form exact %d/1000, block update vs scatter %d/100", good,
                worst, exact, scatter_ok)};
}

Outcome a9() {
    int same = 0, total = 0;
    for (Algorithm a : {Algorithm::rkm, Algorithm::rpc, Algorithm::krkm, Algorithm::krpc})
        for (std::uint64_t s = 0; s < 10; ++s) {
            Gen g(900 + s);
            const DataSet x = g.blobs(2, 3, 15, 6);
            const auto k = kernel::kernel_gaussian(x, kernel::alpha_kappa_heuristic(x));
            const path::Input in{&x, &k};
            FitConfig cfg;
            cfg.seed = s;
            cfg.q = a == Algorithm::rkm && s % 2 ? 1.5 : 1.0;
            const auto init = path::random_init(a, in, 3, cfg);
            const FitResult base = path::fit(a, in, 3, cfg, init);
            const double lm = path::lambda_max(a, in, 3, cfg, init);
            for (double f : {1.0, 4.0}) {
                FitConfig c = cfg;
                c.lambda = f * lm;
                const FitResult r = path::fit(a, in, 3, c, init);
                ++total;
                same += r.outlier_count() == 0 && r.cost_trace == base.cost_trace &&
                        r.memberships.u == base.memberships.u;
            }
        }
    int zero = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        Gen g(950 + s);
        const DataSet x = g.blobs(2, 3, 15, 6);
        FitConfig cfg;
        cfg.seed = s;
        cfg.lambda = 0.0;
        const FitResult f = rkm::rkm_fit(x, 3, cfg);
        zero += f.final_cost() <= 1e-10 && f.outlier_count() == x.n();
    }
    const bool ok = same == total && zero == 10;
    return {ok ? Status::pass : Status::fail,
            fmt("lambda >= lambda_max reproduces the lambda=inf trajectory %d/%d; lambda=0 hard rkm %d/10", same, total,
                zero)};
}

Outcome a10() {
    Gen g(1010);
    int ident = 0, perm = 0, brute = 0;
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = g.index(2, 40);
        const int k = static_cast<int>(g.index(1, 6));
        const auto a = g.labels(n, k), b = g.labels(n, static_cast<int>(g.index(1, 6)));
        ident += metrics::ari(a, a) == 1.0;
        std::vector<int> map(static_cast<std::size_t>(k));
        std::iota(map.begin(), map.end(), 0);
        std::shuffle(map.begin(), map.end(), g.rng);
        std::vector<int> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = 3 * map[static_cast<std::size_t>(a[i])] - 7;
        perm += std::abs(metrics::ari(c, b) - metrics::ari(a, b)) <= 1e-14 && metrics::ari(a, c) == 1.0;
        const double d = std::abs(metrics::ari(a, b) - testing::ari_pairs(a, b));
        worst = std::max(worst, d);
        brute += d <= 1e-12;
    }
    const bool ok = ident == 100 && perm == 100 && brute == 100;
    return {ok ? Status::pass : Status::fail,
            fmt("identical %d/100, relabeling %d/100, pair-count oracle %d/100 (worst %.1e)", ident, perm, brute, worst)};
}

Outcome a11() {
    const std::filesystem::path dir = ROBCLUST_FIXTURES;
    const auto graph = dir / "football.txt", labels = dir / "football_labels.txt";
    if (!std::filesystem::exists(graph) || !std::filesystem::exists(labels))
        return {Status::skip, "football edge list / conference labels not in " + dir.string()};
    const auto t0 = Clock::now();
    const data::Graph gr = data::load_edgelist(graph.string());
    // labels file: "node conference" per line
    std::map<std::string, int> conf;
    std::map<std::string, std::string> team;
    {
        std::ifstream f(labels);
        std::string id, name;
        int c;
        while (f >> id >> c) {
            conf[id] = c;
            std::getline(f, name);
            team[id] = name;
        }
    }
    std::vector<int> truth(gr.ids.size());
    for (std::size_t n = 0; n < truth.size(); ++n) truth[n] = conf.count(gr.ids[n]) ? conf[gr.ids[n]] : -1;
    const auto k = kernel::kernel_graph(gr.adjacency);
    const path::Input in{nullptr, &k};
    double best_ari = -1;
    FitResult best;
    for (std::uint64_t r = 0; r < 20; ++r) {
        path::Init init;
        init.krkm = kernel::Start{kernel::spectral_init(gr.adjacency, 12, r), std::nullopt, std::nullopt};
        FitConfig cfg;
        const auto grid = path::make_grid(path::lambda_max(Algorithm::krkm, in, 12, cfg, init), 1000);
        const auto pr = path::path_fit(Algorithm::krkm, in, 12, 12, grid, cfg, init);
        const double a = metrics::ari(pr.selected_fit.labels(), truth, pr.selected_fit.flagged());
        if (a > best_ari) {
            best_ari = a;
            best = pr.selected_fit;
        }
    }
    int found = 0;
    const auto fl = best.flagged();
    for (std::size_t n = 0; n < fl.size(); ++n)
        if (fl[n])
            for (const char* name : {"Connecticut", "NotreDame", "Notre Dame", "Navy"})
                if (team[gr.ids[n]].find(name) != std::string::npos) ++found;
    const double t = seconds_since(t0);
    const bool ok = best_ari >= 0.85 && found >= 3 && t < 120;
    return {ok ? Status::pass : Status::fail, fmt("ARI %.3f (need 0.85), independents flagged %d/3, %.1fs", best_ari, found, t)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> crit = {
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},  {"A5", a5},  {"A6", a6},
        {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}};
    int failed = 0;
    for (const auto& [name, fn] : crit) {
        if (argc > 1) {
            bool want = false;
            for (int i = 1; i < argc; ++i) want = want || name == argv[i];
            if (!want) continue;
        }
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {Status::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
        failed += o.status == Status::fail;
        std::printf("%-4s %s  %s  (%.1fs)\n", name.c_str(), tag, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
