#include "robclust/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "robclust/rpc.hpp"

namespace robclust::path {
namespace {

struct Named {
    Algorithm a;
    std::string_view name;
};
constexpr Named kNames[] = {{Algorithm::rkm, "rkm"},   {Algorithm::wrkm, "wrkm"}, {Algorithm::rpc, "rpc"},
                            {Algorithm::wrpc, "wrpc"}, {Algorithm::krkm, "krkm"}, {Algorithm::krpc, "krpc"}};

Algorithm unweighted(Algorithm a) {
    if (a == Algorithm::wrkm) return Algorithm::rkm;
    if (a == Algorithm::wrpc) return Algorithm::rpc;
    return a;
}

const DataSet& need_x(const Input& in) {
    if (!in.x) throw std::invalid_argument("algorithm needs a dataset");
    return *in.x;
}

const kernel::KernelMatrix& need_k(const Input& in) {
    if (!in.k) throw std::invalid_argument("algorithm needs a kernel matrix");
    return *in.k;
}

} // namespace

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (const auto& n : kNames)
        if (n.name == name) return n.a;
    return std::nullopt;
}

std::string_view algorithm_name(Algorithm a) {
    for (const auto& n : kNames)
        if (n.a == a) return n.name;
    return "?";
}

bool is_kernel(Algorithm a) { return a == Algorithm::krkm || a == Algorithm::krpc; }

LambdaGrid make_grid(double lambda_max, int G, Spacing spacing) {
    if (G < 2) throw std::invalid_argument("grid needs at least two points");
    if (G > 1000) throw std::invalid_argument("grid has at most 1000 points");
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw std::invalid_argument("lambda_max must be positive");
    LambdaGrid g;
    g.values.resize(static_cast<std::size_t>(G));
    const double lo = lambda_max * 1e-3;
    for (int i = 0; i < G; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(G - 1);
        g.values[static_cast<std::size_t>(i)] =
            spacing == Spacing::log ? lambda_max * std::pow(1e-3, f) : lambda_max - f * (lambda_max - lo);
    }
    g.values.front() = lambda_max;
    g.values.back() = lo;
    return g;
}

Init random_init(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    Init init;
    switch (unweighted(a)) {
    case Algorithm::rkm:
        init.rkm = rkm::Start{rkm::random_membership(need_x(in).n(), C, cfg.q, rng), std::nullopt, std::nullopt};
        break;
    case Algorithm::rpc: init.rpc = rpc::init_params(need_x(in), C, rng); break;
    case Algorithm::krkm:
        init.krkm = kernel::Start{rkm::random_membership(need_k(in).n(), C, cfg.q, rng), std::nullopt, std::nullopt};
        break;
    case Algorithm::krpc: init.krpc = kernel::random_prob_start(need_k(in), C, rng); break;
    default: break;
    }
    return init;
}

Init init_from(Algorithm a, const FitResult& f) {
    Init init;
    switch (unweighted(a)) {
    case Algorithm::rkm: init.rkm = rkm::start_from(f); break;
    case Algorithm::rpc: init.rpc = rpc::params_from(f); break;
    case Algorithm::krkm: init.krkm = kernel::start_from(f); break;
    case Algorithm::krpc: init.krpc = kernel::prob_start_from(f); break;
    default: break;
    }
    return init;
}

namespace {

FitResult fit_unweighted(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const Init& init) {
    switch (unweighted(a)) {
    case Algorithm::rkm:
        if (!init.rkm) throw std::invalid_argument("missing rkm start");
        return rkm::rkm_fit(need_x(in), C, cfg, *init.rkm);
    case Algorithm::rpc:
        if (!init.rpc) throw std::invalid_argument("missing rpc start");
        return rpc::rpc_fit(need_x(in), C, cfg, *init.rpc);
    case Algorithm::krkm:
        if (!init.krkm) throw std::invalid_argument("missing krkm start");
        return kernel::krkm_fit(need_k(in), C, cfg, *init.krkm);
    case Algorithm::krpc:
        if (!init.krpc) throw std::invalid_argument("missing krpc start");
        return kernel::krpc_fit(need_k(in), C, cfg, *init.krpc);
    default: break;
    }
    throw std::logic_error("unreachable");
}

FitResult reweighted(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const FitResult& warm) {
    if (a == Algorithm::wrkm) return rkm::wrkm_fit(need_x(in), C, cfg, warm);
    return rpc::wrpc_fit(need_x(in), C, cfg, warm);
}

} // namespace

FitResult fit(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const Init& init) {
    FitResult base = fit_unweighted(a, in, C, cfg, init);
    if (a != Algorithm::wrkm && a != Algorithm::wrpc) return base;
    return reweighted(a, in, C, cfg, base);
}

double lambda_max(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const Init& init) {
    FitConfig base = cfg;
    base.lambda = kInf;
    base.reweight.reset();
    const FitResult f = fit_unweighted(a, in, C, base, init);
    double m = 0.0;
    for (double v : f.activation_trace) m = std::max(m, v);
    // thresholds compare as lambda * sigma or lambda / 2; keep clear of rounding
    return m * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
}

PathResult path_fit(Algorithm a, const Input& in, std::size_t C, std::size_t target, const LambdaGrid& grid,
                    const FitConfig& cfg, const Init& init, const PathOptions& opts) {
    if (grid.values.empty()) throw std::invalid_argument("empty grid");
    const std::size_t N = is_kernel(a) ? need_k(in).n() : need_x(in).n();
    if (target > N) throw std::invalid_argument("target outlier count exceeds N");
    for (std::size_t i = 1; i < grid.values.size(); ++i)
        if (!(grid.values[i] < grid.values[i - 1]) || !(grid.values[i] > 0.0))
            throw std::invalid_argument("grid must be strictly decreasing and positive");

    PathResult res;
    Init state = init;
    std::size_t best_gap = std::numeric_limits<std::size_t>::max();
    FitResult last;
    for (std::size_t g = 0; g < grid.values.size(); ++g) {
        FitConfig c = cfg;
        c.lambda = grid.values[g];
        FitResult base = fit_unweighted(a, in, C, c, state);
        res.total_iterations += base.iterations;
        state = init_from(a, base);
        FitResult f;
        if (a == Algorithm::wrkm || a == Algorithm::wrpc) {
            f = reweighted(a, in, C, c, base);
            res.total_iterations += f.iterations;
        } else {
            f = std::move(base);
        }

        PathPoint pt;
        pt.lambda = c.lambda;
        pt.count = f.outlier_count();
        pt.flagged = f.flagged();
        pt.norms = f.outlier_norms;
        pt.iterations = f.iterations;
        pt.converged = f.converged;
        pt.cost = f.final_cost();
        const std::size_t gap = pt.count > target ? pt.count - target : target - pt.count;
        const bool reached = pt.count >= target;
        res.points.push_back(std::move(pt));
        if (gap < best_gap) {
            best_gap = gap;
            res.selected = g;
            res.selected_fit = f;
        }
        last = std::move(f);
        if (reached) res.target_reached = true;
        if (reached && opts.early_stop) break;
    }
    if (!res.target_reached) {
        res.selected = res.points.size() - 1;
        res.selected_fit = std::move(last);
    }
    return res;
}

} // namespace robclust::path
