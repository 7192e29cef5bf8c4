#include "robclust/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "robclust/core.hpp"
#include "robclust/data.hpp"
#include "robclust/kernel.hpp"
#include "robclust/metrics.hpp"
#include "robclust/path.hpp"

namespace robclust::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KernelSpec {
    enum Kind { none, linear, gaussian, poly, graph } kind = none;
    std::optional<double> alpha;  // unset means auto
    int degree = 2;
    std::string text;
};

KernelSpec parse_kernel(const std::string& s) {
    KernelSpec k;
    k.text = s;
    if (s.empty()) return k;
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    try {
        if (head == "linear" && arg.empty()) {
            k.kind = KernelSpec::linear;
        } else if (head == "graph" && arg.empty()) {
            k.kind = KernelSpec::graph;
        } else if (head == "gaussian") {
            k.kind = KernelSpec::gaussian;
            if (arg.empty()) throw UsageError("gaussian kernel needs :ALPHA or :auto");
            if (arg != "auto") {
                std::size_t used = 0;
                k.alpha = std::stod(arg, &used);
                if (used != arg.size() || !(*k.alpha > 0.0)) throw UsageError("bad gaussian alpha: " + arg);
            }
        } else if (head == "poly") {
            k.kind = KernelSpec::poly;
            std::size_t used = 0;
            k.degree = std::stoi(arg, &used);
            if (used != arg.size() || k.degree < 1) throw UsageError("bad polynomial degree: " + arg);
        } else {
            throw UsageError("unknown kernel: " + s);
        }
    } catch (const std::logic_error&) {
        throw UsageError("bad kernel argument: " + s);
    }
    return k;
}

json lambda_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_columns(const Matrix& m) {
    json a = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        json col = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
        a.push_back(std::move(col));
    }
    return a;
}

json matrix_rows(const Matrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        a.push_back(std::move(row));
    }
    return a;
}

Matrix centers_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw DataError("centers must be a non-empty array");
    const std::size_t C = j.size(), p = j[0].size();
    Matrix m(p, C);
    for (std::size_t c = 0; c < C; ++c) {
        if (j[c].size() != p) throw DataError("ragged centers");
        for (std::size_t i = 0; i < p; ++i) m(i, c) = j[c][i].get<double>();
    }
    return m;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path);
    f << text;
}

// ---- gen ----

struct GenOpts {
    std::string kind;
    std::uint64_t seed = 0;
    std::string out, truth;
    std::optional<std::size_t> n_outliers, n_per_cluster;
};

int cmd_gen(const GenOpts& o, std::ostream& out) {
    DataSet d;
    Matrix centers;
    if (o.kind == "spherical") {
        data::SphericalSpec sp;
        sp.seed = o.seed;
        if (o.n_outliers) sp.n_outliers = *o.n_outliers;
        if (o.n_per_cluster) sp.n_per_cluster = *o.n_per_cluster;
        d = data::gen_spherical(sp);
        centers = sp.centers;
    } else {
        data::RingsSpec rs;
        rs.seed = o.seed;
        if (o.n_outliers) rs.n_outliers = *o.n_outliers;
        if (o.n_per_cluster) throw UsageError("--n-per-cluster applies to spherical data only");
        d = data::gen_rings(rs);
    }
    std::ostringstream csv;
    data::write_csv(csv, d);
    write_output(o.out, csv.str(), out);

    std::string truth_path = o.truth;
    if (truth_path.empty() && !o.out.empty() && o.out != "-") truth_path = o.out + ".truth.json";
    if (!truth_path.empty()) {
        json t;
        t["schema"] = 1;
        t["kind"] = o.kind;
        t["seed"] = o.seed;
        t["labels"] = *d.truth_labels;
        json flags = json::array();
        for (bool b : *d.truth_outliers) flags.push_back(b);
        t["outliers"] = flags;
        if (centers.cols() > 0) t["centers"] = matrix_columns(centers);
        write_output(truth_path, t.dump(2) + "\n", out);
    }
    return ok;
}

// ---- truth ----

struct Truth {
    std::vector<int> labels;  // -1 = outlier
    std::optional<Matrix> centers;
};

Truth load_truth(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot read " + path);
    Truth t;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        json j;
        try {
            j = json::parse(f);
            t.labels = j.at("labels").get<std::vector<int>>();
            if (j.contains("centers")) t.centers = centers_from_json(j["centers"]);
        } catch (const json::exception& e) {
            throw DataError(path + ": " + e.what());
        }
    } else {
        std::string tok;
        while (f >> tok) {
            try {
                std::size_t used = 0;
                t.labels.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::logic_error&) {
                throw DataError(path + ": bad label '" + tok + "'");
            }
        }
    }
    return t;
}

json truth_metrics(const std::vector<int>& pred, const std::vector<bool>& flagged, const std::optional<Matrix>& est,
                   const Truth& t) {
    if (t.labels.size() != pred.size())
        throw DataError("truth has " + std::to_string(t.labels.size()) + " labels, prediction has " +
                        std::to_string(pred.size()));
    std::vector<bool> truth_out(t.labels.size()), excl(t.labels.size());
    for (std::size_t n = 0; n < t.labels.size(); ++n) {
        truth_out[n] = t.labels[n] < 0;
        excl[n] = truth_out[n] || flagged[n];
    }
    json m;
    m["ari"] = metrics::ari(pred, t.labels, excl);
    const auto prf = metrics::outlier_prf(flagged, truth_out);
    m["precision"] = prf.precision;
    m["recall"] = prf.recall;
    m["f1"] = prf.f1;
    if (t.centers && est && est->rows() == t.centers->rows() && est->cols() == t.centers->cols())
        m["rmse"] = metrics::rmse_centers(*est, *t.centers);
    return m;
}

// ---- fit / path ----

struct FitOpts {
    std::string algo = "rkm";
    std::string input;
    std::size_t clusters = 0;
    std::optional<double> lambda;
    std::optional<std::size_t> target;
    double q = 1.0;
    std::uint64_t seed = 0;
    int restarts = 1;
    std::string kernel;
    std::string out;
    bool emit_soft = false;
    int grid_size = 100;
    std::string spacing = "log";
    std::optional<double> reweight_eps;
    int max_iters = 300;
    bool label_column = false;
    std::string truth;
    bool no_early_stop = false;
};

struct Problem {
    std::optional<DataSet> x;
    std::optional<kernel::KernelMatrix> k;
    std::optional<data::Graph> graph;
    KernelSpec kspec;
    double alpha_used = 0.0;
};

Problem load_problem(const FitOpts& o, bool kernel_algo, std::ostream& err) {
    Problem pb;
    pb.kspec = parse_kernel(o.kernel);
    if (!kernel_algo && pb.kspec.kind != KernelSpec::none)
        throw UsageError("--kernel applies to krkm/krpc only");
    if (kernel_algo && pb.kspec.kind == KernelSpec::none) pb.kspec.kind = KernelSpec::linear;
    if (o.input.empty()) throw UsageError("--input is required");

    if (pb.kspec.kind == KernelSpec::graph) {
        pb.graph = data::load_edgelist(o.input);
        for (const auto& w : pb.graph->warnings) err << "warning: " << w << "\n";
        pb.k = kernel::kernel_graph(pb.graph->adjacency);
        return pb;
    }
    pb.x = data::load_csv(o.input, o.label_column);
    if (!kernel_algo) return pb;
    switch (pb.kspec.kind) {
    case KernelSpec::linear: pb.k = kernel::gram_linear(*pb.x); break;
    case KernelSpec::gaussian:
        pb.alpha_used = pb.kspec.alpha ? *pb.kspec.alpha : kernel::alpha_kappa_heuristic(*pb.x);
        pb.k = kernel::kernel_gaussian(*pb.x, pb.alpha_used);
        break;
    case KernelSpec::poly: pb.k = kernel::kernel_polynomial(*pb.x, pb.kspec.degree); break;
    default: break;
    }
    return pb;
}

struct RunOutcome {
    FitResult fit;
    std::optional<path::PathResult> path;
    double lambda_max = 0.0;
    std::uint64_t seed = 0;
};

path::Init make_init(path::Algorithm a, const path::Input& in, const Problem& pb, std::size_t C, const FitConfig& cfg) {
    if (pb.graph && a == path::Algorithm::krkm) {
        path::Init init;
        init.krkm = kernel::Start{kernel::spectral_init(pb.graph->adjacency, C, cfg.seed), std::nullopt, std::nullopt};
        return init;
    }
    return path::random_init(a, in, C, cfg);
}

RunOutcome run_one(path::Algorithm a, const path::Input& in, const Problem& pb, std::size_t C, FitConfig cfg,
                   const FitOpts& o, bool path_mode, bool early_stop) {
    RunOutcome r;
    r.seed = cfg.seed;
    const path::Init init = make_init(a, in, pb, C, cfg);
    if (!path_mode) {
        r.fit = path::fit(a, in, C, cfg, init);
        return r;
    }
    r.lambda_max = path::lambda_max(a, in, C, cfg, init);
    const path::Spacing sp = o.spacing == "linear" ? path::Spacing::linear : path::Spacing::log;
    // lambda_max can be 0 when every point sits on its centroid
    const auto grid = path::make_grid(r.lambda_max > 0.0 ? r.lambda_max : 1e-12, o.grid_size, sp);
    path::PathOptions po;
    po.early_stop = early_stop;
    r.path = path::path_fit(a, in, C, o.target.value_or(0), grid, cfg, init, po);
    r.fit = r.path->selected_fit;
    return r;
}

bool better(const RunOutcome& a, const RunOutcome& b, std::optional<std::size_t> target) {
    if (target) {
        auto gap = [&](const RunOutcome& r) {
            const std::size_t c = r.fit.outlier_count();
            return c > *target ? c - *target : *target - c;
        };
        if (gap(a) != gap(b)) return gap(a) < gap(b);
    }
    return a.fit.final_cost() < b.fit.final_cost();
}

json fit_block(const FitResult& f, const Problem& pb, bool prob, bool emit_soft) {
    json j;
    j["n"] = f.memberships.n();
    j["labels"] = f.labels();
    json flags = json::array();
    for (bool b : f.flagged()) flags.push_back(b);
    j["flagged"] = flags;
    j["outlier_norms"] = f.outlier_norms;
    if (emit_soft) j["soft"] = matrix_rows(f.memberships.u);
    if (f.centroids) {
        j["centroids"] = matrix_columns(f.centroids->m);
    } else if (f.kernel_state && pb.x && pb.kspec.kind == KernelSpec::linear) {
        j["centroids"] = matrix_columns(kernel::reconstruct(*pb.x, f.kernel_state->b));
    }
    if (prob) {
        j["pi"] = f.pi;
        j["sigma"] = f.sigma;
    }
    if (pb.graph) j["ids"] = pb.graph->ids;
    json s;
    s["lambda"] = lambda_json(f.lambda);
    s["outlier_count"] = f.outlier_count();
    s["iterations"] = f.iterations;
    s["converged"] = f.converged;
    s["degenerate"] = f.degenerate;
    s["repairs"] = f.repairs;
    if (f.epsilon > 0.0) s["epsilon"] = f.epsilon;
    json trace = json::array();
    for (double c : f.cost_trace) trace.push_back(lambda_json(c));
    s["cost_trace"] = trace;
    j["summary"] = s;
    return j;
}

json path_block(const path::PathResult& pr, double lambda_max, bool full) {
    json j;
    j["lambda_max"] = lambda_max;
    j["selected"] = pr.selected;
    j["selected_lambda"] = pr.points[pr.selected].lambda;
    j["target_reached"] = pr.target_reached;
    j["total_iterations"] = pr.total_iterations;
    json pts = json::array();
    for (const auto& p : pr.points) {
        json q;
        q["lambda"] = p.lambda;
        q["count"] = p.count;
        q["iterations"] = p.iterations;
        q["converged"] = p.converged;
        q["cost"] = lambda_json(p.cost);
        if (full) q["norms"] = p.norms;
        pts.push_back(std::move(q));
    }
    j["points"] = pts;
    return j;
}

int cmd_fit(const FitOpts& o, bool path_cmd, std::ostream& out, std::ostream& err) {
    const bool kmeans = o.algo == "kmeans";
    const auto algo = kmeans ? std::optional<path::Algorithm>(path::Algorithm::rkm) : path::parse_algorithm(o.algo);
    if (!algo) throw UsageError("unknown algorithm: " + o.algo);
    if (o.clusters < 1) throw UsageError("--clusters must be >= 1");
    if (o.lambda && o.target) throw UsageError("--lambda and --target-outliers are mutually exclusive");
    if (kmeans && (o.lambda || o.target)) throw UsageError("kmeans takes neither --lambda nor --target-outliers");
    if (path_cmd && o.lambda) throw UsageError("path takes --target-outliers, not --lambda");
    if (!path_cmd && !kmeans && !o.lambda && !o.target)
        throw UsageError("one of --lambda or --target-outliers is required");
    if (o.lambda && !(*o.lambda >= 0.0)) throw UsageError("--lambda must be >= 0");
    if (o.restarts < 1) throw UsageError("--restarts must be >= 1");
    if (o.grid_size < 2 || o.grid_size > 1000) throw UsageError("--grid-size must be in [2, 1000]");
    const bool prob = *algo == path::Algorithm::rpc || *algo == path::Algorithm::wrpc || *algo == path::Algorithm::krpc;
    if (prob && o.q != 1.0) throw UsageError("--q applies to k-means style algorithms only");

    const Problem pb = load_problem(o, path::is_kernel(*algo), err);
    const std::size_t N = pb.k ? pb.k->n() : pb.x->n();
    if (o.clusters > N) throw DataError("more clusters than points");
    if (o.target && *o.target > N) throw UsageError("--target-outliers exceeds the number of points");

    path::Input in{pb.x ? &*pb.x : nullptr, pb.k ? &*pb.k : nullptr};
    FitConfig cfg;
    cfg.lambda = o.lambda.value_or(kInf);
    cfg.q = o.q;
    cfg.max_iters = o.max_iters;
    if (*algo == path::Algorithm::wrkm || *algo == path::Algorithm::wrpc) cfg.reweight = Reweight{o.reweight_eps};
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const bool path_mode = path_cmd || o.target.has_value();
    const bool early_stop = !path_cmd && !o.no_early_stop;
    std::vector<std::future<RunOutcome>> jobs;
    for (int r = 0; r < o.restarts; ++r) {
        FitConfig c = cfg;
        c.seed = o.seed + static_cast<std::uint64_t>(r);
        jobs.push_back(std::async(std::launch::async, run_one, *algo, std::cref(in), std::cref(pb), o.clusters, c,
                                  std::cref(o), path_mode, early_stop));
    }
    std::vector<RunOutcome> runs;
    for (auto& j : jobs) runs.push_back(j.get());
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (better(runs[r], runs[best], o.target)) best = r;
    const RunOutcome& win = runs[best];

    json rep;
    rep["schema"] = 1;
    rep["command"] = path_cmd ? "path" : "fit";
    rep["algorithm"] = o.algo;
    json cfgj;
    cfgj["input"] = o.input;
    cfgj["clusters"] = o.clusters;
    cfgj["lambda"] = o.lambda ? lambda_json(*o.lambda) : json(nullptr);
    cfgj["target_outliers"] = o.target ? json(*o.target) : json(nullptr);
    cfgj["q"] = o.q;
    cfgj["seed"] = o.seed;
    cfgj["restarts"] = o.restarts;
    cfgj["max_iters"] = o.max_iters;
    if (path_mode) {
        cfgj["grid_size"] = o.grid_size;
        cfgj["spacing"] = o.spacing;
        cfgj["early_stop"] = early_stop;
    }
    if (pb.kspec.kind != KernelSpec::none) {
        cfgj["kernel"] = pb.kspec.text.empty() ? "linear" : pb.kspec.text;
        if (pb.kspec.kind == KernelSpec::gaussian) cfgj["alpha"] = pb.alpha_used;
    }
    if (o.reweight_eps) cfgj["reweight_eps"] = *o.reweight_eps;
    rep["config"] = cfgj;
    rep["selected_seed"] = win.seed;
    rep["result"] = fit_block(win.fit, pb, prob, o.emit_soft);
    if (win.path) rep["path"] = path_block(*win.path, win.lambda_max, path_cmd);

    std::optional<Truth> truth;
    if (!o.truth.empty()) {
        truth = load_truth(o.truth);
    } else if (pb.x && pb.x->truth_labels) {
        truth = Truth{*pb.x->truth_labels, std::nullopt};
    }
    if (truth) {
        std::optional<Matrix> est;
        if (win.fit.centroids) est = win.fit.centroids->m;
        rep["metrics"] = truth_metrics(win.fit.labels(), win.fit.flagged(), est, *truth);
    }

    write_output(o.out, rep.dump(2) + "\n", out);
    if (win.fit.degenerate) {
        err << "error: variance estimate hit its floor (degenerate fit)\n";
        return degenerate;
    }
    if (win.path && !win.path->target_reached && o.target)
        err << "warning: target-not-reached, selected the closest grid point\n";
    return ok;
}

// ---- eval ----

int cmd_eval(const std::string& pred_path, const std::string& truth_path, const std::string& out_path,
             std::ostream& out) {
    std::ifstream f(pred_path);
    if (!f) throw DataError("cannot read " + pred_path);
    json rep;
    std::vector<int> labels;
    std::vector<bool> flagged;
    std::optional<Matrix> est;
    try {
        rep = json::parse(f);
        if (rep.value("schema", 0) != 1) throw DataError(pred_path + ": unsupported report schema");
        const json& res = rep.at("result");
        labels = res.at("labels").get<std::vector<int>>();
        flagged = res.at("flagged").get<std::vector<bool>>();
        if (res.contains("centroids")) est = centers_from_json(res["centroids"]);
    } catch (const json::exception& e) {
        throw DataError(pred_path + ": " + e.what());
    }
    if (flagged.size() != labels.size()) throw DataError(pred_path + ": labels and flags differ in length");
    const Truth t = load_truth(truth_path);
    json m = truth_metrics(labels, flagged, est, t);
    m["schema"] = 1;
    m["command"] = "eval";
    write_output(out_path, m.dump(2) + "\n", out);
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"robust clustering with outlier-sparsity regularization", "robclust"};
    app.require_subcommand(1);

    GenOpts g;
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("kind", g.kind, "spherical | rings")->required()->check(CLI::IsMember({"spherical", "rings"}));
    gen->add_option("--seed", g.seed);
    gen->add_option("--out", g.out, "CSV path (stdout when absent)");
    gen->add_option("--truth", g.truth, "truth sidecar path (default OUT.truth.json)");
    gen->add_option("--n-outliers", g.n_outliers);
    gen->add_option("--n-per-cluster", g.n_per_cluster);

    FitOpts fo, po;
    auto add_common = [](CLI::App* c, FitOpts& o) {
        c->add_option("--algo", o.algo)->check(CLI::IsMember({"kmeans", "rkm", "wrkm", "rpc", "wrpc", "krkm", "krpc"}));
        c->add_option("--input", o.input)->required();
        c->add_option("--clusters,-C", o.clusters)->required();
        c->add_option("--target-outliers", o.target);
        c->add_option("--q", o.q);
        c->add_option("--seed", o.seed);
        c->add_option("--restarts", o.restarts);
        c->add_option("--kernel", o.kernel, "linear | gaussian:ALPHA | gaussian:auto | poly:DEGREE | graph");
        c->add_option("--out", o.out);
        c->add_flag("--emit-soft", o.emit_soft);
        c->add_option("--grid-size", o.grid_size);
        c->add_option("--spacing", o.spacing)->check(CLI::IsMember({"log", "linear"}));
        c->add_option("--reweight-eps", o.reweight_eps);
        c->add_option("--max-iters", o.max_iters);
        c->add_flag("--label-column", o.label_column, "last CSV column holds truth labels");
        c->add_option("--truth", o.truth, "truth sidecar (.json) or whitespace-separated labels");
    };
    auto* fit = app.add_subcommand("fit", "fit at a fixed lambda or tune lambda to a target outlier count");
    add_common(fit, fo);
    fit->add_option("--lambda", fo.lambda);
    fit->add_flag("--no-early-stop", fo.no_early_stop);
    auto* pth = app.add_subcommand("path", "fit the full lambda path and report per-lambda counts and norms");
    add_common(pth, po);

    std::string pred, truth, eval_out;
    auto* ev = app.add_subcommand("eval", "score a report against truth");
    ev->add_option("--pred", pred)->required();
    ev->add_option("--truth", truth)->required();
    ev->add_option("--out", eval_out);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            err << sub->help();
        return usage;
    }

    try {
        if (gen->parsed()) return cmd_gen(g, out);
        if (fit->parsed()) return cmd_fit(fo, false, out, err);
        if (pth->parsed()) return cmd_fit(po, true, out, err);
        if (ev->parsed()) return cmd_eval(pred, truth, eval_out, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const DegenerateFitError& e) {
        err << "error: " << e.what() << "\n";
        return degenerate;
    } catch (const ParseError& e) {
        err << "data error: " << e.what() << "\n";
        return data_error;
    } catch (const GraphError& e) {
        err << "data error: " << e.what() << "\n";
        return data_error;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return data_error;
    } catch (const DimensionError& e) {
        err << "data error: " << e.what() << "\n";
        return data_error;
    } catch (const std::invalid_argument& e) {
        err << "data error: " << e.what() << "\n";
        return data_error;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return data_error;
    }
    return usage;
}

} // namespace robclust::cli
