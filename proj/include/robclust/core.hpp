#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robclust/matrix.hpp"

namespace robclust {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyClusterError : std::runtime_error {
    std::size_t cluster;
    explicit EmptyClusterError(std::size_t c)
        : std::runtime_error("cluster " + std::to_string(c) + " has zero membership mass"), cluster(c) {}
};

// sigma collapsed to zero (all residuals vanished)
struct DegenerateFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t ln, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

struct GraphError : std::runtime_error {
    std::size_t node;
    GraphError(std::size_t nd, const std::string& what)
        : std::runtime_error("node " + std::to_string(nd) + ": " + what), node(nd) {}
};

// x is p x N: one point per column.
struct DataSet {
    Matrix x;
    std::optional<std::vector<int>> truth_labels;  // -1 marks a planted outlier
    std::optional<std::vector<bool>> truth_outliers;

    std::size_t n() const { return x.cols(); }
    std::size_t p() const { return x.rows(); }
    void validate() const;
};

// Build from row-major N x p values.
DataSet dataset_from_rows(const std::vector<std::vector<double>>& rows);

enum class MembershipMode { hard, soft };

struct Membership {
    Matrix u;  // N x C
    double q = 1.0;
    MembershipMode mode = MembershipMode::hard;

    std::size_t n() const { return u.rows(); }
    std::size_t c() const { return u.cols(); }
    // argmax per row, lowest index on ties
    std::vector<int> labels() const;
    static Membership from_labels(const std::vector<int>& labels, std::size_t C);
};

struct Centroids {
    Matrix m;  // p x C
};

struct OutlierState {
    Matrix o;  // p x N
    std::vector<double> norms;

    static OutlierState zeros(std::size_t p, std::size_t n);
    static OutlierState from_matrix(Matrix o);
    void refresh_norms();
    std::size_t count() const;
    std::vector<bool> flagged() const;
};

struct MixtureParams {
    std::vector<double> pi;
    Centroids m;
    double sigma = 1.0;
    OutlierState o;
};

struct Reweight {
    std::optional<double> epsilon;  // default derived from the warm start
};

struct FitConfig {
    double lambda = kInf;
    int max_iters = 300;
    std::optional<double> eps_stop;  // algorithm default when unset
    std::uint64_t seed = 0;
    double q = 1.0;
    std::optional<Reweight> reweight;

    void validate() const;
    bool soft() const { return q > 1.0; }
};

// Coefficients of kernel-space iterates: O = Phi A, M = Phi B, R = Phi Delta.
struct KernelState {
    Matrix a;      // N x N
    Matrix b;      // N x C
    Matrix delta;  // N x N
    Matrix dist;   // N x C squared kernel distances ||e_n - beta_c - alpha_n||_K^2
};

struct FitResult {
    Membership memberships;
    std::optional<Centroids> centroids;
    std::optional<OutlierState> outliers;
    std::optional<KernelState> kernel_state;
    std::vector<double> outlier_norms;

    std::vector<double> pi;  // probabilistic fits only
    double sigma = 0.0;
    double lambda = kInf;
    double epsilon = 0.0;  // reweighting epsilon, 0 when unweighted

    std::vector<double> cost_trace;  // one entry per full cycle
    // smallest lambda that would have kept every outlier at zero in that cycle
    std::vector<double> activation_trace;
    std::vector<std::size_t> outlier_count_trace;

    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
    int repairs = 0;  // empty-cluster reseeds

    std::vector<int> labels() const { return memberships.labels(); }
    std::vector<bool> flagged() const;
    std::size_t outlier_count() const;
    double final_cost() const { return cost_trace.empty() ? kInf : cost_trace.back(); }
};

// sum_n sum_c u^q (||x - m - o||^2 + lambda ||o||)
double rkm_cost(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o, double lambda);

// -log-likelihood of the spherical mixture plus lambda * sum ||o|| / sigma.
double rpc_objective(const DataSet& x, const MixtureParams& params, double lambda);

enum class Constraint { c1_binary, c2_nonempty, c3_row_sum, c4_box };

struct Violation {
    Constraint constraint;
    std::size_t index;  // row, or column for c2
    bool warning;
};

std::vector<Violation> validate_membership(const Membership& u, double tol = 1e-9);

} // namespace robclust
