#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "robclust/core.hpp"
#include "robclust/kernel.hpp"
#include "robclust/rkm.hpp"

namespace robclust::path {

enum class Algorithm { rkm, wrkm, rpc, wrpc, krkm, krpc };
enum class Spacing { log, linear };

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);
bool is_kernel(Algorithm a);

struct LambdaGrid {
    std::vector<double> values;  // strictly decreasing, positive
};

// From lambda_max down to lambda_max * 1e-3.
LambdaGrid make_grid(double lambda_max, int G, Spacing spacing = Spacing::log);

// Exactly one of x / k is used depending on the algorithm.
struct Input {
    const DataSet* x = nullptr;
    const kernel::KernelMatrix* k = nullptr;
};

// Starting point; only the member matching the algorithm is read.
struct Init {
    std::optional<rkm::Start> rkm;
    std::optional<MixtureParams> rpc;
    std::optional<kernel::Start> krkm;
    std::optional<kernel::ProbStart> krpc;
};

Init random_init(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg);

// Single fit at cfg.lambda. Weighted algorithms first fit the unweighted
// model from `init`, then reweight from it.
FitResult fit(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const Init& init);
Init init_from(Algorithm a, const FitResult& fit);

// Smallest lambda keeping every outlier at zero along the lambda = inf
// trajectory from `init` (a few ulps above the largest activation threshold).
double lambda_max(Algorithm a, const Input& in, std::size_t C, const FitConfig& cfg, const Init& init);

struct PathPoint {
    double lambda = 0.0;
    std::size_t count = 0;
    std::vector<bool> flagged;
    std::vector<double> norms;
    int iterations = 0;
    bool converged = false;
    double cost = 0.0;
};

struct PathOptions {
    bool early_stop = true;
};

struct PathResult {
    std::vector<PathPoint> points;
    std::size_t selected = 0;
    bool target_reached = false;
    FitResult selected_fit;
    int total_iterations = 0;
};

PathResult path_fit(Algorithm a, const Input& in, std::size_t C, std::size_t target, const LambdaGrid& grid,
                    const FitConfig& cfg, const Init& init, const PathOptions& opts = {});

} // namespace robclust::path
