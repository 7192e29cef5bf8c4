#pragma once

#include <optional>
#include <random>
#include <vector>

#include "robclust/core.hpp"

namespace robclust::rkm {

struct Residuals {
    Matrix r;  // p x N
};

using PerPointLambda = std::vector<double>;

Centroids update_centroids(const DataSet& x, const Membership& u, const OutlierState& o);
// Weighted-average residual of each point over the clusters.
Residuals compute_residuals(const DataSet& x, const Centroids& m, const Membership& u);
// o_n = r_n [1 - lam_n / (2 ||r_n||)]_+
OutlierState shrink_outliers(const Residuals& r, const PerPointLambda& lam);
// Generic row-wise soft update given per-point penalties added to every distance.
Membership update_memberships_soft(const DataSet& x, const Centroids& m, const OutlierState& o,
                                   const std::vector<double>& penalty, double q);
Membership update_memberships_soft(const DataSet& x, const Centroids& m, const OutlierState& o, double lambda,
                                   double q);
Membership update_memberships_hard(const DataSet& x, const Centroids& m, const OutlierState& o);
PerPointLambda reweight(const OutlierState& o_prev, double lambda, double epsilon);

// 1e-2 x median nonzero norm, floored at 1e-6.
double default_epsilon(const std::vector<double>& norms);

Membership random_membership(std::size_t N, std::size_t C, double q, std::mt19937_64& rng);

// Starting point for a fit. Without o the outliers start at zero. m, when
// given, is the previous centroid estimate used for the first stopping test.
struct Start {
    Membership u;
    std::optional<OutlierState> o;
    std::optional<Centroids> m;
};

Start start_from(const FitResult& fit);

FitResult rkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg);
FitResult rkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const Start& start);
// Reweighted fit warm-started from a finished rkm fit at the same lambda.
FitResult wrkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const FitResult& warm);
// Path variant: reweighted fit from an arbitrary start with a fixed epsilon.
FitResult wrkm_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const Start& start, double epsilon);

// Weighted objective: sum u^q (||x-m-o||^2 + lambda log(1 + ||o||/eps)).
double wrkm_cost(const DataSet& x, const Membership& u, const Centroids& m, const OutlierState& o, double lambda,
                 double epsilon);

} // namespace robclust::rkm
