#pragma once

#include <random>
#include <vector>

#include "robclust/core.hpp"

namespace robclust::rpc {

struct Posteriors {
    Matrix gamma;  // N x C
};

// Posteriors and negative log-likelihood from squared distances d_nc (N x C)
// to the compensated means, in dimension dim.
struct MixtureEval {
    Posteriors post;
    double nll = 0.0;
};
MixtureEval evaluate_mixture(const Matrix& dist, const std::vector<double>& pi, double sigma, double dim);

Posteriors e_step(const DataSet& x, const MixtureParams& params);
std::vector<double> update_pi(const Posteriors& g);
Centroids update_means_em(const DataSet& x, const Posteriors& g, const OutlierState& o);
// r_n = x_n - sum_c gamma_nc m_c, o_n = r_n [1 - tau_n / ||r_n||]_+ with tau_n = lambda sigma.
OutlierState shrink_outliers_em(const DataSet& x, const Centroids& m, const Posteriors& g, double lambda,
                                double sigma);
OutlierState shrink_outliers_em(const DataSet& x, const Centroids& m, const Posteriors& g,
                                const std::vector<double>& thresholds);

// Positive root of D s^2 - L s - B = 0. Throws DegenerateFitError when L = B = 0.
double solve_sigma(double penalty_sum, double scatter, double dim);
double update_sigma(const DataSet& x, const Centroids& m, const OutlierState& o, const Posteriors& g, double lambda);

// Mean squared distance to the global mean, divided by p.
double data_variance(const DataSet& x);

MixtureParams init_params(const DataSet& x, std::size_t C, std::mt19937_64& rng);
MixtureParams params_from(const FitResult& fit);

FitResult rpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg);
FitResult rpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const MixtureParams& start);
FitResult wrpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const FitResult& warm);
FitResult wrpc_fit(const DataSet& x, std::size_t C, const FitConfig& cfg, const MixtureParams& start,
                   double epsilon);

// -log-likelihood + (lambda / sigma) sum log(1 + ||o||/eps)
double wrpc_objective(const DataSet& x, const MixtureParams& params, double lambda, double epsilon);

} // namespace robclust::rpc
