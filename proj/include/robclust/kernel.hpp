#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "robclust/core.hpp"

namespace robclust::kernel {

struct KernelMatrix {
    Matrix k;  // N x N, symmetric PSD
    std::size_t n() const { return k.rows(); }
};

// Checks squareness, symmetry (1e-9 relative) and PSD (Cholesky of K + tau I,
// tau = 1e-8 trace/N). Throws std::invalid_argument on failure.
KernelMatrix make_kernel(Matrix k);
bool is_psd(const Matrix& k, double tau);

KernelMatrix gram_linear(const DataSet& x);
KernelMatrix kernel_gaussian(const DataSet& x, double alpha);
KernelMatrix kernel_polynomial(const DataSet& x, int degree);
// K = nu I + D^{-1/2} E D^{-1/2} with nu = |lambda_min| + margin.
KernelMatrix kernel_graph(const Matrix& adjacency, double nu_margin = 1e-3);
// 1 / median pairwise squared distance
double alpha_kappa_heuristic(const DataSet& x);

// Symmetric normalized Laplacian eigenvectors, row-normalized, then hard
// k-means with `restarts` seeded starts. Works for any nonnegative symmetric
// affinity with positive degrees.
Membership spectral_init(const Matrix& adjacency, std::size_t C, std::uint64_t seed = 0, int restarts = 10);

struct Start {
    Membership u;                // KRKM memberships
    std::optional<Matrix> a;     // outlier coefficients, zero when absent
    std::optional<Matrix> b;     // previous centroid coefficients for the first stopping test
};

struct ProbStart {
    Matrix b;  // N x C
    std::vector<double> pi;
    double sigma = 1.0;
    std::optional<Matrix> a;
    std::optional<Matrix> dist;  // distances matching (b, a); recomputed when absent
};

Start start_from(const FitResult& fit);
ProbStart prob_start_from(const FitResult& fit);
ProbStart random_prob_start(const KernelMatrix& k, std::size_t C, std::mt19937_64& rng);

// Feature-space variance per dimension: (trace/N - 1'K1/N^2) / N.
double kernel_variance(const KernelMatrix& k);

FitResult krkm_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg);
FitResult krkm_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg, const Start& start);
FitResult krpc_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg);
FitResult krpc_fit(const KernelMatrix& k, std::size_t C, const FitConfig& cfg, const ProbStart& start);

// Explicit coordinates for linear kernels: M = X B, O = X A.
Matrix reconstruct(const DataSet& x, const Matrix& coeffs);

} // namespace robclust::kernel
