#pragma once

#include <vector>

#include "robclust/core.hpp"

namespace robclust::metrics {

// Adjusted Rand index. Points with exclude[n] set are dropped first.
double ari(const std::vector<int>& a, const std::vector<int>& b, const std::vector<bool>& exclude = {});

// Root mean squared centroid distance under the best column matching.
double rmse_centers(const Matrix& est, const Matrix& truth);

struct PRF {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

PRF outlier_prf(const std::vector<bool>& flagged, const std::vector<bool>& truth);

// Minimum-cost assignment for a square cost matrix; returns row -> column.
std::vector<std::size_t> hungarian(const Matrix& cost);

} // namespace robclust::metrics
