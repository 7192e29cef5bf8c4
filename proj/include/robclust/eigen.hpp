#pragma once

#include <vector>

#include "robclust/matrix.hpp"

namespace robclust {

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column i pairs with values[i]
};

// Cyclic Jacobi. Throws std::runtime_error if the sweeps do not converge.
SymmetricEigen eigen_symmetric(const Matrix& a, int max_sweeps = 100);

} // namespace robclust
