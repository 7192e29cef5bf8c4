#pragma once

#include <cstddef>
#include <string_view>

namespace robclust::simd {

enum class Level { scalar, avx2, neon };

// Function table for the hot loops. Every entry has a scalar reference in
// kernels_scalar.cpp; vector variants must agree to rounding.
struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // ||a - b - c||^2
    double (*squared_distance3)(const double* a, const double* b, const double* c, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the variant is not compiled in.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Best level supported by this build and CPU. Honors ROBCLUST_SIMD=scalar|avx2|neon|auto.
Level detect_level();
Level active_level();
// Returns false (and leaves the level unchanged) if the level is unavailable.
bool set_level(Level level);
std::string_view level_name(Level level);

const KernelTable& kernels();

inline double dot(const double* a, const double* b, std::size_t n) { return kernels().dot(a, b, n); }
inline double squared_distance(const double* a, const double* b, std::size_t n) {
    return kernels().squared_distance(a, b, n);
}
inline double squared_distance3(const double* a, const double* b, const double* c, std::size_t n) {
    return kernels().squared_distance3(a, b, c, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { kernels().axpy(alpha, x, y, n); }
inline double sum(const double* a, std::size_t n) { return kernels().sum(a, n); }

} // namespace robclust::simd
