#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "robclust/core.hpp"

namespace robclust::data {

struct SphericalSpec {
    std::uint64_t seed = 0;
    std::size_t n_per_cluster = 50;
    std::size_t n_outliers = 80;
    double variance = 0.8;
    Matrix centers = default_centers();  // p x C
    double box_inflation = 0.5;
    double exclusion_sd = 6.0;  // outliers keep at least this many sd from every center

    static Matrix default_centers();
};

struct RingsSpec {
    std::uint64_t seed = 0;
    std::size_t n_inner = 50;
    std::size_t n_outer = 150;
    std::size_t n_outliers = 60;
    double r_inner = 2.0;
    double r_outer = 6.0;
    double ring_sd = 0.2;
    double band_sd = 5.0;  // outliers keep at least this many sd from either ring
    double box_inflation = 0.2;
};

// Truth labels are cluster ids, -1 for planted outliers.
DataSet gen_spherical(const SphericalSpec& spec);
DataSet gen_rings(const RingsSpec& spec);

// Comma-separated, optional header, optional trailing integer label column.
DataSet parse_csv(std::istream& in, bool label_column = false);
DataSet load_csv(const std::string& path, bool label_column = false);
void write_csv(std::ostream& out, const DataSet& d, bool label_column = false);

struct Graph {
    Matrix adjacency;  // symmetric 0/1, no self-loops
    std::vector<std::string> ids;
    std::vector<std::string> warnings;
};

Graph parse_edgelist(std::istream& in);
Graph load_edgelist(const std::string& path);

} // namespace robclust::data
