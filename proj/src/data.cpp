#include "robclust/data.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "robclust/simd.hpp"

namespace robclust::data {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& tok, double& v) {
    const std::string t = trim(tok);
    if (t.empty()) return false;
    char* end = nullptr;
    v = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

// Uniform draws in the inflated box of `pts`, kept when `accept` says so.
template <class Accept>
void draw_outliers(DataSet& d, std::size_t first, std::size_t count, const Matrix& pts, double inflation,
                   std::mt19937_64& rng, Accept accept) {
    const std::size_t p = pts.rows();
    std::vector<double> lo(p, kInf), hi(p, -kInf);
    for (std::size_t n = 0; n < pts.cols(); ++n)
        for (std::size_t i = 0; i < p; ++i) {
            lo[i] = std::min(lo[i], pts(i, n));
            hi[i] = std::max(hi[i], pts(i, n));
        }
    for (std::size_t i = 0; i < p; ++i) {
        const double mid = 0.5 * (lo[i] + hi[i]);
        const double half = 0.5 * (hi[i] - lo[i]) * (1.0 + inflation);
        lo[i] = mid - half;
        hi[i] = mid + half;
    }
    std::vector<double> v(p);
    std::size_t made = 0;
    std::size_t tries = 0;
    while (made < count) {
        if (++tries > 1000000 * (count + 1)) throw std::runtime_error("outlier region is empty");
        for (std::size_t i = 0; i < p; ++i) v[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
        if (!accept(v)) continue;
        std::copy(v.begin(), v.end(), d.x.col_ptr(first + made));
        ++made;
    }
}

} // namespace

Matrix SphericalSpec::default_centers() {
    Matrix c(2, 4);
    const double pts[4][2] = {{-5, -5}, {5, -5}, {-5, 5}, {5, 5}};
    for (std::size_t k = 0; k < 4; ++k) {
        c(0, k) = pts[k][0];
        c(1, k) = pts[k][1];
    }
    return c;
}

DataSet gen_spherical(const SphericalSpec& spec) {
    const std::size_t p = spec.centers.rows();
    const std::size_t C = spec.centers.cols();
    if (p == 0 || C == 0 || spec.n_per_cluster == 0) throw std::invalid_argument("empty spherical spec");
    if (!(spec.variance > 0.0)) throw std::invalid_argument("variance must be > 0");
    for (std::size_t a = 0; a < C; ++a)
        for (std::size_t b = a + 1; b < C; ++b)
            if (simd::squared_distance(spec.centers.col_ptr(a), spec.centers.col_ptr(b), p) == 0.0)
                throw std::invalid_argument("centers must be distinct");
    std::mt19937_64 rng(spec.seed);
    const double sd = std::sqrt(spec.variance);
    const std::size_t n_in = C * spec.n_per_cluster;
    DataSet d;
    d.x = Matrix(p, n_in + spec.n_outliers);
    d.truth_labels = std::vector<int>(d.n(), -1);
    d.truth_outliers = std::vector<bool>(d.n(), true);
    std::normal_distribution<double> noise(0.0, sd);
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t k = 0; k < spec.n_per_cluster; ++k) {
            const std::size_t n = c * spec.n_per_cluster + k;
            for (std::size_t i = 0; i < p; ++i) d.x(i, n) = spec.centers(i, c) + noise(rng);
            (*d.truth_labels)[n] = static_cast<int>(c);
            (*d.truth_outliers)[n] = false;
        }
    Matrix inliers(p, n_in);
    std::copy(d.x.data().begin(), d.x.data().begin() + static_cast<std::ptrdiff_t>(p * n_in), inliers.data().begin());
    const double r2 = spec.exclusion_sd * spec.exclusion_sd * spec.variance;
    draw_outliers(d, n_in, spec.n_outliers, inliers, spec.box_inflation, rng, [&](const std::vector<double>& v) {
        for (std::size_t c = 0; c < C; ++c)
            if (simd::squared_distance(v.data(), spec.centers.col_ptr(c), p) < r2) return false;
        return true;
    });
    return d;
}

DataSet gen_rings(const RingsSpec& spec) {
    if (!(spec.r_inner > 0.0 && spec.r_inner < spec.r_outer)) throw std::invalid_argument("need 0 < r_inner < r_outer");
    if (!(spec.ring_sd > 0.0)) throw std::invalid_argument("ring_sd must be > 0");
    std::mt19937_64 rng(spec.seed);
    const std::size_t n_in = spec.n_inner + spec.n_outer;
    DataSet d;
    d.x = Matrix(2, n_in + spec.n_outliers);
    d.truth_labels = std::vector<int>(d.n(), -1);
    d.truth_outliers = std::vector<bool>(d.n(), true);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::normal_distribution<double> noise(0.0, spec.ring_sd);
    for (std::size_t n = 0; n < n_in; ++n) {
        const bool inner = n < spec.n_inner;
        const double r = (inner ? spec.r_inner : spec.r_outer) + noise(rng);
        const double t = angle(rng);
        d.x(0, n) = r * std::cos(t);
        d.x(1, n) = r * std::sin(t);
        (*d.truth_labels)[n] = inner ? 0 : 1;
        (*d.truth_outliers)[n] = false;
    }
    Matrix inliers(2, n_in);
    std::copy(d.x.data().begin(), d.x.data().begin() + static_cast<std::ptrdiff_t>(2 * n_in), inliers.data().begin());
    const double band = spec.band_sd * spec.ring_sd;
    draw_outliers(d, n_in, spec.n_outliers, inliers, spec.box_inflation, rng, [&](const std::vector<double>& v) {
        const double r = std::hypot(v[0], v[1]);
        // between the rings or beyond the outer one, clear of both bands
        return r > spec.r_inner + band && std::abs(r - spec.r_outer) > band;
    });
    return d;
}

DataSet parse_csv(std::istream& in, bool label_column) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t ln = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (trim(line).empty()) continue;
        std::vector<std::string> tok = split(line, ',');
        double v;
        if (rows.empty() && width == 0 && !parse_double(tok.front(), v)) {
            width = tok.size();  // header
            continue;
        }
        if (width == 0) width = tok.size();
        if (tok.size() != width) throw ParseError(ln, "expected " + std::to_string(width) + " fields");
        if (label_column && tok.size() < 2) throw ParseError(ln, "label column needs at least one feature");
        std::vector<double> row;
        const std::size_t nf = label_column ? tok.size() - 1 : tok.size();
        for (std::size_t i = 0; i < nf; ++i) {
            if (!parse_double(tok[i], v) || !std::isfinite(v)) throw ParseError(ln, "bad number '" + trim(tok[i]) + "'");
            row.push_back(v);
        }
        if (label_column) {
            if (!parse_double(tok.back(), v) || v != std::floor(v)) throw ParseError(ln, "bad label");
            labels.push_back(static_cast<int>(v));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(ln, "no data rows");
    DataSet d = dataset_from_rows(rows);
    if (label_column) d.truth_labels = std::move(labels);
    return d;
}

DataSet load_csv(const std::string& path, bool label_column) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return parse_csv(f, label_column);
}

void write_csv(std::ostream& out, const DataSet& d, bool label_column) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t n = 0; n < d.n(); ++n) {
        for (std::size_t i = 0; i < d.p(); ++i) out << (i ? "," : "") << d.x(i, n);
        if (label_column) out << "," << (d.truth_labels ? (*d.truth_labels)[n] : 0);
        out << "\n";
    }
}

Graph parse_edgelist(std::istream& in) {
    Graph g;
    std::map<std::string, std::size_t> index;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    auto id_of = [&](const std::string& s) {
        auto [it, fresh] = index.emplace(s, g.ids.size());
        if (fresh) g.ids.push_back(s);
        return it->second;
    };
    std::string line;
    std::size_t ln = 0;
    std::size_t loops = 0, dups = 0;
    while (std::getline(in, line)) {
        ++ln;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 2) throw ParseError(ln, "expected two node ids");
        const std::size_t a = id_of(tok[0]);
        const std::size_t b = id_of(tok[1]);
        if (a == b) {
            ++loops;
            continue;
        }
        if (!edges.emplace(std::min(a, b), std::max(a, b)).second) ++dups;
    }
    if (g.ids.empty()) throw ParseError(ln, "no edges");
    g.adjacency = Matrix(g.ids.size(), g.ids.size());
    for (auto [a, b] : edges) g.adjacency(a, b) = g.adjacency(b, a) = 1.0;
    if (loops) g.warnings.push_back(std::to_string(loops) + " self-loop(s) removed");
    if (dups) g.warnings.push_back(std::to_string(dups) + " duplicate edge(s) collapsed");
    return g;
}

Graph load_edgelist(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return parse_edgelist(f);
}

} // namespace robclust::data
