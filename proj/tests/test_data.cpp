#include <doctest.h>

#include <cmath>
#include <sstream>

#include "robclust/data.hpp"
#include "robclust/metrics.hpp"
#include "robclust/rkm.hpp"

using namespace robclust;

TEST_CASE("spherical generator") {
    data::SphericalSpec spec;
    const DataSet d = data::gen_spherical(spec);
    CHECK(d.n() == 280);
    CHECK(d.p() == 2);
    spec.n_outliers = 40;
    CHECK(data::gen_spherical(spec).n() == 240);

    const auto& lab = *d.truth_labels;
    const auto& out = *d.truth_outliers;
    const Matrix c = data::SphericalSpec::default_centers();
    const double sd = std::sqrt(spec.variance);
    for (std::size_t k = 0; k < 4; ++k) {
        double mx = 0, my = 0;
        for (std::size_t n = 0; n < 50; ++n) {
            CHECK(lab[k * 50 + n] == static_cast<int>(k));
            mx += d.x(0, k * 50 + n) / 50;
            my += d.x(1, k * 50 + n) / 50;
        }
        CHECK(std::abs(mx - c(0, k)) < 3 * sd / std::sqrt(50.0));
        CHECK(std::abs(my - c(1, k)) < 3 * sd / std::sqrt(50.0));
    }
    std::size_t n_out = 0;
    for (std::size_t n = 200; n < 280; ++n) {
        CHECK(out[n]);
        CHECK(lab[n] == -1);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::hypot(d.x(0, n) - c(0, k), d.x(1, n) - c(1, k)) >= spec.exclusion_sd * sd);
        ++n_out;
    }
    CHECK(n_out == 80);

    // same seed, same data
    spec.n_outliers = 80;
    CHECK(data::gen_spherical(spec).x == d.x);
    spec.seed = 1;
    CHECK_FALSE(data::gen_spherical(spec).x == d.x);
}

TEST_CASE("rings generator") {
    data::RingsSpec spec;
    const DataSet d = data::gen_rings(spec);
    CHECK(d.n() == 260);
    const double band = spec.band_sd * spec.ring_sd;
    for (std::size_t n = 0; n < d.n(); ++n) {
        const double r = std::hypot(d.x(0, n), d.x(1, n));
        const int l = (*d.truth_labels)[n];
        if (l == 0) CHECK(std::abs(r - spec.r_inner) < 6 * spec.ring_sd);
        if (l == 1) CHECK(std::abs(r - spec.r_outer) < 6 * spec.ring_sd);
        if (l == -1) {
            CHECK(r > spec.r_inner + band);
            CHECK(std::abs(r - spec.r_outer) > band);
        }
    }
    CHECK(data::gen_rings(spec).x == d.x);

    // not linearly separable: plain k-means on the inliers misses the rings
    DataSet in;
    in.x = Matrix(2, 200);
    std::copy(d.x.data().begin(), d.x.data().begin() + 400, in.x.data().begin());
    std::vector<int> truth(d.truth_labels->begin(), d.truth_labels->begin() + 200);
    FitConfig cfg;
    double best_cost = kInf;
    std::vector<int> best;
    for (std::uint64_t s = 0; s < 10; ++s) {
        cfg.seed = s;
        const FitResult f = rkm::rkm_fit(in, 2, cfg);
        if (f.final_cost() < best_cost) {
            best_cost = f.final_cost();
            best = f.labels();
        }
    }
    CHECK(metrics::ari(best, truth) < 0.3);
}

TEST_CASE("csv parsing") {
    std::istringstream s("a,b\n1,2\n3.5,-4\n\n5,6e1\n");
    const DataSet d = data::parse_csv(s);
    CHECK(d.n() == 3);
    CHECK(d.p() == 2);
    CHECK(d.x(1, 1) == -4.0);
    CHECK(d.x(1, 2) == 60.0);

    std::istringstream l("1,2,0\n3,4,1\n");
    const DataSet dl = data::parse_csv(l, true);
    CHECK(dl.p() == 2);
    CHECK(*dl.truth_labels == std::vector<int>{0, 1});

    std::istringstream bad("1,2\n3\n");
    CHECK_THROWS_AS(data::parse_csv(bad), ParseError);
    std::istringstream nan("1,x\n");
    CHECK_THROWS_AS(data::parse_csv(nan), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(data::parse_csv(empty), ParseError);
}

TEST_CASE("csv round trip is exact") {
    const DataSet d = data::gen_spherical({});
    std::stringstream s;
    data::write_csv(s, d, true);
    const DataSet back = data::parse_csv(s, true);
    CHECK(back.x == d.x);
    CHECK(*back.truth_labels == *d.truth_labels);
}

TEST_CASE("edge lists") {
    std::istringstream s("# path\na b\nb c\nc d  # tail\nb a\nd d\n");
    const auto g = data::parse_edgelist(s);
    CHECK(g.ids == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(g.adjacency(0, 1) == 1.0);
    CHECK(g.adjacency(1, 0) == 1.0);
    CHECK(g.adjacency(0, 2) == 0.0);
    CHECK(g.adjacency(3, 3) == 0.0);
    CHECK(g.warnings.size() == 2);

    std::istringstream bad("a b c\n");
    CHECK_THROWS_AS(data::parse_edgelist(bad), ParseError);
}
