#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "plnc/constellation.hpp"
#include "plnc/singular_fades.hpp"

using namespace plnc;

namespace {

// Oracle: scan all ordered pairs of S^2 directly.
double eff_min_dist_brute(const Constellation& c, cplx z) {
    double best = 1e300;
    const int m = c.size();
    for (int xa = 0; xa < m; ++xa)
        for (int xb = 0; xb < m; ++xb)
            for (int ya = 0; ya < m; ++ya)
                for (int yb = 0; yb < m; ++yb) {
                    if (xa == ya && xb == yb) continue;
                    best = std::min(best,
                                    std::abs((c.point(xa) - c.point(ya)) +
                                             z * (c.point(xb) - c.point(yb))));
                }
    return best;
}

}  // namespace

TEST_CASE("4-QAM labelling follows the bijective map") {
    Constellation c = Constellation::qam(4);
    CHECK(c.size() == 4);
    CHECK(c.point(0) == cplx{-1, -1});
    CHECK(c.point(1) == cplx{-1, 1});
    CHECK(c.point(2) == cplx{1, -1});
    CHECK(c.point(3) == cplx{1, 1});
    // label = ((side-1+I)*side + side-1+Q)/2 for every point
    for (int l = 0; l < 4; ++l) {
        GaussianInt p = c.lattice_point(l);
        CHECK(l == ((1 + p.re) * 2 + (1 + p.im)) / 2);
    }
}

TEST_CASE("16-QAM labelling and distinctness") {
    Constellation c = Constellation::qam(16);
    for (int l = 0; l < 16; ++l) {
        GaussianInt p = c.lattice_point(l);
        CHECK(l == ((3 + p.re) * 4 + (3 + p.im)) / 2);
        CHECK(c.label_of_lattice(p) == l);
    }
    for (int i = 0; i < 16; ++i)
        for (int k = i + 1; k < 16; ++k) CHECK(c.point(i) != c.point(k));
}

TEST_CASE("4-PAM points labelled left to right") {
    Constellation c = Constellation::pam(4);
    CHECK(c.points() == std::vector<cplx>{{-3, 0}, {-1, 0}, {1, 0}, {3, 0}});
}

TEST_CASE("unit scaling gives unit mean energy and the expected min distance") {
    Constellation c = Constellation::qam(16, Scaling::Unit);
    double energy = 0;
    for (const auto& p : c.points()) energy += std::norm(p);
    CHECK(energy / 16.0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.min_distance() == doctest::Approx(std::sqrt(2.0 / 5.0)).epsilon(1e-12));

    Constellation q4 = Constellation::qam(4, Scaling::Unit);
    CHECK(q4.min_distance() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("invalid sizes are rejected") {
    CHECK_THROWS_AS(Constellation::qam(8), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::qam(3), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::pam(1), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::psk(6), std::invalid_argument);
}

TEST_CASE("difference constellation sizes") {
    DifferenceConstellation d4 = difference_constellation(Constellation::pam(4));
    std::vector<cplx> want{{-6, 0}, {-4, 0}, {-2, 0}, {0, 0}, {2, 0}, {4, 0}, {6, 0}};
    CHECK(d4.deltas == want);

    DifferenceConstellation q4 = difference_constellation(Constellation::qam(4));
    CHECK(q4.deltas.size() == 9);  // (2*2-1)^2
    CHECK(q4.quadrant_plus.size() == 2);

    DifferenceConstellation q16 = difference_constellation(Constellation::qam(16));
    CHECK(q16.deltas.size() == 49);  // (2*4-1)^2
    CHECK(q16.quadrant_plus.size() == 12);
}

TEST_CASE("difference constellation is symmetric about zero") {
    for (auto c : {Constellation::qam(16), Constellation::pam(5), Constellation::psk(8)}) {
        DifferenceConstellation d = difference_constellation(c);
        for (const auto& v : d.deltas) {
            bool found = false;
            for (const auto& w : d.deltas)
                if (std::abs(w + v) < 1e-9) {
                    found = true;
                    break;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("effective minimum distance vanishes exactly at singular fades") {
    Constellation c = Constellation::qam(4);
    CHECK(effective_min_distance(c, cplx{0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(effective_min_distance(c, cplx{1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(effective_min_distance(Constellation::pam(4), cplx{1.0, 0.0}) ==
          doctest::Approx(0.0));
    CHECK(effective_min_distance(Constellation::psk(16), cplx{1.0, 0.0}) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("effective minimum distance matches the pairwise oracle") {
    Constellation c = Constellation::qam(4, Scaling::Unit);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    CHECK(effective_min_distance(c, cplx{10, 0}) ==
          doctest::Approx(eff_min_dist_brute(c, cplx{10, 0})).epsilon(1e-12));
    CHECK(effective_min_distance(c, cplx{10, 0}) == doctest::Approx(std::sqrt(2.0)));
    for (int i = 0; i < 10; ++i) {
        cplx z{u(rng), u(rng)};
        CHECK(effective_min_distance(c, z) ==
              doctest::Approx(eff_min_dist_brute(c, z)).epsilon(1e-12));
    }
}

TEST_CASE("effective minimum distance never exceeds the map-independent bound") {
    Constellation c = Constellation::qam(16);
    const double dmin = c.min_distance();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        cplx z{u(rng), u(rng)};
        double bound = std::min(dmin, std::abs(z) * dmin);
        CHECK(effective_min_distance(c, z) <= bound + 1e-12);
    }
}

TEST_CASE("zero effective distance iff enumerated singular fade") {
    Constellation c = Constellation::qam(4);
    SingularFadeSet h = enumerate_singular_fades(c);
    for (const auto& fs : h.states)
        CHECK(effective_min_distance(c, fs.value) < 1e-9);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int checked = 0;
    while (checked < 50) {
        cplx z{u(rng), u(rng)};
        if (h.index_near(z, 1e-3) >= 0) continue;  // stay clear of the singular set
        CHECK(effective_min_distance(c, z) > 1e-6);
        ++checked;
    }
}
