#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "plnc/singular_fades.hpp"

using namespace plnc;

namespace {

GaussianRational rat(std::int64_t nr, std::int64_t ni, std::int64_t dr = 1,
                     std::int64_t di = 0) {
    return {GaussianInt{nr, ni}, GaussianInt{dr, di}};
}

}  // namespace

TEST_CASE("4-QAM singular fades are the twelve known states") {
    SingularFadeSet h = enumerate_singular_fades(Constellation::qam(4));
    CHECK(h.size() == 12);
    std::set<GaussianRational> got;
    for (const auto& fs : h.states) {
        REQUIRE(fs.has_exact);
        got.insert(fs.exact);
    }
    std::set<GaussianRational> want{
        rat(1, 0),  rat(-1, 0), rat(0, 1),  rat(0, -1),          // units
        rat(1, 1),  rat(1, -1), rat(-1, 1), rat(-1, -1),         // 1 +- j and friends
        rat(1, 0, 1, 1), rat(1, 0, 1, -1), rat(1, 0, -1, 1), rat(1, 0, -1, -1),
    };
    CHECK(got == want);
}

TEST_CASE("2-PAM gives exactly +-1") {
    SingularFadeSet h = enumerate_singular_fades(Constellation::pam(2));
    CHECK(h.size() == 2);
    CHECK(h.index_of_exact(rat(1, 0)) >= 0);
    CHECK(h.index_of_exact(rat(-1, 0)) >= 0);
}

TEST_CASE("16-QAM enumeration yields 388 distinct states") {
    SingularFadeSet h = enumerate_singular_fades(Constellation::qam(16));
    CHECK(h.size() == 388);
}

TEST_CASE("closed-form counts") {
    CHECK(count_singular_pam(4) == 14);
    CHECK(count_singular_pam(8) == 70);
    CHECK(count_singular_pam(2) == 2);
    CHECK(count_singular_qam(4) == 12);
    CHECK(count_singular_qam(16) == 388);
    // 4 + 8 * 1040 coprime pairs; cross-checked against full enumeration below
    CHECK(count_singular_qam(64) == 8324);
    CHECK(coprime_pair_count_qam(16) == 48);
    CHECK(count_singular_psk(4) == 12);
    CHECK(count_singular_psk(16) == 912);
    CHECK(count_singular_psk(64) == 63552);
}

TEST_CASE("upper bound evaluates and dominates the count") {
    CHECK(singular_upper_bound_qam(4) == 12);   // n = 2, tight at M = 4
    CHECK(singular_upper_bound_qam(16) == 532);  // n = 12
    for (int m : {4, 16, 64, 256})
        CHECK(count_singular_qam(m) <= singular_upper_bound_qam(m));
}

TEST_CASE("enumeration agrees with closed forms") {
    for (int n = 2; n <= 8; ++n)
        CHECK(enumerate_singular_fades(Constellation::pam(n)).size() ==
              count_singular_pam(n));
    for (int m : {4, 16, 64})
        CHECK(enumerate_singular_fades(Constellation::qam(m)).size() ==
              count_singular_qam(m));
    for (int m : {4, 8, 16})
        CHECK(enumerate_singular_fades(Constellation::psk(m)).size() ==
              count_singular_psk(m));
}

TEST_CASE("singular set is closed under inversion and quarter turns") {
    SingularFadeSet h = enumerate_singular_fades(Constellation::qam(16));
    for (const auto& fs : h.states) {
        CHECK(h.index_of_exact(fs.exact.reciprocal()) >= 0);
        CHECK(h.index_of_exact(fs.exact.times_j()) >= 0);
    }
    SingularFadeSet hp = enumerate_singular_fades(Constellation::psk(8));
    for (const auto& fs : hp.states) {
        CHECK(hp.index_near(1.0 / fs.value, 1e-6) >= 0);
        CHECK(hp.index_near(cplx{0, 1} * fs.value, 1e-6) >= 0);
    }
}

TEST_CASE("every state really collapses the effective constellation") {
    Constellation c = Constellation::qam(16);
    SingularFadeSet h = enumerate_singular_fades(c);
    for (std::size_t i = 0; i < h.size(); i += 13)
        CHECK(effective_min_distance(c, h.states[i].value) < 1e-9);
}

TEST_CASE("collapse weight matches a direct pair scan") {
    Constellation c = Constellation::qam(16);
    SingularFadeSet h = enumerate_singular_fades(c);
    DifferenceConstellation d = difference_constellation(c);
    for (std::size_t i = 0; i < h.size(); i += 29) {
        cplx z = h.states[i].value;
        double best = 1e300;
        for (const auto& dk : d.deltas) {
            for (const auto& dl : d.deltas) {
                if (std::abs(dl) < 1e-12 || std::abs(dk) < 1e-12) continue;
                if (std::abs(-dk / dl - z) < 1e-9) best = std::min(best, std::abs(dl));
            }
        }
        CHECK(h.states[i].min_abs_dl == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("4-PAM constraints at z = 1 match the known classes") {
    ConstraintSet cs = constraints_for(Constellation::pam(4), rat(1, 0));
    CHECK(cs.order == 4);
    CHECK(cs.classes.size() == 7);  // sums -6..6 in steps of 2
    CHECK(cs.multi_class_count() == 5);
    using Cells = std::vector<std::pair<int, int>>;
    std::vector<Cells> multi;
    for (const auto& cls : cs.classes)
        if (cls.size() > 1) multi.push_back(cls);
    std::vector<Cells> want{
        {{0, 1}, {1, 0}},
        {{0, 2}, {1, 1}, {2, 0}},
        {{0, 3}, {1, 2}, {2, 1}, {3, 0}},
        {{1, 3}, {2, 2}, {3, 1}},
        {{2, 3}, {3, 2}},
    };
    CHECK(multi == want);
}

TEST_CASE("BPSK constraints at z = 1") {
    ConstraintSet cs = constraints_for(Constellation::pam(2), rat(1, 0));
    CHECK(cs.multi_class_count() == 1);
    for (const auto& cls : cs.classes)
        if (cls.size() > 1)
            CHECK(cls == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("4-QAM constraints at z = j agree with a numeric grouping oracle") {
    Constellation c = Constellation::qam(4);
    ConstraintSet exact = constraints_for(c, rat(0, 1));
    ConstraintSet numeric = constraints_for_numeric(c, cplx{0, 1});
    CHECK(exact.order == numeric.order);
    CHECK(exact.classes == numeric.classes);
    // every multi-element class witnesses a collision
    for (const auto& cls : exact.classes) {
        if (cls.size() < 2) continue;
        auto [k0, l0] = cls.front();
        for (auto [k, l] : cls)
            CHECK(std::abs((c.point(k0) + cplx{0, 1} * c.point(l0)) -
                           (c.point(k) + cplx{0, 1} * c.point(l))) < 1e-12);
    }
}

TEST_CASE("constraints for a non-singular fade are rejected") {
    CHECK_THROWS_AS(constraints_for(Constellation::qam(4), rat(7, 3)),
                    std::invalid_argument);
}
