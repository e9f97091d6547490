#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "json.hpp"
#include "plnc/bank.hpp"
#include "plnc/latin_square.hpp"

using namespace plnc;

namespace {

constexpr double kTol = 1e-9;

// Published standard square for 16-QAM, row-major.
const std::vector<int> kStandard16{
    0,  1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15,
    1,  2,  3,  0,  5,  6,  7,  4,  9,  10, 11, 8,  13, 14, 15, 12,
    2,  3,  0,  1,  6,  7,  4,  5,  10, 11, 8,  9,  14, 15, 12, 13,
    3,  0,  1,  2,  7,  4,  5,  6,  11, 8,  9,  10, 15, 12, 13, 14,
    4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 0,  1,  2,  3,
    5,  6,  7,  4,  9,  10, 11, 8,  13, 14, 15, 12, 1,  2,  3,  0,
    6,  7,  4,  5,  10, 11, 8,  9,  14, 15, 12, 13, 2,  3,  0,  1,
    7,  4,  5,  6,  11, 8,  9,  10, 15, 12, 13, 14, 3,  0,  1,  2,
    8,  9,  10, 11, 12, 13, 14, 15, 0,  1,  2,  3,  4,  5,  6,  7,
    9,  10, 11, 8,  13, 14, 15, 12, 1,  2,  3,  0,  5,  6,  7,  4,
    10, 11, 8,  9,  14, 15, 12, 13, 2,  3,  0,  1,  6,  7,  4,  5,
    11, 8,  9,  10, 15, 12, 13, 14, 3,  0,  1,  2,  7,  4,  5,  6,
    12, 13, 14, 15, 0,  1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11,
    13, 14, 15, 12, 1,  2,  3,  0,  5,  6,  7,  4,  9,  10, 11, 8,
    14, 15, 12, 13, 2,  3,  0,  1,  6,  7,  4,  5,  10, 11, 8,  9,
    15, 12, 13, 14, 3,  0,  1,  2,  7,  4,  5,  6,  11, 8,  9,  10,
};

}  // namespace

TEST_CASE("verify accepts Latin squares and rejects repeats") {
    CHECK(standard_pam_square(4).verify());
    CHECK(LatinSquare(16, 16, kStandard16).verify());
    CHECK_FALSE(LatinSquare(2, 2, {0, 0, 1, 1}).verify());
}

TEST_CASE("left-cyclic square matches the published 4-PAM table") {
    LatinSquare l = standard_pam_square(4);
    CHECK(l.cells() == std::vector<int>{0, 1, 2, 3, 1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2});
    CHECK(standard_pam_square(2).cells() == std::vector<int>{0, 1, 1, 0});
    CHECK(min_cluster_distance(standard_pam_square(8), Constellation::pam(8), {1, 0}) > kTol);
}

TEST_CASE("left-cyclic square structure") {
    LatinSquare l = standard_pam_square(6);
    for (int k = 0; k < 6; ++k)
        for (int m = 0; m < 6; ++m) {
            CHECK(l.at(k, m) == l.at(m, k));  // symmetric about the main diagonal
            if (k + 1 < 6 && m - 1 >= 0) CHECK(l.at(k + 1, m - 1) == l.at(k, m));
        }
}

TEST_CASE("standard 16-QAM square equals the published table") {
    CHECK(standard_qam_square(16).cells() == kStandard16);
}

TEST_CASE("standard 4-QAM square") {
    CHECK(standard_qam_square(4).cells() ==
          std::vector<int>{0, 1, 2, 3, 1, 0, 3, 2, 2, 3, 0, 1, 3, 2, 1, 0});
    CHECK(min_cluster_distance(standard_qam_square(4), Constellation::qam(4), {1, 0}) > kTol);
}

TEST_CASE("standard squares remove z = 1") {
    for (int m : {4, 16, 64})
        CHECK(min_cluster_distance(standard_qam_square(m), Constellation::qam(m), {1, 0}) >
              kTol);
}

TEST_CASE("block structure follows the shifted-pair classes") {
    // cells (k, l) and the coordinate-shifted (k2, l2) carry the same symbol
    // whenever both shifted points stay inside the constellation.
    LatinSquare l = standard_qam_square(16);
    Constellation c = Constellation::qam(16);
    for (int k = 0; k < 16; ++k) {
        for (int m = 0; m < 16; ++m) {
            for (int u = -3; u <= 3; ++u) {
                for (int v = -3; v <= 3; ++v) {
                    GaussianInt pa = c.lattice_point(k), pb = c.lattice_point(m);
                    GaussianInt qa{pa.re + 2 * u, pa.im + 2 * v};
                    GaussianInt qb{pb.re - 2 * u, pb.im - 2 * v};
                    int k2 = c.label_of_lattice(qa), m2 = c.label_of_lattice(qb);
                    if (k2 < 0 || m2 < 0) continue;
                    CHECK(l.at(k, m) == l.at(k2, m2));
                }
            }
        }
    }
}

TEST_CASE("xor square behaviour") {
    CHECK(xor_square(2).cells() == std::vector<int>{0, 1, 1, 0});
    CHECK(min_cluster_distance(xor_square(4), Constellation::qam(4), {1, 0}) > kTol);
    CHECK(min_cluster_distance(xor_square(16), Constellation::qam(16), {1, 0}) == 0.0);
    CHECK(min_cluster_distance(xor_square(16), Constellation::psk(16), {1, 0}) > kTol);
}

TEST_CASE("BPSK clustering from the completed constraints") {
    Constellation c = Constellation::pam(2);
    LatinSquare l = complete_constrained(constraints_for(c, GaussianRational{1, 0}));
    CHECK(l.cells() == std::vector<int>{0, 1, 1, 0});
    CHECK(min_cluster_distance(l, c, {1, 0}) > kTol);
}

TEST_CASE("transpose removes the inverse fade state") {
    Constellation c = Constellation::qam(16);
    LatinSquare l = standard_qam_square(16);
    CHECK(min_cluster_distance(transpose(l), c, {1, 0}) > kTol);  // 1/1 = 1
    CHECK(transpose(transpose(l)) == l);
}

TEST_CASE("rotate and reflect move removal the way the symmetries say") {
    Constellation c = Constellation::qam(16);
    SingularFadeSet h = enumerate_singular_fades(c);
    int idx = h.index_near(cplx{2, 1});
    REQUIRE(idx >= 0);
    LatinSquare base = complete_constrained(constraints_for(c, h.states[idx]), {20, 500000});
    cplx z{2, 1};
    REQUIRE(min_cluster_distance(base, c, z) > kTol);

    CHECK(min_cluster_distance(transpose(base), c, 1.0 / z) > kTol);
    CHECK(min_cluster_distance(rotate_quarter(base, c, z), c, cplx{0, 1} * z) > kTol);
    // reflect sends gamma e^{j theta} to gamma e^{j(pi/2 - theta)} = j conj(z)
    CHECK(min_cluster_distance(reflect(base, c, z), c, cplx{1, 2}) > kTol);

    LatinSquare r = base;
    cplx zz = z;
    for (int k = 0; k < 4; ++k) {
        r = rotate_quarter(r, c, zz);
        zz *= cplx{0, 1};
    }
    CHECK(r == base);  // four quarter turns restore the column order
    CHECK(reflect(reflect(base, c, z), c, cplx{1, 2}) == base);
}

TEST_CASE("rotate rejects a square that does not remove the state") {
    Constellation c = Constellation::qam(16);
    CHECK_THROWS_AS(rotate_quarter(xor_square(16), c, cplx{1, 0}), std::invalid_argument);
}

TEST_CASE("diagonal fade states are fixed points of reflect") {
    // j * conj(z) = z when arg z = pi/4
    Constellation c = Constellation::qam(16);
    SingularFadeSet h = enumerate_singular_fades(c);
    int idx = h.index_near(cplx{1, 1});
    REQUIRE(idx >= 0);
    LatinSquare l = complete_constrained(constraints_for(c, h.states[idx]), {20, 500000});
    CHECK(min_cluster_distance(reflect(l, c, cplx{1, 1}), c, cplx{1, 1}) > kTol);
}

TEST_CASE("completion reproduces minimal symbol counts on the standard cases") {
    Constellation pam4 = Constellation::pam(4);
    LatinSquare a = complete_constrained(constraints_for(pam4, GaussianRational{1, 0}));
    CHECK(a.symbols() == 4);
    CHECK(a.verify());
    CHECK(min_cluster_distance(a, pam4, {1, 0}) > kTol);

    Constellation qam16 = Constellation::qam(16);
    LatinSquare b = complete_constrained(constraints_for(qam16, GaussianRational{1, 0}));
    CHECK(b.symbols() == 16);
    CHECK(b.verify());
    CHECK(min_cluster_distance(b, qam16, {1, 0}) > kTol);
}

TEST_CASE("completion respects the input classes") {
    Constellation c = Constellation::qam(16);
    SingularFadeSet h = enumerate_singular_fades(c);
    int idx = h.index_near(cplx{1.5, 0.5});  // (3+j)/2
    REQUIRE(idx >= 0);
    ConstraintSet cs = constraints_for(c, h.states[idx]);
    LatinSquare l = complete_constrained(cs, {20, 500000});
    CHECK(l.verify());
    for (const auto& cls : cs.classes) {
        int sym = l.at(cls.front().first, cls.front().second);
        for (auto [r, col] : cls) CHECK(l.at(r, col) == sym);
    }
    CHECK(min_cluster_distance(l, c, h.states[idx].value) > kTol);
}

TEST_CASE("malformed constraints are rejected") {
    ConstraintSet bad;
    bad.order = 2;
    bad.classes = {{{0, 0}, {0, 1}}};  // two cells in one row
    CHECK_THROWS_AS(complete_constrained(bad), std::invalid_argument);

    ConstraintSet overlap;
    overlap.order = 2;
    overlap.classes = {{{0, 0}, {1, 1}}, {{0, 0}}};
    CHECK_THROWS_AS(complete_constrained(overlap), std::invalid_argument);
}

TEST_CASE("infeasible symbol caps report the best attempt") {
    ConstraintSet cs = constraints_for(Constellation::pam(4), GaussianRational{1, 0});
    try {
        complete_constrained(cs, {3, 1000});
        CHECK(false);
    } catch (const CompletionFailure& f) {
        CHECK(f.best_t_tried == 3);
    }
}

TEST_CASE("a tampered bank is rejected at load") {
    LatinSquareBank bank = build_bank(Constellation::qam(4));
    nlohmann::json root = nlohmann::json::parse(bank_to_json(bank));
    auto& cells = root["entries"][0]["cells"];
    cells[1] = cells[0];  // duplicate symbol in row 0 breaks the exclusive law
    CHECK_THROWS(bank_from_json(root.dump()));
}

TEST_CASE("4-QAM bank covers all twelve states") {
    Constellation c = Constellation::qam(4);
    LatinSquareBank bank = build_bank(c);
    CHECK(bank.size() == 12);
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const LatinSquare& l = bank.square(static_cast<int>(i));
        CHECK(l.verify());
        CHECK(min_cluster_distance(l, c, bank.fades().states[i].value) > kTol);
        // the unit states come from the order-4 standard square; the eight
        // states with |z|^2 = 2 or 1/2 provably need a fifth symbol
        std::uint64_t nn = bank.fades().states[i].exact.num().norm();
        std::uint64_t dn = bank.fades().states[i].exact.den().norm();
        CHECK(l.symbols() == ((nn == dn) ? 4 : 5));
    }
}

TEST_CASE("bank round-trips through json byte for byte") {
    LatinSquareBank bank = build_bank(Constellation::qam(4));
    std::string s1 = bank_to_json(bank);
    LatinSquareBank loaded = bank_from_json(s1);
    std::string s2 = bank_to_json(loaded);
    CHECK(s1 == s2);
    CHECK(loaded.size() == bank.size());
}

TEST_CASE("small PAM banks cover every state") {
    for (int n : {4, 8}) {
        Constellation c = Constellation::pam(n);
        LatinSquareBank bank = build_bank(c);
        CHECK(bank.size() == count_singular_pam(n));
        for (std::size_t i = 0; i < bank.size(); ++i)
            CHECK(min_cluster_distance(bank.square(static_cast<int>(i)), c,
                                       bank.fades().states[i].value) > kTol);
    }
}

TEST_CASE("8-PSK bank works through the numeric constraint path") {
    Constellation c = Constellation::psk(8);
    LatinSquareBank bank = build_bank(c);
    CHECK(bank.size() == count_singular_psk(8));
    for (std::size_t i = 0; i < bank.size(); ++i)
        CHECK(min_cluster_distance(bank.square(static_cast<int>(i)), c,
                                   bank.fades().states[i].value) > kTol);
}

TEST_CASE("completion handles symbol counts past 64") {
    // order 64 exercises the wide symbol masks
    Constellation c = Constellation::qam(64);
    SingularFadeSet h = enumerate_singular_fades(c);
    int idx = h.index_near(cplx{1, 1});
    REQUIRE(idx >= 0);
    LatinSquare l = complete_constrained(constraints_for(c, h.states[idx]), {128, 500000});
    CHECK(l.verify());
    CHECK(min_cluster_distance(l, c, cplx{1, 1}) > kTol);
}
