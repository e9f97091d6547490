#include "plnc/bank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace plnc {

namespace {

constexpr double kRemovalTol = 1e-9;

GaussianRational one_state() { return {GaussianInt{1, 0}, GaussianInt{1, 0}}; }

LatinSquare seed_square(const Constellation& c) {
    switch (c.kind()) {
        case ConstellationKind::PAM: return standard_pam_square(c.size());
        case ConstellationKind::QAM: return standard_qam_square(c.size());
        case ConstellationKind::PSK: return xor_square(c.size());
    }
    throw std::logic_error("seed_square: unknown kind");
}

bool supports_quadrant_symmetry(const Constellation& c) {
    if (c.kind() == ConstellationKind::QAM) return true;
    if (c.kind() == ConstellationKind::PSK) return c.size() % 4 == 0;
    return false;
}

}  // namespace

LatinSquareBank::LatinSquareBank(Constellation c, SingularFadeSet fades,
                                 std::vector<LatinSquare> squares)
    : constellation_(std::move(c)), fades_(std::move(fades)), squares_(std::move(squares)) {
    if (fades_.states.size() != squares_.size())
        throw std::invalid_argument("LatinSquareBank: states and squares differ in length");
    for (const auto& sq : squares_)
        if (!sq.verify()) throw std::invalid_argument("LatinSquareBank: exclusive law violated");
    fallback_ = fades_.index_near(cplx{1.0, 0.0});
    if (fallback_ < 0) throw std::invalid_argument("LatinSquareBank: z = 1 entry missing");
}

int LatinSquareBank::max_symbols() const {
    int t = 0;
    for (const auto& sq : squares_) t = std::max(t, sq.symbols());
    return t;
}

LatinSquareBank build_bank(const Constellation& c, const CompletionOptions& options) {
    SingularFadeSet fades = enumerate_singular_fades(c);
    const std::size_t n = fades.states.size();
    std::vector<LatinSquare> squares;
    squares.reserve(n);
    std::vector<char> have(n, 0);
    std::vector<LatinSquare> store(n, LatinSquare(1, 1, {0}));

    auto insert = [&](std::size_t idx, LatinSquare sq) {
        if (have[idx]) return;
        if (min_cluster_distance(sq, c, fades.states[idx].value) <= kRemovalTol)
            throw std::runtime_error("build_bank: derived square fails to remove its fade state");
        store[idx] = std::move(sq);
        have[idx] = 1;
    };

    auto find_state = [&](cplx z) {
        return fades.index_near(z, 1e-6);
    };

    int one = c.has_lattice() ? fades.index_of_exact(one_state())
                              : fades.index_near(cplx{1.0, 0.0});
    if (one < 0) throw std::logic_error("build_bank: z = 1 is always singular");
    insert(static_cast<std::size_t>(one), seed_square(c));

    const bool quad = supports_quadrant_symmetry(c);
    auto close_under_symmetry = [&]() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!have[i]) continue;
                cplx z = fades.states[i].value;
                struct Step {
                    cplx target;
                    int kind;  // 0: transpose, 1: rotate, 2: reflect
                };
                std::vector<Step> steps;
                steps.push_back({1.0 / z, 0});
                if (quad) {
                    steps.push_back({cplx{0.0, 1.0} * z, 1});
                    steps.push_back({cplx{0.0, 1.0} * std::conj(z), 2});
                }
                for (const auto& step : steps) {
                    int tgt = find_state(step.target);
                    if (tgt < 0 || have[static_cast<std::size_t>(tgt)]) continue;
                    switch (step.kind) {
                        case 0: insert(static_cast<std::size_t>(tgt), transpose(store[i])); break;
                        case 1:
                            insert(static_cast<std::size_t>(tgt), rotate_quarter(store[i], c, z));
                            break;
                        case 2: insert(static_cast<std::size_t>(tgt), reflect(store[i], c, z)); break;
                    }
                    changed = true;
                }
            }
        }
    };

    close_under_symmetry();
    CompletionOptions opts = options;
    if (opts.t_max == 0) opts.t_max = 2 * c.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (have[i]) continue;
        ConstraintSet cs = constraints_for(c, fades.states[i]);
        insert(i, complete_constrained(cs, opts));
        close_under_symmetry();
    }

    for (std::size_t i = 0; i < n; ++i) squares.push_back(std::move(store[i]));
    return {c, std::move(fades), std::move(squares)};
}

namespace {

const char* kind_name(ConstellationKind k) {
    switch (k) {
        case ConstellationKind::PAM: return "pam";
        case ConstellationKind::QAM: return "qam";
        case ConstellationKind::PSK: return "psk";
    }
    return "?";
}

ConstellationKind kind_from_name(const std::string& s) {
    if (s == "pam") return ConstellationKind::PAM;
    if (s == "qam") return ConstellationKind::QAM;
    if (s == "psk") return ConstellationKind::PSK;
    throw std::invalid_argument("unknown constellation kind: " + s);
}

}  // namespace

std::string bank_to_json(const LatinSquareBank& bank) {
    nlohmann::json root;
    root["kind"] = kind_name(bank.constellation().kind());
    root["size"] = bank.constellation().size();
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const FadeState& fs = bank.fades().states[i];
        const LatinSquare& sq = bank.square(static_cast<int>(i));
        nlohmann::json e;
        if (fs.has_exact) e["z"] = fs.exact.str();
        e["re"] = fs.value.real();
        e["im"] = fs.value.imag();
        e["t"] = sq.symbols();
        e["cells"] = sq.cells();
        entries.push_back(std::move(e));
    }
    root["entries"] = std::move(entries);
    return root.dump(1);
}

LatinSquareBank bank_from_json(const std::string& text) {
    nlohmann::json root = nlohmann::json::parse(text);
    ConstellationKind kind = kind_from_name(root.at("kind").get<std::string>());
    int size = root.at("size").get<int>();
    Scaling scaling = (kind == ConstellationKind::PSK) ? Scaling::Unit : Scaling::Lattice;
    Constellation c = Constellation::build(kind, size, scaling);
    SingularFadeSet fades = enumerate_singular_fades(c);

    std::vector<char> have(fades.states.size(), 0);
    std::vector<LatinSquare> squares(fades.states.size(), LatinSquare(1, 1, {0}));
    for (const auto& e : root.at("entries")) {
        int idx = -1;
        if (e.contains("z")) {
            idx = fades.index_of_exact(GaussianRational::parse(e.at("z").get<std::string>()));
        } else {
            idx = fades.index_near(cplx{e.at("re").get<double>(), e.at("im").get<double>()}, 1e-6);
        }
        if (idx < 0) throw std::invalid_argument("bank_from_json: unknown fade state in entry");
        if (have[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("bank_from_json: duplicate fade state");
        squares[static_cast<std::size_t>(idx)] =
            LatinSquare(size, e.at("t").get<int>(), e.at("cells").get<std::vector<int>>());
        have[static_cast<std::size_t>(idx)] = 1;
    }
    for (char h : have)
        if (!h) throw std::invalid_argument("bank_from_json: missing fade state entry");
    return {c, std::move(fades), std::move(squares)};
}

}  // namespace plnc
