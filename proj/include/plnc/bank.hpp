#pragma once

#include <string>
#include <vector>

#include "plnc/latin_square.hpp"

namespace plnc {

// One verified Latin square per singular fade state, squares[i] removing
// fades().states[i]. Built by seeding the standard square at z = 1,
// closing under transpose / quarter-rotation / reflection, and completing
// constrained squares for the remaining orbit representatives.
class LatinSquareBank {
public:
    LatinSquareBank(Constellation c, SingularFadeSet fades, std::vector<LatinSquare> squares);

    const Constellation& constellation() const { return constellation_; }
    const SingularFadeSet& fades() const { return fades_; }
    const std::vector<LatinSquare>& squares() const { return squares_; }
    const LatinSquare& square(int index) const {
        return squares_[static_cast<std::size_t>(index)];
    }

    int index_near(cplx z, double tol = 1e-9) const { return fades_.index_near(z, tol); }

    // The z = 1 entry, used when the fade lies in the clustering
    // independent region.
    const LatinSquare& fallback() const { return squares_[static_cast<std::size_t>(fallback_)]; }

    int max_symbols() const;
    std::size_t size() const { return squares_.size(); }

private:
    Constellation constellation_;
    SingularFadeSet fades_;
    std::vector<LatinSquare> squares_;
    int fallback_;
};

LatinSquareBank build_bank(const Constellation& c, const CompletionOptions& options = {});

std::string bank_to_json(const LatinSquareBank& bank);
LatinSquareBank bank_from_json(const std::string& text);

}  // namespace plnc
