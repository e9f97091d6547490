#pragma once

#include <stdexcept>
#include <vector>

#include "plnc/constellation.hpp"
#include "plnc/singular_fades.hpp"

namespace plnc {

// M x M array over symbols {0..t-1}; rows are indexed by A's label,
// columns by B's label. The Latin property (each symbol at most once per
// row and per column) is exactly the exclusive law for the relay map.
class LatinSquare {
public:
    LatinSquare(int order, int symbols, std::vector<int> cells);

    int order() const { return order_; }
    int symbols() const { return symbols_; }
    int at(int r, int c) const {
        return cells_[static_cast<std::size_t>(r) * static_cast<std::size_t>(order_) +
                      static_cast<std::size_t>(c)];
    }
    const std::vector<int>& cells() const { return cells_; }

    bool verify() const;

    friend bool operator==(const LatinSquare& a, const LatinSquare& b) = default;

private:
    int order_;
    int symbols_;
    std::vector<int> cells_;  // row-major
};

// min over cell pairs carrying different symbols of |(x_A-x_A') + z (x_B-x_B')|.
// Strictly positive exactly when the square removes the fade state z.
double min_cluster_distance(const LatinSquare& l, const Constellation& c, cplx fade);

LatinSquare standard_pam_square(int points);  // left-cyclic; removes z = 1
LatinSquare standard_qam_square(int size);    // block left-cyclic; removes z = 1
LatinSquare xor_square(int size);             // cells[k][l] = k ^ l

LatinSquare transpose(const LatinSquare& l);

// Column permutation sending the square removing z to one removing j*z.
// Requires a constellation closed under 90-degree rotation.
LatinSquare rotate_quarter(const LatinSquare& l, const Constellation& c, cplx fade);

// Row/column permutations sending the square removing gamma*e^{j theta}
// to one removing gamma*e^{j(pi/2 - theta)}.
LatinSquare reflect(const LatinSquare& l, const Constellation& c, cplx fade);

struct CompletionOptions {
    int t_max = 0;                 // 0: defaults to 2 * order
    long node_budget = 500'000;    // per symbol-count level
};

struct CompletionFailure : std::runtime_error {
    CompletionFailure(const std::string& what, int best_t)
        : std::runtime_error(what), best_t_tried(best_t) {}
    int best_t_tried;
};

// Fills a constrained partially-filled square: every constraint class is
// monochromatic and the result is a Latin square. Symbol counts are tried
// from the order upward, so the returned t is minimal among solutions the
// bounded search finds.
LatinSquare complete_constrained(const ConstraintSet& constraints,
                                 const CompletionOptions& options = {});

}  // namespace plnc
