#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "plnc/constellation.hpp"
#include "plnc/gaussian.hpp"

namespace plnc {

// A fade state h_B/h_A at which the effective relay constellation has
// coincident points. For PAM/QAM the exact Gaussian-rational form is
// carried along; PSK states are numeric only.
struct FadeState {
    cplx value;
    GaussianRational exact;
    bool has_exact = false;
    double min_abs_dl = 0.0;  // min |d_l| over realizing pairs, constellation scale
    enum class Ring { UnitCircle, Exterior, Interior } ring = Ring::UnitCircle;
};

struct SingularFadeSet {
    std::vector<FadeState> states;  // canonically sorted, deduplicated

    int index_of_exact(const GaussianRational& z) const;
    int index_near(cplx z, double tol = 1e-9) const;
    std::size_t size() const { return states.size(); }
};

// Exact enumeration of all ratios of nonzero difference-constellation
// points, deduplicated; excludes 0 and infinity.
SingularFadeSet enumerate_singular_fades(const Constellation& c);

// Closed-form counts. Enumeration is the ground truth; these are checks.
std::uint64_t count_singular_pam(int points);          // points >= 2
std::uint64_t count_singular_qam(int size);
std::uint64_t count_singular_psk(int size);
std::uint64_t coprime_pair_count_qam(int size);        // unordered distinct pairs in scaled deltaS+
std::uint64_t singular_upper_bound_qam(int size);      // 4(n^2-n+1), n = ((2 sqrt(M)-1)^2-1)/4

// Partition of the M x M label grid into singularity-removal classes for
// a given singular fade state: cells (k,l) with equal x_k + z x_l.
// Singleton classes are kept; classes are sorted by first cell row-major.
struct ConstraintSet {
    int order = 0;
    std::vector<std::vector<std::pair<int, int>>> classes;

    std::size_t multi_class_count() const;
};

ConstraintSet constraints_for(const Constellation& c, const FadeState& z);
ConstraintSet constraints_for(const Constellation& c, const GaussianRational& z);
ConstraintSet constraints_for_numeric(const Constellation& c, cplx z, double tol = 1e-7);

}  // namespace plnc
