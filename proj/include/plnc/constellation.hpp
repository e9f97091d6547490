#pragma once

#include <complex>
#include <vector>

#include "plnc/gaussian.hpp"

namespace plnc {

using cplx = std::complex<double>;

enum class ConstellationKind { PAM, QAM, PSK };
enum class Scaling {
    Lattice,  // integer coordinates, used by all exact number-theoretic work
    Unit      // average symbol energy 1, used by the simulator
};

// Indexed signal set with the bit-label map built in: point(l) is the
// symbol carrying label l. PAM is parameterized by its point count
// (so pam(4) is the 4-point set {-3,-1,1,3}), QAM sizes are even powers
// of two, PSK sizes are powers of two >= 2.
class Constellation {
public:
    static Constellation build(ConstellationKind kind, int size, Scaling scaling);
    static Constellation pam(int points, Scaling scaling = Scaling::Lattice);
    static Constellation qam(int size, Scaling scaling = Scaling::Lattice);
    static Constellation psk(int size, Scaling scaling = Scaling::Unit);

    ConstellationKind kind() const { return kind_; }
    int size() const { return static_cast<int>(points_.size()); }
    Scaling scaling() const { return scaling_; }
    double scale() const { return scale_; }  // multiplier applied to lattice coords

    const std::vector<cplx>& points() const { return points_; }
    cplx point(int label) const { return points_[static_cast<std::size_t>(label)]; }

    bool has_lattice() const { return kind_ != ConstellationKind::PSK; }
    GaussianInt lattice_point(int label) const;       // unscaled integer coordinates
    int label_of_lattice(const GaussianInt& p) const;  // -1 if absent

    int bits_per_symbol() const;
    double min_distance() const;

    // For QAM: side length sqrt(M); for PAM: the point count.
    int side() const;

private:
    Constellation() = default;

    ConstellationKind kind_ = ConstellationKind::QAM;
    Scaling scaling_ = Scaling::Lattice;
    double scale_ = 1.0;
    std::vector<cplx> points_;
    std::vector<GaussianInt> lattice_;  // empty for PSK
};

// All pairwise differences x - x'. For PAM/QAM the lattice form is the
// integer grid n+jm with the common factor two removed; quadrant_plus is
// its re > 0, im >= 0 subset.
struct DifferenceConstellation {
    std::vector<cplx> deltas;                  // distinct values, constellation scale
    std::vector<GaussianInt> lattice_deltas;   // PAM/QAM only
    std::vector<GaussianInt> quadrant_plus;    // PAM/QAM only
};

DifferenceConstellation difference_constellation(const Constellation& c);

// min over difference pairs (d_k, d_l) != (0,0) of |d_k + z d_l|;
// zero exactly at the singular fade states.
double effective_min_distance(const Constellation& c, cplx fade);

}  // namespace plnc
