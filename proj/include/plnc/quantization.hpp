#pragma once

#include <vector>

#include "plnc/constellation.hpp"
#include "plnc/singular_fades.hpp"

namespace plnc {

// Clustering-independent region test for square QAM. Exterior/Interior
// mean any exclusive-law map attains the bound min(d_min, |z| d_min); No
// means the map choice matters.
enum class CiRegion { Exterior, Interior, No };

// Centers of the unit circles whose outer envelope bounds the exterior
// clustering-independent region: the singular fade states on the
// outermost square, 8(sqrt(M)-1) of them.
std::vector<cplx> ci_ext_centers(int size);

CiRegion in_ci_region(cplx z, int size);

// Boundary where the preferred map switches between two singular fade
// states: an Apollonius circle, or a line when the weights match.
struct TransitionCurve {
    enum class Shape { Circle, Line } shape;
    cplx z1, z2;
    double w1 = 0, w2 = 0;  // representative |d_l| weights
    cplx center;            // Circle
    double radius = 0;
    double a = 0, b = 0, c = 0;  // Line: ax + by = c

    std::vector<cplx> sample(int n, double span = 5.0) const;
    double distance_to(cplx p) const;
};

TransitionCurve transition_curve_between(cplx z1, double abs_dl1, cplx z2, double abs_dl2);

// Answers "which singular fade state's square should the relay use".
// The collapse distance of state h at fade z is
//   min over pairs (d_k, d_l) with -d_k/d_l = h of |d_k + z d_l|
//     = (min |d_l|) * |z - h|,
// and the best map is the one whose own collapse distance is smallest:
// removing the nearest-to-collapse state maximizes the resulting minimum
// cluster distance. Ties go to the canonically smallest state.
class RegionClassifier {
public:
    explicit RegionClassifier(const Constellation& c);
    RegionClassifier(Constellation c, SingularFadeSet fades);

    const Constellation& constellation() const { return constellation_; }
    const SingularFadeSet& fades() const { return fades_; }

    double collapse_distance(int index, cplx z) const;
    int classify_index(cplx z) const;
    const FadeState& classify(cplx z) const {
        return fades_.states[static_cast<std::size_t>(classify_index(z))];
    }

    TransitionCurve transition_curve(int index1, int index2) const;

    // Grid of chosen state indices; cells in the CI region get -1 (QAM only).
    std::vector<int> classify_grid(int nx, int ny, double x0, double x1, double y0,
                                   double y1) const;

    // States whose regions border the given state's region, estimated on a grid.
    std::vector<int> region_neighbors(int index, int nx, int ny, double x0, double x1,
                                      double y0, double y1) const;

    // Singular fade states with |z| > 1 and arg z in [0, pi/4].
    int count_sector() const;

private:
    Constellation constellation_;
    SingularFadeSet fades_;
};

}  // namespace plnc
