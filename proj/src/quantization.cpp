#include "plnc/quantization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace plnc {

namespace {

int side_of(int size) {
    int side = 0;
    while (side * side < size) ++side;
    if (side * side != size || side < 2)
        throw std::invalid_argument("expected a square QAM size");
    return side;
}

double inf_norm(cplx z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }

}  // namespace

std::vector<cplx> ci_ext_centers(int size) {
    const int s = side_of(size) - 1;
    std::vector<cplx> centers;
    for (int a = -s; a <= s; ++a)
        for (int b = -s; b <= s; ++b)
            if (std::abs(a) == s || std::abs(b) == s)
                centers.emplace_back(static_cast<double>(a), static_cast<double>(b));
    return centers;
}

CiRegion in_ci_region(cplx z, int size) {
    const int side = side_of(size);
    const double s = side - 1.0;
    const double r_int = 1.0 / (std::sqrt(2.0 * size) + 1.0 - std::sqrt(2.0));
    if (inf_norm(z) >= side) return CiRegion::Exterior;
    if (std::abs(z) <= r_int) return CiRegion::Interior;  // includes z = 0

    // Outside the envelope of the unit circles on the outermost square and
    // not in the enclosed pocket: the pocket is covered by the interior
    // lattice circles, so points with inf-norm below sqrt(M)-1 never qualify.
    auto outside_envelope = [&](cplx w) {
        if (inf_norm(w) < s) return false;
        for (int a = -static_cast<int>(s); a <= static_cast<int>(s); ++a) {
            for (int b = -static_cast<int>(s); b <= static_cast<int>(s); ++b) {
                if (std::abs(a) != static_cast<int>(s) && std::abs(b) != static_cast<int>(s))
                    continue;
                if (std::abs(w - cplx{static_cast<double>(a), static_cast<double>(b)}) < 1.0)
                    return false;
            }
        }
        return true;
    };

    if (std::abs(z) > 1.0) return outside_envelope(z) ? CiRegion::Exterior : CiRegion::No;
    return outside_envelope(1.0 / z) ? CiRegion::Interior : CiRegion::No;
}

TransitionCurve transition_curve_between(cplx z1, double abs_dl1, cplx z2, double abs_dl2) {
    if (std::abs(z1 - z2) < 1e-12)
        throw std::invalid_argument("transition_curve: coincident fade states");
    if (abs_dl1 <= 0.0 || abs_dl2 <= 0.0)
        throw std::invalid_argument("transition_curve: degenerate representative");
    TransitionCurve tc;
    tc.z1 = z1;
    tc.z2 = z2;
    tc.w1 = abs_dl1;
    tc.w2 = abs_dl2;
    const double q1 = abs_dl1 * abs_dl1, q2 = abs_dl2 * abs_dl2;
    if (std::abs(q1 - q2) <= 1e-12 * std::max(q1, q2)) {
        tc.shape = TransitionCurve::Shape::Line;
        tc.a = z1.real() * q1 - z2.real() * q2;
        tc.b = z1.imag() * q1 - z2.imag() * q2;
        tc.c = -0.5 * (std::norm(z2) * q2 - std::norm(z1) * q1);
        return tc;
    }
    tc.shape = TransitionCurve::Shape::Circle;
    const double r21 = q2 / q1, r12 = q1 / q2;
    const double x = z1.real() / (1.0 - r21) + z2.real() / (1.0 - r12);
    const double y = z1.imag() / (1.0 - r21) + z2.imag() / (1.0 - r12);
    tc.center = {x, y};
    tc.radius = std::sqrt(x * x + y * y + (std::norm(z2) * q2 - std::norm(z1) * q1) / (q1 - q2));
    return tc;
}

std::vector<cplx> TransitionCurve::sample(int n, double span) const {
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (shape == Shape::Circle) {
        for (int k = 0; k < n; ++k) {
            double th = 2.0 * std::numbers::pi * k / n;
            pts.push_back(center + radius * cplx{std::cos(th), std::sin(th)});
        }
        return pts;
    }
    const double nn = std::hypot(a, b);
    const cplx p0{a * c / (nn * nn), b * c / (nn * nn)};
    const cplx dir{-b / nn, a / nn};
    for (int k = 0; k < n; ++k) {
        double t = (n == 1) ? 0.0 : -span + 2.0 * span * k / (n - 1);
        pts.push_back(p0 + t * dir);
    }
    return pts;
}

double TransitionCurve::distance_to(cplx p) const {
    if (shape == Shape::Circle) return std::abs(std::abs(p - center) - radius);
    return std::abs(a * p.real() + b * p.imag() - c) / std::hypot(a, b);
}

RegionClassifier::RegionClassifier(const Constellation& c)
    : constellation_(c), fades_(enumerate_singular_fades(c)) {}

RegionClassifier::RegionClassifier(Constellation c, SingularFadeSet fades)
    : constellation_(std::move(c)), fades_(std::move(fades)) {}

double RegionClassifier::collapse_distance(int index, cplx z) const {
    const FadeState& fs = fades_.states[static_cast<std::size_t>(index)];
    return fs.min_abs_dl * std::abs(z - fs.value);
}

int RegionClassifier::classify_index(cplx z) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fades_.states.size(); ++i) {
        double d = collapse_distance(static_cast<int>(i), z);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

TransitionCurve RegionClassifier::transition_curve(int index1, int index2) const {
    const FadeState& f1 = fades_.states[static_cast<std::size_t>(index1)];
    const FadeState& f2 = fades_.states[static_cast<std::size_t>(index2)];
    return transition_curve_between(f1.value, f1.min_abs_dl, f2.value, f2.min_abs_dl);
}

std::vector<int> RegionClassifier::classify_grid(int nx, int ny, double x0, double x1,
                                                 double y0, double y1) const {
    const bool has_ci = constellation_.kind() == ConstellationKind::QAM;
    std::vector<int> labels(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    auto classify_row = [&](int iy) {
        double y = y0 + (iy + 0.5) * (y1 - y0) / ny;
        for (int ix = 0; ix < nx; ++ix) {
            double x = x0 + (ix + 0.5) * (x1 - x0) / nx;
            cplx z{x, y};
            int lab;
            if (has_ci && in_ci_region(z, constellation_.size()) != CiRegion::No)
                lab = -1;
            else
                lab = classify_index(z);
            labels[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                   static_cast<std::size_t>(ix)] = lab;
        }
    };

    int workers = 1;
    if (const char* env = std::getenv("PLNC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) workers = v;
    } else if (unsigned hw = std::thread::hardware_concurrency(); hw > 1) {
        workers = static_cast<int>(hw);
    }
    workers = std::min(workers, ny);
    if (workers <= 1) {
        for (int iy = 0; iy < ny; ++iy) classify_row(iy);
        return labels;
    }
    // rows are independent and write disjoint slots, so the result does not
    // depend on the worker count
    std::atomic_int next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int iy = next.fetch_add(1); iy < ny; iy = next.fetch_add(1)) classify_row(iy);
        });
    for (auto& th : pool) th.join();
    return labels;
}

std::vector<int> RegionClassifier::region_neighbors(int index, int nx, int ny, double x0,
                                                    double x1, double y0, double y1) const {
    std::vector<int> labels = classify_grid(nx, ny, x0, x1, y0, y1);
    auto at = [&](int ix, int iy) {
        return labels[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                      static_cast<std::size_t>(ix)];
    };
    std::vector<int> out;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            if (at(ix, iy) != index) continue;
            const int dx[] = {1, -1, 0, 0};
            const int dy[] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int jx = ix + dx[d], jy = iy + dy[d];
                if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
                int lab = at(jx, jy);
                if (lab >= 0 && lab != index &&
                    std::find(out.begin(), out.end(), lab) == out.end())
                    out.push_back(lab);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int RegionClassifier::count_sector() const {
    const double quarter = std::numbers::pi / 4.0;
    int count = 0;
    for (const auto& fs : fades_.states) {
        if (fs.ring != FadeState::Ring::Exterior) continue;
        double arg = std::atan2(fs.value.imag(), fs.value.real());
        if (arg >= -1e-12 && arg <= quarter + 1e-12) ++count;
    }
    return count;
}

}  // namespace plnc
