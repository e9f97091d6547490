#include "plnc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace plnc {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int isqrt_exact(int n) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return (r * r == n) ? r : -1;
}

double unit_scale(const std::vector<GaussianInt>& lattice) {
    double sum = 0.0;
    for (const auto& p : lattice) sum += static_cast<double>(p.norm());
    return 1.0 / std::sqrt(sum / static_cast<double>(lattice.size()));
}

}  // namespace

Constellation Constellation::pam(int points, Scaling scaling) {
    if (points < 2) throw std::invalid_argument("pam: need at least 2 points");
    Constellation c;
    c.kind_ = ConstellationKind::PAM;
    c.scaling_ = scaling;
    c.lattice_.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        c.lattice_.push_back({-(points - 1) + 2 * k, 0});  // labelled left to right
    c.scale_ = (scaling == Scaling::Unit) ? unit_scale(c.lattice_) : 1.0;
    for (const auto& p : c.lattice_) c.points_.push_back(c.scale_ * p.value());
    return c;
}

Constellation Constellation::qam(int size, Scaling scaling) {
    int side = isqrt_exact(size);
    if (side < 2 || !is_power_of_two(size) || !is_power_of_two(side))
        throw std::invalid_argument("qam: size must be an even power of 2");
    Constellation c;
    c.kind_ = ConstellationKind::QAM;
    c.scaling_ = scaling;
    c.lattice_.resize(static_cast<std::size_t>(size));
    // label = ((side-1+I)*side + (side-1+Q)) / 2
    for (int a = 0; a < side; ++a) {
        for (int b = 0; b < side; ++b) {
            int label = a * side + b;
            c.lattice_[static_cast<std::size_t>(label)] = {2 * a - (side - 1),
                                                           2 * b - (side - 1)};
        }
    }
    c.scale_ = (scaling == Scaling::Unit) ? unit_scale(c.lattice_) : 1.0;
    for (const auto& p : c.lattice_) c.points_.push_back(c.scale_ * p.value());
    return c;
}

Constellation Constellation::psk(int size, Scaling scaling) {
    if (size < 2 || !is_power_of_two(size))
        throw std::invalid_argument("psk: size must be a power of 2, at least 2");
    Constellation c;
    c.kind_ = ConstellationKind::PSK;
    c.scaling_ = scaling;
    c.scale_ = 1.0;  // already unit energy
    for (int k = 0; k < size; ++k) {
        double theta = 2.0 * std::numbers::pi * k / size;
        c.points_.emplace_back(std::cos(theta), std::sin(theta));
    }
    return c;
}

Constellation Constellation::build(ConstellationKind kind, int size, Scaling scaling) {
    switch (kind) {
        case ConstellationKind::PAM: return pam(size, scaling);
        case ConstellationKind::QAM: return qam(size, scaling);
        case ConstellationKind::PSK: return psk(size, scaling);
    }
    throw std::invalid_argument("build: unknown kind");
}

GaussianInt Constellation::lattice_point(int label) const {
    if (!has_lattice()) throw std::logic_error("lattice_point: PSK has no lattice form");
    return lattice_[static_cast<std::size_t>(label)];
}

int Constellation::label_of_lattice(const GaussianInt& p) const {
    for (std::size_t i = 0; i < lattice_.size(); ++i)
        if (lattice_[i] == p) return static_cast<int>(i);
    return -1;
}

int Constellation::bits_per_symbol() const {
    int b = 0;
    for (int n = size(); n > 1; n >>= 1) ++b;
    return b;
}

int Constellation::side() const {
    if (kind_ == ConstellationKind::QAM) return isqrt_exact(size());
    return size();
}

double Constellation::min_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t k = i + 1; k < points_.size(); ++k)
            best = std::min(best, std::abs(points_[i] - points_[k]));
    return best;
}

DifferenceConstellation difference_constellation(const Constellation& c) {
    DifferenceConstellation d;
    if (c.has_lattice()) {
        // Differences of lattice points are 2(n+jm); store the halved grid.
        std::vector<GaussianInt> seen;
        for (int i = 0; i < c.size(); ++i) {
            for (int k = 0; k < c.size(); ++k) {
                GaussianInt diff = c.lattice_point(i) - c.lattice_point(k);
                GaussianInt half{diff.re / 2, diff.im / 2};
                if (std::find(seen.begin(), seen.end(), half) == seen.end())
                    seen.push_back(half);
            }
        }
        std::sort(seen.begin(), seen.end(), [](const GaussianInt& a, const GaussianInt& b) {
            return std::make_pair(a.re, a.im) < std::make_pair(b.re, b.im);
        });
        d.lattice_deltas = seen;
        for (const auto& h : seen) {
            d.deltas.push_back(2.0 * c.scale() * h.value());
            if (h.re > 0 && h.im >= 0) d.quadrant_plus.push_back(h);
        }
        return d;
    }
    // PSK: numeric dedup; distinct differences are well separated.
    std::vector<cplx> vals;
    for (int i = 0; i < c.size(); ++i)
        for (int k = 0; k < c.size(); ++k) vals.push_back(c.point(i) - c.point(k));
    std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
        return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
    });
    const double tol = 1e-9;
    for (const auto& v : vals) {
        bool dup = false;
        for (auto it = d.deltas.rbegin(); it != d.deltas.rend(); ++it) {
            if (std::abs(*it - v) < tol) {
                dup = true;
                break;
            }
            if (v.real() - it->real() > tol) break;
        }
        if (!dup) d.deltas.push_back(v);
    }
    return d;
}

double effective_min_distance(const Constellation& c, cplx fade) {
    DifferenceConstellation d = difference_constellation(c);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& dk : d.deltas) {
        for (const auto& dl : d.deltas) {
            if (dk == cplx{0.0, 0.0} && dl == cplx{0.0, 0.0}) continue;
            best = std::min(best, std::abs(dk + fade * dl));
        }
    }
    return best;
}

}  // namespace plnc
