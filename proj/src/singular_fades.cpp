#include "plnc/singular_fades.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace plnc {

namespace {

FadeState::Ring ring_of(const GaussianRational& z) {
    std::uint64_t n = z.num().norm(), d = z.den().norm();
    if (n == d) return FadeState::Ring::UnitCircle;
    return n > d ? FadeState::Ring::Exterior : FadeState::Ring::Interior;
}

FadeState::Ring ring_of(cplx z) {
    double a = std::abs(z);
    if (std::abs(a - 1.0) < 1e-9) return FadeState::Ring::UnitCircle;
    return a > 1.0 ? FadeState::Ring::Exterior : FadeState::Ring::Interior;
}

// Groups near-equal complex values; returns cluster index per input.
// Sort-sweep on the real part keeps this near-linear.
std::vector<int> cluster_complex(const std::vector<cplx>& vals, double tol,
                                 int& cluster_count) {
    const std::size_t n = vals.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> rank_(n, 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    };

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return vals[a].real() < vals[b].real();
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (vals[order[k]].real() - vals[order[i]].real() > tol) break;
            if (std::abs(vals[order[k]] - vals[order[i]]) <= tol)
                unite(order[i], order[k]);
        }
    }
    std::vector<int> label(n, -1);
    cluster_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int r = find(static_cast<int>(i));
        if (label[r] < 0) label[r] = cluster_count++;
        label[i] = label[r];
    }
    return label;
}

SingularFadeSet enumerate_exact(const Constellation& c) {
    DifferenceConstellation d = difference_constellation(c);
    std::vector<GaussianInt> nonzero;
    for (const auto& g : d.lattice_deltas)
        if (!g.is_zero()) nonzero.push_back(g);

    std::map<GaussianRational, std::uint64_t> min_norm_dl;
    for (const auto& dk : nonzero) {
        for (const auto& dl : nonzero) {
            GaussianRational z{-dk, dl};
            auto [it, fresh] = min_norm_dl.emplace(z, dl.norm());
            if (!fresh) it->second = std::min(it->second, dl.norm());
        }
    }

    SingularFadeSet out;
    out.states.reserve(min_norm_dl.size());
    for (const auto& [z, norm_dl] : min_norm_dl) {
        FadeState fs;
        fs.value = z.value();
        fs.exact = z;
        fs.has_exact = true;
        fs.min_abs_dl = 2.0 * c.scale() * std::sqrt(static_cast<double>(norm_dl));
        fs.ring = ring_of(z);
        out.states.push_back(fs);
    }
    return out;
}

SingularFadeSet enumerate_numeric(const Constellation& c) {
    DifferenceConstellation d = difference_constellation(c);
    std::vector<cplx> nonzero;
    for (const auto& v : d.deltas)
        if (std::abs(v) > 1e-12) nonzero.push_back(v);

    std::vector<cplx> ratios;
    std::vector<double> abs_dl;
    ratios.reserve(nonzero.size() * nonzero.size());
    for (const auto& dk : nonzero) {
        for (const auto& dl : nonzero) {
            ratios.push_back(-dk / dl);
            abs_dl.push_back(std::abs(dl));
        }
    }
    int nclusters = 0;
    std::vector<int> label = cluster_complex(ratios, 1e-7, nclusters);

    std::vector<cplx> rep(static_cast<std::size_t>(nclusters));
    std::vector<double> mdl(static_cast<std::size_t>(nclusters), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(nclusters), false);
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        auto k = static_cast<std::size_t>(label[i]);
        if (!seen[k]) {
            seen[k] = true;
            rep[k] = ratios[i];
            mdl[k] = abs_dl[i];
        } else {
            mdl[k] = std::min(mdl[k], abs_dl[i]);
        }
    }

    SingularFadeSet out;
    for (std::size_t k = 0; k < rep.size(); ++k) {
        FadeState fs;
        fs.value = rep[k];
        fs.min_abs_dl = mdl[k];
        fs.ring = ring_of(rep[k]);
        out.states.push_back(fs);
    }
    std::sort(out.states.begin(), out.states.end(), [](const FadeState& a, const FadeState& b) {
        return std::make_pair(a.value.real(), a.value.imag()) <
               std::make_pair(b.value.real(), b.value.imag());
    });
    return out;
}

}  // namespace

int SingularFadeSet::index_of_exact(const GaussianRational& z) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i].has_exact && states[i].exact == z) return static_cast<int>(i);
    return -1;
}

int SingularFadeSet::index_near(cplx z, double tol) const {
    int best = -1;
    double best_dist = tol;
    for (std::size_t i = 0; i < states.size(); ++i) {
        double dist = std::abs(states[i].value - z);
        if (dist <= best_dist) {
            best_dist = dist;
            best = static_cast<int>(i);
        }
    }
    return best;
}

SingularFadeSet enumerate_singular_fades(const Constellation& c) {
    return c.has_lattice() ? enumerate_exact(c) : enumerate_numeric(c);
}

std::uint64_t count_singular_pam(int points) {
    if (points < 2) throw std::invalid_argument("count_singular_pam: need >= 2 points");
    // The n = 1 term would recount z = +-1, which the leading 2 covers.
    std::uint64_t sum = 0;
    for (int n = 2; n <= points - 1; ++n) sum += euler_phi(static_cast<std::uint64_t>(n));
    return 2 + 4 * sum;
}

std::uint64_t coprime_pair_count_qam(int size) {
    Constellation c = Constellation::qam(size, Scaling::Lattice);
    DifferenceConstellation d = difference_constellation(c);
    std::uint64_t pairs = 0;
    const auto& q = d.quadrant_plus;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t k = i + 1; k < q.size(); ++k)
            if (is_coprime(q[i], q[k])) ++pairs;
    return pairs;
}

std::uint64_t count_singular_qam(int size) {
    return 4 + 8 * coprime_pair_count_qam(size);
}

std::uint64_t count_singular_psk(int size) {
    if (size < 2 || (size & (size - 1)) != 0)
        throw std::invalid_argument("count_singular_psk: size must be a power of 2");
    std::uint64_t m = static_cast<std::uint64_t>(size);
    return m * (m * m / 4 - m / 2 + 1);
}

std::uint64_t singular_upper_bound_qam(int size) {
    int side = 0;
    while (side * side < size) ++side;
    if (side * side != size) throw std::invalid_argument("singular_upper_bound_qam: bad size");
    std::uint64_t n = (static_cast<std::uint64_t>(2 * side - 1) * (2 * side - 1) - 1) / 4;
    return 4 * (n * n - n + 1);
}

std::size_t ConstraintSet::multi_class_count() const {
    std::size_t n = 0;
    for (const auto& cls : classes)
        if (cls.size() > 1) ++n;
    return n;
}

namespace {

ConstraintSet finish_constraints(int order,
                                 std::vector<std::vector<std::pair<int, int>>> groups) {
    ConstraintSet cs;
    cs.order = order;
    for (auto& g : groups) std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    cs.classes = std::move(groups);
    if (cs.multi_class_count() == 0)
        throw std::invalid_argument("constraints_for: fade state is not singular");
    return cs;
}

}  // namespace

ConstraintSet constraints_for(const Constellation& c, const GaussianRational& z) {
    if (!c.has_lattice())
        throw std::invalid_argument("constraints_for: exact path needs a lattice constellation");
    if (z.is_zero()) throw std::invalid_argument("constraints_for: zero fade state");
    const int m = c.size();
    // Group by q*x_k + p*x_l, an exact Gaussian-integer key.
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::pair<int, int>>> groups;
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
            GaussianInt w = z.den() * c.lattice_point(k) + z.num() * c.lattice_point(l);
            groups[{w.re, w.im}].push_back({k, l});
        }
    }
    std::vector<std::vector<std::pair<int, int>>> cls;
    cls.reserve(groups.size());
    for (auto& [key, cells] : groups) cls.push_back(std::move(cells));
    return finish_constraints(m, std::move(cls));
}

ConstraintSet constraints_for_numeric(const Constellation& c, cplx z, double tol) {
    const int m = c.size();
    std::vector<cplx> sums;
    sums.reserve(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) sums.push_back(c.point(k) + z * c.point(l));
    int nclusters = 0;
    std::vector<int> label = cluster_complex(sums, tol, nclusters);
    std::vector<std::vector<std::pair<int, int>>> cls(static_cast<std::size_t>(nclusters));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            cls[static_cast<std::size_t>(label[static_cast<std::size_t>(k * m + l)])].push_back(
                {k, l});
    return finish_constraints(m, std::move(cls));
}

ConstraintSet constraints_for(const Constellation& c, const FadeState& z) {
    if (z.has_exact && c.has_lattice()) return constraints_for(c, z.exact);
    return constraints_for_numeric(c, z.value);
}

}  // namespace plnc
