#include "plnc/latin_square.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace plnc {

LatinSquare::LatinSquare(int order, int symbols, std::vector<int> cells)
    : order_(order), symbols_(symbols), cells_(std::move(cells)) {
    if (order_ < 1 || symbols_ < order_ ||
        cells_.size() != static_cast<std::size_t>(order_) * static_cast<std::size_t>(order_))
        throw std::invalid_argument("LatinSquare: bad dimensions");
    for (int v : cells_)
        if (v < 0 || v >= symbols_) throw std::invalid_argument("LatinSquare: symbol out of range");
}

bool LatinSquare::verify() const {
    std::vector<char> seen(static_cast<std::size_t>(symbols_));
    for (int r = 0; r < order_; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = 0; c < order_; ++c) {
            int v = at(r, c);
            if (seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (int c = 0; c < order_; ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int r = 0; r < order_; ++r) {
            int v = at(r, c);
            if (seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    return true;
}

double min_cluster_distance(const LatinSquare& l, const Constellation& c, cplx fade) {
    const int m = l.order();
    if (m != c.size())
        throw std::invalid_argument("min_cluster_distance: order does not match constellation");
    std::vector<cplx> eff(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        for (int col = 0; col < m; ++col)
            eff[static_cast<std::size_t>(r * m + col)] = c.point(r) + fade * c.point(col);
    const auto& cells = l.cells();
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = eff.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (cells[i] == cells[k]) continue;
            cplx d = eff[i] - eff[k];
            double n2 = d.real() * d.real() + d.imag() * d.imag();
            if (n2 < best) best = n2;
        }
    }
    return std::sqrt(best);
}

LatinSquare standard_pam_square(int points) {
    if (points < 2) throw std::invalid_argument("standard_pam_square: need >= 2 points");
    std::vector<int> cells(static_cast<std::size_t>(points) * static_cast<std::size_t>(points));
    for (int r = 0; r < points; ++r)
        for (int c = 0; c < points; ++c)
            cells[static_cast<std::size_t>(r * points + c)] = (r + c) % points;
    return {points, points, std::move(cells)};
}

LatinSquare standard_qam_square(int size) {
    Constellation c = Constellation::qam(size, Scaling::Lattice);  // validates the size
    const int side = c.side();
    std::vector<int> cells(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
    // Block left-cyclic arrangement of left-cyclic side x side squares.
    for (int r = 0; r < size; ++r) {
        int a = r / side, b = r % side;
        for (int col = 0; col < size; ++col) {
            int e = col / side, d = col % side;
            cells[static_cast<std::size_t>(r * size + col)] =
                ((a + e) % side) * side + (b + d) % side;
        }
    }
    return {size, size, std::move(cells)};
}

LatinSquare xor_square(int size) {
    if (size < 2 || (size & (size - 1)) != 0)
        throw std::invalid_argument("xor_square: size must be a power of 2");
    std::vector<int> cells(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) cells[static_cast<std::size_t>(r * size + c)] = r ^ c;
    return {size, size, std::move(cells)};
}

LatinSquare transpose(const LatinSquare& l) {
    const int m = l.order();
    std::vector<int> cells(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) cells[static_cast<std::size_t>(c * m + r)] = l.at(r, c);
    return {m, l.symbols(), std::move(cells)};
}

namespace {

constexpr double kRemovalTol = 1e-9;

// Label permutation induced by a point map on the constellation.
template <typename PointMap>
std::vector<int> label_permutation(const Constellation& c, PointMap&& map) {
    std::vector<int> perm(static_cast<std::size_t>(c.size()), -1);
    for (int l = 0; l < c.size(); ++l) {
        int target = map(l);
        if (target < 0) throw std::invalid_argument("constellation not closed under this map");
        perm[static_cast<std::size_t>(l)] = target;
    }
    return perm;
}

std::vector<int> perm_times_j(const Constellation& c) {
    if (c.kind() == ConstellationKind::PSK) {
        int m = c.size();
        if (m % 4 != 0) throw std::invalid_argument("rotate: PSK size must be divisible by 4");
        return label_permutation(c, [&](int l) { return (l + m / 4) % m; });
    }
    return label_permutation(
        c, [&](int l) { return c.label_of_lattice(c.lattice_point(l).times_j()); });
}

std::vector<int> perm_swap_iq(const Constellation& c) {
    if (c.kind() == ConstellationKind::PSK) {
        int m = c.size();
        if (m % 4 != 0) throw std::invalid_argument("reflect: PSK size must be divisible by 4");
        return label_permutation(c, [&](int l) { return ((m / 4 - l) % m + m) % m; });
    }
    return label_permutation(c, [&](int l) {
        GaussianInt p = c.lattice_point(l);
        return c.label_of_lattice({p.im, p.re});
    });
}

std::vector<int> perm_conj(const Constellation& c) {
    if (c.kind() == ConstellationKind::PSK) {
        int m = c.size();
        return label_permutation(c, [&](int l) { return (m - l) % m; });
    }
    return label_permutation(c,
                             [&](int l) { return c.label_of_lattice(c.lattice_point(l).conj()); });
}

void require_removes(const LatinSquare& l, const Constellation& c, cplx fade,
                     const char* who) {
    if (min_cluster_distance(l, c, fade) <= kRemovalTol)
        throw std::invalid_argument(std::string(who) + ": square does not remove the fade state");
}

}  // namespace

LatinSquare rotate_quarter(const LatinSquare& l, const Constellation& c, cplx fade) {
    require_removes(l, c, fade, "rotate_quarter");
    std::vector<int> perm = perm_times_j(c);
    const int m = l.order();
    std::vector<int> cells(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        for (int col = 0; col < m; ++col)
            cells[static_cast<std::size_t>(r * m + col)] =
                l.at(r, perm[static_cast<std::size_t>(col)]);
    return {m, l.symbols(), std::move(cells)};
}

LatinSquare reflect(const LatinSquare& l, const Constellation& c, cplx fade) {
    require_removes(l, c, fade, "reflect");
    std::vector<int> row_perm = perm_swap_iq(c);
    std::vector<int> col_perm = perm_conj(c);
    const int m = l.order();
    std::vector<int> cells(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        for (int col = 0; col < m; ++col)
            cells[static_cast<std::size_t>(r * m + col)] =
                l.at(row_perm[static_cast<std::size_t>(r)], col_perm[static_cast<std::size_t>(col)]);
    return {m, l.symbols(), std::move(cells)};
}

namespace {

// symbol-set bitmask; two words cover t up to 128
using Mask = unsigned __int128;

int mask_popcount(Mask m) {
    return std::popcount(static_cast<std::uint64_t>(m)) +
           std::popcount(static_cast<std::uint64_t>(m >> 64));
}

int mask_ctz(Mask m) {
    auto low = static_cast<std::uint64_t>(m);
    if (low) return std::countr_zero(low);
    return 64 + std::countr_zero(static_cast<std::uint64_t>(m >> 64));
}

struct Vertex {
    std::vector<std::pair<int, int>> cells;
    int first_cell = 0;  // row-major index, ordering key
};

struct Completer {
    int order;
    int t = 0;
    std::vector<Vertex> verts;
    std::vector<int> color;  // per vertex, -1 unassigned
    std::vector<Mask> row_mask, col_mask;
    std::vector<int> row_free, col_free;
    long nodes = 0;
    long budget = 0;
    bool aborted = false;

    Mask full_mask() const {
        return (t >= 128) ? ~Mask{0} : ((Mask{1} << t) - 1);
    }

    Mask feasible(const Vertex& v) const {
        Mask used = 0;
        for (auto [r, c] : v.cells)
            used |= row_mask[static_cast<std::size_t>(r)] | col_mask[static_cast<std::size_t>(c)];
        return full_mask() & ~used;
    }

    bool capacity_ok(int r, int c) const {
        if (row_free[static_cast<std::size_t>(r)] >
            t - mask_popcount(row_mask[static_cast<std::size_t>(r)]))
            return false;
        if (col_free[static_cast<std::size_t>(c)] >
            t - mask_popcount(col_mask[static_cast<std::size_t>(c)]))
            return false;
        return true;
    }

    bool search() {
        if (++nodes > budget) {
            aborted = true;
            return false;
        }
        // Most-constrained vertex first; ties by first cell.
        int pick = -1;
        int pick_count = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (color[i] >= 0) continue;
            int n = mask_popcount(feasible(verts[i]));
            if (n < pick_count) {
                pick_count = n;
                pick = static_cast<int>(i);
                if (n == 0) break;
            }
        }
        if (pick < 0) return true;  // all assigned
        if (pick_count == 0) return false;

        const Vertex& v = verts[static_cast<std::size_t>(pick)];
        Mask avail = feasible(v);
        while (avail) {
            int s = mask_ctz(avail);
            avail &= avail - 1;
            Mask bit = Mask{1} << s;
            color[static_cast<std::size_t>(pick)] = s;
            for (auto [r, c] : v.cells) {
                row_mask[static_cast<std::size_t>(r)] |= bit;
                col_mask[static_cast<std::size_t>(c)] |= bit;
                --row_free[static_cast<std::size_t>(r)];
                --col_free[static_cast<std::size_t>(c)];
            }
            bool ok = true;
            for (auto [r, c] : v.cells)
                if (!capacity_ok(r, c)) {
                    ok = false;
                    break;
                }
            if (ok && search()) return true;
            for (auto [r, c] : v.cells) {
                row_mask[static_cast<std::size_t>(r)] &= ~bit;
                col_mask[static_cast<std::size_t>(c)] &= ~bit;
                ++row_free[static_cast<std::size_t>(r)];
                ++col_free[static_cast<std::size_t>(c)];
            }
            color[static_cast<std::size_t>(pick)] = -1;
            if (aborted) return false;
        }
        return false;
    }
};

}  // namespace

LatinSquare complete_constrained(const ConstraintSet& constraints,
                                 const CompletionOptions& options) {
    const int m = constraints.order;
    if (m < 1) throw std::invalid_argument("complete_constrained: empty constraint set");
    int t_max = options.t_max > 0 ? options.t_max : 2 * m;
    if (t_max > 128)
        throw std::invalid_argument("complete_constrained: t_max above 128 unsupported");

    std::vector<int> owner(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), -1);
    std::vector<Vertex> verts;
    for (const auto& cls : constraints.classes) {
        Vertex v;
        v.cells = cls;
        for (auto [r, c] : cls) {
            if (r < 0 || r >= m || c < 0 || c >= m)
                throw std::invalid_argument("complete_constrained: cell out of range");
            int idx = r * m + c;
            if (owner[static_cast<std::size_t>(idx)] >= 0)
                throw std::invalid_argument("complete_constrained: overlapping classes");
            owner[static_cast<std::size_t>(idx)] = static_cast<int>(verts.size());
        }
        // A class with two cells in one row or column can never satisfy
        // the exclusive law.
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t k = i + 1; k < cls.size(); ++k)
                if (cls[i].first == cls[k].first || cls[i].second == cls[k].second)
                    throw std::invalid_argument(
                        "complete_constrained: class with row/column collision");
        v.first_cell = cls.front().first * m + cls.front().second;
        verts.push_back(std::move(v));
    }
    for (int idx = 0; idx < m * m; ++idx) {
        if (owner[static_cast<std::size_t>(idx)] >= 0) continue;
        Vertex v;
        v.cells = {{idx / m, idx % m}};
        v.first_cell = idx;
        verts.push_back(std::move(v));
    }
    std::sort(verts.begin(), verts.end(),
              [](const Vertex& a, const Vertex& b) { return a.first_cell < b.first_cell; });

    for (int t = m; t <= t_max; ++t) {
        Completer comp;
        comp.order = m;
        comp.t = t;
        comp.verts = verts;
        comp.color.assign(verts.size(), -1);
        comp.row_mask.assign(static_cast<std::size_t>(m), 0);
        comp.col_mask.assign(static_cast<std::size_t>(m), 0);
        comp.row_free.assign(static_cast<std::size_t>(m), m);
        comp.col_free.assign(static_cast<std::size_t>(m), m);
        comp.budget = options.node_budget;
        if (comp.search()) {
            std::vector<int> cells(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), -1);
            for (std::size_t i = 0; i < comp.verts.size(); ++i)
                for (auto [r, c] : comp.verts[i].cells)
                    cells[static_cast<std::size_t>(r * m + c)] = comp.color[i];
            // Compact symbols in row-major first-use order.
            std::vector<int> remap(static_cast<std::size_t>(t), -1);
            int next = 0;
            for (int& v : cells) {
                if (remap[static_cast<std::size_t>(v)] < 0) remap[static_cast<std::size_t>(v)] = next++;
                v = remap[static_cast<std::size_t>(v)];
            }
            return {m, next, std::move(cells)};
        }
    }
    throw CompletionFailure("complete_constrained: no square found with t <= " +
                                std::to_string(t_max),
                            t_max);
}

}  // namespace plnc
