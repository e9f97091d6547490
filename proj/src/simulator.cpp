#include "plnc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace plnc {

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
}

cplx Rng::complex_normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-std::log(u1));
    double th = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(th), r * std::sin(th)};
}

ChannelModel ChannelModel::rician_db(double k_db) {
    ChannelModel m;
    m.kind = Kind::Rician;
    m.k_factor = std::pow(10.0, k_db / 10.0);
    return m;
}

cplx draw_fade(const ChannelModel& model, Rng& rng) {
    if (model.kind == ChannelModel::Kind::Rayleigh || model.k_factor == 0.0)
        return rng.complex_normal();
    double k = model.k_factor;
    return std::sqrt(k / (k + 1.0)) + std::sqrt(1.0 / (k + 1.0)) * rng.complex_normal();
}

WilsonInterval wilson_interval(long errors, long n, double z) {
    double p = (n > 0) ? static_cast<double>(errors) / static_cast<double>(n) : 0.0;
    double nn = static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half), half};
}

std::vector<cplx> bc_constellation(int t, const Constellation& node_set) {
    if (t < node_set.size()) throw std::invalid_argument("bc_constellation: t below order");
    if (t == node_set.size()) {
        if (node_set.scaling() == Scaling::Unit || node_set.kind() == ConstellationKind::PSK)
            return node_set.points();
        Constellation unit =
            Constellation::build(node_set.kind(), node_set.size(), Scaling::Unit);
        return unit.points();
    }
    // Rectangular w x h grid when a near-square factorization exists,
    // otherwise trim the smallest enclosing square by largest magnitude.
    int w = 0, h = 0;
    for (int d = static_cast<int>(std::sqrt(static_cast<double>(t))); d >= 1; --d) {
        if (t % d == 0 && t / d <= 2 * d) {
            h = d;
            w = t / d;
            break;
        }
    }
    std::vector<std::pair<int, int>> coords;
    if (w > 0) {
        for (int iy = 0; iy < h; ++iy)
            for (int ix = 0; ix < w; ++ix) coords.push_back({ix, iy});
    } else {
        int g = 1;
        while (g * g < t) ++g;
        std::vector<std::pair<int, int>> all;
        for (int iy = 0; iy < g; ++iy)
            for (int ix = 0; ix < g; ++ix) all.push_back({ix, iy});
        std::stable_sort(all.begin(), all.end(), [&](auto a, auto b) {
            auto mag = [&](std::pair<int, int> p) {
                int dx = 2 * p.first - (g - 1), dy = 2 * p.second - (g - 1);
                return dx * dx + dy * dy;
            };
            return mag(a) < mag(b);
        });
        all.resize(static_cast<std::size_t>(t));
        coords = all;
        w = g;
        h = g;
    }
    // Snake scan keeps consecutive labels adjacent.
    std::sort(coords.begin(), coords.end(), [&](auto a, auto b) {
        if (a.second != b.second) return a.second < b.second;
        bool flip = (a.second % 2) != 0;
        return flip ? a.first > b.first : a.first < b.first;
    });
    std::vector<cplx> pts;
    pts.reserve(coords.size());
    double energy = 0.0;
    for (auto [ix, iy] : coords) {
        cplx p{static_cast<double>(2 * ix - (w - 1)), static_cast<double>(2 * iy - (h - 1))};
        energy += std::norm(p);
        pts.push_back(p);
    }
    double scale = 1.0 / std::sqrt(energy / static_cast<double>(pts.size()));
    for (auto& p : pts) p *= scale;
    return pts;
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PLNC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

Constellation bank_basis(const SimConfig& cfg) {
    Scaling s = (cfg.kind == ConstellationKind::PSK) ? Scaling::Unit : Scaling::Lattice;
    return Constellation::build(cfg.kind, cfg.m, s);
}

}  // namespace

TwoWayRelaySimulator::TwoWayRelaySimulator(const SimConfig& cfg)
    : TwoWayRelaySimulator(cfg, cfg.scheme == RelayScheme::AdaptiveLS
                                    ? std::make_shared<const LatinSquareBank>(build_bank(
                                          bank_basis(cfg), CompletionOptions{cfg.t_max, 500'000}))
                                    : nullptr) {}

TwoWayRelaySimulator::TwoWayRelaySimulator(const SimConfig& cfg,
                                           std::shared_ptr<const LatinSquareBank> bank)
    : cfg_(cfg),
      signal_(Constellation::build(cfg.kind, cfg.m, Scaling::Unit)),
      bank_(std::move(bank)),
      threads_(resolve_threads(cfg.threads)) {
    if (cfg_.scheme == RelayScheme::AdaptiveLS) {
        if (!bank_) throw std::invalid_argument("simulator: adaptive scheme needs a bank");
        classifier_ = std::make_unique<RegionClassifier>(bank_->constellation(), bank_->fades());
        for (const auto& sq : bank_->squares()) {
            if (static_cast<std::size_t>(sq.symbols()) >= bc_by_t_.size())
                bc_by_t_.resize(static_cast<std::size_t>(sq.symbols()) + 1);
            auto& pts = bc_by_t_[static_cast<std::size_t>(sq.symbols())];
            if (pts.empty()) pts = bc_constellation(sq.symbols(), signal_);
        }
    } else {
        xor_ = std::make_unique<LatinSquare>(xor_square(cfg_.m));
        bc_by_t_.resize(static_cast<std::size_t>(cfg_.m) + 1);
        bc_by_t_[static_cast<std::size_t>(cfg_.m)] = bc_constellation(cfg_.m, signal_);
    }
}

const LatinSquare& TwoWayRelaySimulator::choose_square(cplx fade) const {
    if (cfg_.scheme == RelayScheme::FixedXor) return *xor_;
    if (cfg_.kind == ConstellationKind::QAM &&
        in_ci_region(fade, cfg_.m) != CiRegion::No)
        return bank_->fallback();
    return bank_->square(classifier_->classify_index(fade));
}

const std::vector<cplx>& TwoWayRelaySimulator::bc_points(int t) const {
    return bc_by_t_[static_cast<std::size_t>(t)];
}

std::pair<int, int> TwoWayRelaySimulator::relay_ml_decode(cplx y, cplx h_a, cplx h_b) const {
    const int m = cfg_.m;
    int best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int ka = 0; ka < m; ++ka) {
        cplx partial = y - h_a * signal_.point(ka);
        for (int kb = 0; kb < m; ++kb) {
            double d = std::norm(partial - h_b * signal_.point(kb));
            if (d < best) {
                best = d;
                best_a = ka;
                best_b = kb;
            }
        }
    }
    return {best_a, best_b};
}

int TwoWayRelaySimulator::decode_partner(cplx y, cplx h, const LatinSquare& l, int own,
                                         bool own_is_row) const {
    // ML over the broadcast symbols reachable from the node's own
    // row/column; the exclusive law makes the inversion unique.
    const auto& bc = bc_points(l.symbols());
    const int m = l.order();
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int other = 0; other < m; ++other) {
        int sym = own_is_row ? l.at(own, other) : l.at(other, own);
        double d = std::norm(y - h * bc[static_cast<std::size_t>(sym)]);
        if (d < best_d) {
            best_d = d;
            best = other;
        }
    }
    return best;
}

std::pair<int, int> TwoWayRelaySimulator::run_trial_with_fades(double sigma2, cplx h_a,
                                                               cplx h_b, Rng& rng) const {
    const double sigma = std::sqrt(sigma2);
    const int m = cfg_.m;
    int s_a = rng.uniform_int(m);
    int s_b = rng.uniform_int(m);

    const LatinSquare& l = choose_square(h_b / h_a);

    cplx y_r = h_a * signal_.point(s_a) + h_b * signal_.point(s_b) + sigma * rng.complex_normal();
    auto [ka, kb] = relay_ml_decode(y_r, h_a, h_b);
    int sym = l.at(ka, kb);
    cplx x_r = bc_points(l.symbols())[static_cast<std::size_t>(sym)];

    cplx h_a2 = draw_fade(cfg_.channel, rng);
    cplx h_b2 = draw_fade(cfg_.channel, rng);
    cplx y_a = h_a2 * x_r + sigma * rng.complex_normal();
    cplx y_b = h_b2 * x_r + sigma * rng.complex_normal();

    int b_at_a = decode_partner(y_a, h_a2, l, s_a, true);
    int a_at_b = decode_partner(y_b, h_b2, l, s_b, false);
    return {std::popcount(static_cast<unsigned>(a_at_b ^ s_a)),
            std::popcount(static_cast<unsigned>(b_at_a ^ s_b))};
}

std::pair<int, int> TwoWayRelaySimulator::run_trial(double sigma2, Rng& rng) const {
    cplx h_a = draw_fade(cfg_.channel, rng);
    cplx h_b = draw_fade(cfg_.channel, rng);
    return run_trial_with_fades(sigma2, h_a, h_b, rng);
}

BerPoint TwoWayRelaySimulator::run_point(double snr_db) const {
    const double sigma2 = std::pow(10.0, -snr_db / 10.0);
    const int chunks = 256;  // fixed count keeps results thread-count independent
    const long per_chunk = cfg_.trials / chunks;
    const long remainder = cfg_.trials % chunks;
    std::vector<long> errs(chunks, 0);

    auto run_chunk = [&](int chunk) {
        long n = per_chunk + (chunk < remainder ? 1 : 0);
        Rng rng(splitmix(cfg_.seed ^ splitmix(std::bit_cast<std::uint64_t>(snr_db) +
                                              0x1234u * static_cast<unsigned>(chunk + 1))));
        long e = 0;
        for (long i = 0; i < n; ++i) {
            auto [ea, eb] = run_trial(sigma2, rng);
            e += ea + eb;
        }
        errs[static_cast<std::size_t>(chunk)] = e;
    };

    if (threads_ <= 1) {
        for (int chunk = 0; chunk < chunks; ++chunk) run_chunk(chunk);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        for (int t = 0; t < threads_; ++t) {
            pool.emplace_back([&] {
                for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }

    BerPoint p;
    p.snr_db = snr_db;
    p.trials = cfg_.trials;
    p.bits = 2 * cfg_.trials * signal_.bits_per_symbol();
    for (long e : errs) p.bit_errors += e;
    p.ber = (p.bits > 0) ? static_cast<double>(p.bit_errors) / static_cast<double>(p.bits) : 0.0;
    WilsonInterval w = wilson_interval(p.bit_errors, p.bits);
    p.wilson_low = w.low;
    p.wilson_high = w.high;
    p.wilson_halfwidth = w.halfwidth;
    return p;
}

std::vector<BerPoint> TwoWayRelaySimulator::sweep() const {
    std::vector<BerPoint> out;
    out.reserve(cfg_.snr_db.size());
    for (double snr : cfg_.snr_db) out.push_back(run_point(snr));
    return out;
}

}  // namespace plnc
