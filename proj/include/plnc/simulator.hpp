#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "plnc/bank.hpp"
#include "plnc/quantization.hpp"

namespace plnc {

// Deterministic RNG: engine-driven uniforms plus Box-Muller, so results
// do not depend on library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();                   // [0, 1)
    int uniform_int(int n);             // {0..n-1}
    cplx complex_normal();              // CN(0,1), E|h|^2 = 1

private:
    std::mt19937_64 eng_;
};

struct ChannelModel {
    enum class Kind { Rayleigh, Rician } kind = Kind::Rayleigh;
    double k_factor = 0.0;  // linear Rician K; 0 degenerates to Rayleigh

    static ChannelModel rayleigh() { return {}; }
    static ChannelModel rician_db(double k_db);
};

// Unit mean power in every case; Rician splits K/(K+1) into the
// line-of-sight component.
cplx draw_fade(const ChannelModel& model, Rng& rng);

enum class RelayScheme { AdaptiveLS, FixedXor };

struct SimConfig {
    ConstellationKind kind = ConstellationKind::QAM;
    int m = 16;
    RelayScheme scheme = RelayScheme::AdaptiveLS;
    ChannelModel channel;
    std::vector<double> snr_db;
    long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: PLNC_THREADS env var, then hardware concurrency
    int t_max = 0;    // bank completion cap; 0: 2M
};

struct BerPoint {
    double snr_db = 0;
    long trials = 0;
    long bit_errors = 0;
    long bits = 0;
    double ber = 0;
    double wilson_low = 0, wilson_high = 0, wilson_halfwidth = 0;
};

struct WilsonInterval {
    double low, high, halfwidth;
};
WilsonInterval wilson_interval(long errors, long n, double z = 1.959964);

// Two-phase protocol: both nodes transmit simultaneously, the relay
// ML-decodes the pair, maps it through the chosen Latin square, and
// broadcasts the cluster symbol; each node inverts its own row/column.
class TwoWayRelaySimulator {
public:
    explicit TwoWayRelaySimulator(const SimConfig& cfg);
    TwoWayRelaySimulator(const SimConfig& cfg, std::shared_ptr<const LatinSquareBank> bank);

    const SimConfig& config() const { return cfg_; }
    const LatinSquareBank* bank() const { return bank_.get(); }

    std::pair<int, int> relay_ml_decode(cplx y, cplx h_a, cplx h_b) const;

    // Returns bit errors (A's message at B, B's message at A) for one trial.
    std::pair<int, int> run_trial(double sigma2, Rng& rng) const;

    // Runs one trial with the fade pair fixed (noise still drawn).
    std::pair<int, int> run_trial_with_fades(double sigma2, cplx h_a, cplx h_b,
                                             Rng& rng) const;

    BerPoint run_point(double snr_db) const;
    std::vector<BerPoint> sweep() const;

private:
    const LatinSquare& choose_square(cplx fade) const;
    const std::vector<cplx>& bc_points(int t) const;
    int decode_partner(cplx y, cplx h, const LatinSquare& l, int own, bool own_is_row) const;

    SimConfig cfg_;
    Constellation signal_;  // unit energy
    std::shared_ptr<const LatinSquareBank> bank_;
    std::unique_ptr<RegionClassifier> classifier_;
    std::unique_ptr<LatinSquare> xor_;
    std::vector<std::vector<cplx>> bc_by_t_;
    int threads_;
};

// Broadcast-phase signal set for t symbols: the node constellation when
// t = M, otherwise a unit-energy rectangular or cross-trimmed grid with
// snake-order labels.
std::vector<cplx> bc_constellation(int t, const Constellation& node_set);

}  // namespace plnc
