#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "plnc/bank.hpp"
#include "plnc/quantization.hpp"
#include "plnc/simulator.hpp"

using namespace plnc;

namespace {

struct ConstellationChoice {
    int qam = 0, pam = 0, psk = 0;

    void add_flags(CLI::App* cmd) {
        auto* a = cmd->add_option("--qam", qam, "square QAM size (4, 16, 64, ...)");
        auto* b = cmd->add_option("--pam", pam, "PAM point count");
        auto* c = cmd->add_option("--psk", psk, "PSK size (power of 2)");
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    Constellation make() const {
        if (qam > 0) return Constellation::qam(qam, Scaling::Lattice);
        if (pam > 0) return Constellation::pam(pam, Scaling::Lattice);
        if (psk > 0) return Constellation::psk(psk);
        throw std::invalid_argument("choose a constellation with --qam, --pam or --psk");
    }

    ConstellationKind kind() const {
        if (qam > 0) return ConstellationKind::QAM;
        if (pam > 0) return ConstellationKind::PAM;
        if (psk > 0) return ConstellationKind::PSK;
        throw std::invalid_argument("choose a constellation with --qam, --pam or --psk");
    }

    int size() const { return qam > 0 ? qam : (pam > 0 ? pam : psk); }
};

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

const char* ring_name(FadeState::Ring r) {
    switch (r) {
        case FadeState::Ring::UnitCircle: return "unit";
        case FadeState::Ring::Exterior: return "exterior";
        case FadeState::Ring::Interior: return "interior";
    }
    return "?";
}

std::uint64_t closed_form_count(ConstellationKind kind, int size) {
    switch (kind) {
        case ConstellationKind::PAM: return count_singular_pam(size);
        case ConstellationKind::QAM: return count_singular_qam(size);
        case ConstellationKind::PSK: return count_singular_psk(size);
    }
    return 0;
}

int run_sfs(const ConstellationChoice& choice, bool count_only, const std::string& out) {
    Constellation c = choice.make();
    SingularFadeSet h = enumerate_singular_fades(c);
    std::uint64_t formula = closed_form_count(choice.kind(), choice.size());
    if (count_only) {
        std::cout << "enumerated=" << h.size() << " formula=" << formula << "\n";
        return 0;
    }
    nlohmann::json root;
    root["kind"] = choice.qam ? "qam" : (choice.pam ? "pam" : "psk");
    root["size"] = choice.size();
    root["count_enumerated"] = h.size();
    root["count_formula"] = formula;
    nlohmann::json states = nlohmann::json::array();
    for (const auto& fs : h.states) {
        nlohmann::json e;
        if (fs.has_exact) e["z"] = fs.exact.str();
        e["re"] = fs.value.real();
        e["im"] = fs.value.imag();
        e["abs"] = std::abs(fs.value);
        e["arg"] = std::arg(fs.value);
        e["ring"] = ring_name(fs.ring);
        states.push_back(std::move(e));
    }
    root["states"] = std::move(states);
    std::ofstream file;
    open_sink(out, file) << root.dump(1) << "\n";
    return 0;
}

cplx parse_fade(const std::string& text) {
    try {
        return GaussianRational::parse(text).value();
    } catch (const std::exception&) {
    }
    std::istringstream in(text);
    double re = 0, im = 0;
    char sep = 0;
    if (in >> re) {
        if (in >> sep >> im && sep == ',') return {re, im};
        if (in.eof()) return {re, 0.0};
    }
    throw std::invalid_argument("cannot parse fade state: " + text +
                                " (use a+bi, a+bi/c+di or re,im)");
}

int run_latin_build(const ConstellationChoice& choice, int tmax, const std::string& out) {
    Constellation c = choice.make();
    CompletionOptions opts;
    opts.t_max = tmax;
    LatinSquareBank bank = build_bank(c, opts);
    std::ofstream file;
    open_sink(out, file) << bank_to_json(bank) << "\n";
    std::cerr << "bank: " << bank.size() << " entries, max symbols " << bank.max_symbols()
              << "\n";
    return 0;
}

int run_latin_verify(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    LatinSquareBank bank = bank_from_json(buf.str());  // ctor checks the exclusive law
    const Constellation& c = bank.constellation();
    int worst_t = 0;
    double worst_removal = 1e300;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        double d = min_cluster_distance(bank.square(static_cast<int>(i)), c,
                                        bank.fades().states[i].value);
        if (d <= 1e-9) {
            std::cerr << "entry " << i << " does not remove its fade state\n";
            return 1;
        }
        worst_removal = std::min(worst_removal, d);
        worst_t = std::max(worst_t, bank.square(static_cast<int>(i)).symbols());
    }
    std::cout << "ok: " << bank.size() << " entries verified, max symbols " << worst_t
              << ", min removal distance " << worst_removal << "\n";
    return 0;
}

int run_latin_show(const ConstellationChoice& choice, const std::string& ztext) {
    Constellation c = choice.make();
    cplx z = parse_fade(ztext);
    SingularFadeSet h = enumerate_singular_fades(c);
    int idx = h.index_near(z, 1e-6);
    if (idx < 0) throw std::invalid_argument(ztext + " is not a singular fade state");
    const FadeState& fs = h.states[static_cast<std::size_t>(idx)];
    LatinSquare l = complete_constrained(constraints_for(c, fs));
    std::cout << "z = " << (fs.has_exact ? fs.exact.str() : ztext) << "  t = " << l.symbols()
              << "  min cluster distance = " << min_cluster_distance(l, c, fs.value) << "\n";
    for (int r = 0; r < l.order(); ++r) {
        for (int col = 0; col < l.order(); ++col)
            std::cout << l.at(r, col) << (col + 1 == l.order() ? "" : " ");
        std::cout << "\n";
    }
    return 0;
}

struct GridSpec {
    int nx = 400, ny = 400;
    double x0 = -4, x1 = 4, y0 = -4, y1 = 4;
};

bool parse_grid(const std::string& text, GridSpec& g) {
    auto x = text.find('x');
    if (x == std::string::npos) return false;
    g.nx = std::stoi(text.substr(0, x));
    g.ny = std::stoi(text.substr(x + 1));
    return g.nx > 0 && g.ny > 0;
}

bool parse_range(const std::string& text, GridSpec& g) {
    auto dots = text.find("..", 1);  // allow a leading minus sign
    if (dots == std::string::npos) return false;
    g.x0 = g.y0 = std::stod(text.substr(0, dots));
    g.x1 = g.y1 = std::stod(text.substr(dots + 2));
    return g.x1 > g.x0;
}

void write_region_svg(std::ostream& svg, const RegionClassifier& rc,
                      const std::vector<int>& labels, const GridSpec& g) {
    const double w = 800, hgt = 800;
    auto sx = [&](double x) { return (x - g.x0) / (g.x1 - g.x0) * w; };
    auto sy = [&](double y) { return hgt - (y - g.y0) / (g.y1 - g.y0) * hgt; };
    const double unit = w / (g.x1 - g.x0);
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << hgt
        << "' viewBox='0 0 " << w << " " << hgt << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";

    // transition curves between region pairs that actually touch on the grid
    std::set<std::pair<int, int>> pairs;
    auto at = [&](int ix, int iy) {
        return labels[static_cast<std::size_t>(iy) * static_cast<std::size_t>(g.nx) +
                      static_cast<std::size_t>(ix)];
    };
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            int a = at(ix, iy);
            if (a < 0) continue;
            for (auto [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
                int jx = ix + dx, jy = iy + dy;
                if (jx >= g.nx || jy >= g.ny) continue;
                int b = at(jx, jy);
                if (b >= 0 && b != a) pairs.insert({std::min(a, b), std::max(a, b)});
            }
        }
    for (auto [i, k] : pairs) {
        TransitionCurve tc = rc.transition_curve(i, k);
        if (tc.shape == TransitionCurve::Shape::Circle) {
            svg << "<circle cx='" << sx(tc.center.real()) << "' cy='" << sy(tc.center.imag())
                << "' r='" << tc.radius * unit
                << "' fill='none' stroke='steelblue' stroke-width='0.6'/>\n";
        } else {
            auto pts = tc.sample(2, 2.0 * (g.x1 - g.x0));
            svg << "<line x1='" << sx(pts[0].real()) << "' y1='" << sy(pts[0].imag())
                << "' x2='" << sx(pts[1].real()) << "' y2='" << sy(pts[1].imag())
                << "' stroke='steelblue' stroke-width='0.6'/>\n";
        }
    }
    // clustering independent envelope, when defined
    if (rc.constellation().kind() == ConstellationKind::QAM) {
        for (cplx c : ci_ext_centers(rc.constellation().size())) {
            svg << "<circle cx='" << sx(c.real()) << "' cy='" << sy(c.imag()) << "' r='" << unit
                << "' fill='none' stroke='firebrick' stroke-width='0.8'/>\n";
            double denom = std::norm(c) - 1.0;
            if (denom > 0) {
                cplx ic = std::conj(c) / denom;
                svg << "<circle cx='" << sx(ic.real()) << "' cy='" << sy(ic.imag()) << "' r='"
                    << unit / denom << "' fill='none' stroke='firebrick' stroke-width='0.8'/>\n";
            }
        }
    }
    // the singular fade states themselves
    for (const auto& fs : rc.fades().states)
        svg << "<circle cx='" << sx(fs.value.real()) << "' cy='" << sy(fs.value.imag())
            << "' r='1.5' fill='black'/>\n";
    svg << "</svg>\n";
}

int run_regions(const ConstellationChoice& choice, const GridSpec& g, const std::string& out,
                const std::string& svg_path) {
    Constellation c = choice.make();
    RegionClassifier rc(c);
    std::vector<int> labels = rc.classify_grid(g.nx, g.ny, g.x0, g.x1, g.y0, g.y1);

    std::ofstream file;
    std::ostream& csv = open_sink(out, file);
    csv << "re,im,state,ci\n";
    for (int iy = 0; iy < g.ny; ++iy) {
        double y = g.y0 + (iy + 0.5) * (g.y1 - g.y0) / g.ny;
        for (int ix = 0; ix < g.nx; ++ix) {
            double x = g.x0 + (ix + 0.5) * (g.x1 - g.x0) / g.nx;
            int lab = labels[static_cast<std::size_t>(iy) * static_cast<std::size_t>(g.nx) +
                             static_cast<std::size_t>(ix)];
            const char* ci = "no";
            std::string state;
            if (lab < 0) {
                CiRegion r = in_ci_region(cplx{x, y}, c.size());
                ci = (r == CiRegion::Exterior) ? "ext" : "int";
            } else {
                const FadeState& fs = rc.fades().states[static_cast<std::size_t>(lab)];
                state = fs.has_exact ? fs.exact.str() : std::to_string(lab);
            }
            csv << x << "," << y << "," << state << "," << ci << "\n";
        }
    }
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) throw std::runtime_error("cannot write " + svg_path);
        write_region_svg(svg, rc, labels, g);
    }
    return 0;
}

std::vector<double> parse_snr(const std::string& text) {
    std::vector<double> out;
    auto c1 = text.find(':');
    if (c1 != std::string::npos) {
        auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument("--snr wants lo:step:hi");
        double lo = std::stod(text.substr(0, c1));
        double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        double hi = std::stod(text.substr(c2 + 1));
        if (step <= 0) throw std::invalid_argument("--snr step must be positive");
        for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("--snr list is empty");
    return out;
}

int run_simulate(const ConstellationChoice& choice, const std::string& scheme,
                 const std::string& channel, double k_db, const std::string& snr, long trials,
                 std::uint64_t seed, int threads, int tmax, const std::string& out) {
    SimConfig cfg;
    cfg.kind = choice.kind();
    cfg.m = choice.size();
    if (cfg.kind == ConstellationKind::PAM)
        throw std::invalid_argument("simulate supports --qam and --psk");
    cfg.scheme = (scheme == "xor") ? RelayScheme::FixedXor : RelayScheme::AdaptiveLS;
    cfg.channel =
        (channel == "rician") ? ChannelModel::rician_db(k_db) : ChannelModel::rayleigh();
    cfg.snr_db = parse_snr(snr);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.t_max = tmax;

    TwoWayRelaySimulator sim(cfg);
    std::vector<BerPoint> pts = sim.sweep();

    std::ofstream file;
    std::ostream& csv = open_sink(out, file);
    std::ostringstream kbuf;
    kbuf << k_db;
    const std::string cname =
        (cfg.kind == ConstellationKind::QAM ? "qam" : "psk") + std::to_string(cfg.m);
    const std::string chname =
        (channel == "rician") ? "rician" + kbuf.str() + "dB" : "rayleigh";
    csv << "scheme,constellation,channel,snr_db,trials,ber,ci_halfwidth\n";
    for (const auto& p : pts)
        csv << (cfg.scheme == RelayScheme::FixedXor ? "xor" : "ls") << "," << cname << ","
            << chname << "," << p.snr_db << "," << p.trials << "," << p.ber << ","
            << p.wilson_halfwidth << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive network-coding maps for two-way relaying"};
    app.require_subcommand(1);
    app.set_config("--config");

    auto* sfs = app.add_subcommand("sfs", "enumerate singular fade states");
    ConstellationChoice sfs_choice;
    sfs_choice.add_flags(sfs);
    bool count_only = false;
    std::string sfs_out;
    sfs->add_flag("--count-only", count_only, "print enumerated and closed-form counts");
    sfs->add_option("--out", sfs_out, "output JSON path (default stdout)");

    auto* latin = app.add_subcommand("latin", "network-coding map bank operations");
    latin->require_subcommand(1);
    auto* lb = latin->add_subcommand("build-bank", "build one verified square per fade state");
    ConstellationChoice lb_choice;
    lb_choice.add_flags(lb);
    int tmax = 0;
    std::string lb_out;
    lb->add_option("--tmax", tmax, "symbol-count cap (default 2M)");
    lb->add_option("--out", lb_out, "output JSON path (default stdout)");
    auto* lv = latin->add_subcommand("verify", "re-verify a stored bank");
    std::string lv_bank;
    lv->add_option("--bank", lv_bank, "bank JSON path")->required();
    auto* lshow = latin->add_subcommand("show", "print the square for one fade state");
    ConstellationChoice lshow_choice;
    lshow_choice.add_flags(lshow);
    std::string lshow_z;
    lshow->add_option("--z", lshow_z, "fade state, e.g. 2+1i or 2+1i/1+0i")->required();

    auto* regions = app.add_subcommand("regions", "fade-plane quantization maps");
    ConstellationChoice rg_choice;
    rg_choice.add_flags(regions);
    std::string grid_text = "400x400", range_text = "-4..4", rg_out, rg_svg;
    regions->add_option("--grid", grid_text, "resolution, e.g. 800x800");
    regions->add_option("--range", range_text, "plane window, e.g. -4..4");
    regions->add_option("--out", rg_out, "CSV path (default stdout)");
    regions->add_option("--svg", rg_svg, "also draw the boundary curves to this SVG");

    auto* simulate = app.add_subcommand("simulate", "end-to-end Monte-Carlo BER");
    ConstellationChoice sim_choice;
    sim_choice.add_flags(simulate);
    std::string scheme = "ls", channel = "rayleigh", snr = "8:4:40", sim_out;
    double k_db = 5.0;
    long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0, sim_tmax = 0;
    simulate->add_option("--scheme", scheme, "ls | xor")->check(CLI::IsMember({"ls", "xor"}));
    simulate->add_option("--channel", channel, "rayleigh | rician")
        ->check(CLI::IsMember({"rayleigh", "rician"}));
    simulate->add_option("--rician-k-db", k_db, "Rician K factor in dB (default 5)");
    simulate->add_option("--snr", snr, "lo:step:hi or comma list, in dB");
    simulate->add_option("--trials", trials, "trials per SNR point");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--threads", threads, "worker threads (default PLNC_THREADS or all)");
    simulate->add_option("--tmax", sim_tmax, "bank symbol-count cap");
    simulate->add_option("--out", sim_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sfs->parsed()) return run_sfs(sfs_choice, count_only, sfs_out);
        if (lb->parsed()) return run_latin_build(lb_choice, tmax, lb_out);
        if (lv->parsed()) return run_latin_verify(lv_bank);
        if (lshow->parsed()) return run_latin_show(lshow_choice, lshow_z);
        if (regions->parsed()) {
            GridSpec g;
            if (!parse_grid(grid_text, g)) throw std::invalid_argument("bad --grid");
            if (!parse_range(range_text, g)) throw std::invalid_argument("bad --range");
            return run_regions(rg_choice, g, rg_out, rg_svg);
        }
        if (simulate->parsed())
            return run_simulate(sim_choice, scheme, channel, k_db, snr, trials, seed, threads,
                                sim_tmax, sim_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
