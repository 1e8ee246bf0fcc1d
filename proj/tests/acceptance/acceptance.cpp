// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "psig/cli.hpp"
#include "psig/estimation.hpp"
#include "psig/parallel.hpp"
#include "psig/simulator.hpp"
#include "psig/validation.hpp"

using namespace psig;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string summary(const CheckReport& r) {
    return std::to_string(r.trials) + " trials, " + std::to_string(r.violations) + " violations, worst margin " +
           fmt("%.3g", r.worst_margin);
}

Outcome from_report(const CheckReport& r) { return {r.passed() && r.trials > 0, summary(r)}; }

// ---------------------------------------------------------------------------

Outcome oracle() { return from_report(check_oracle_equivalence(12, 3)); }

Outcome bottleneck() { return from_report(check_bottleneck_stability(1000, RngSeed{101})); }

Outcome additivity() {
    const std::vector<std::size_t> periods{2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto sine = check_additivity(Sine{1}, periods, 1.0, 64);
    const auto phi = check_additivity(PaperPhi{1.0}, periods, 1.0, 128);
    const bool ok = sine.passed() && phi.passed() && sine.skipped == 0 && phi.skipped == 0 && sine.trials > 0 &&
                    phi.trials > 0;
    return {ok, "sine: " + summary(sine) + "; paper template: " + summary(phi)};
}

Outcome consistency() {
    const auto r = check_consistency_rate(Sine{1}, {3, 6, 11, 21}, {0.2, 1.0}, SilhouetteKernel{}, 64);
    std::string detail = summary(r);
    for (const auto& e : r.config.at("results"))
        detail += "; R=" + e.at("R").dump() + " diff " + fmt("%.4g", e.at("difference").get<double>()) + " <= " +
                  fmt("%.4g", e.at("bound").get<double>());
    return {r.passed() && r.trials > 0, detail};
}

Outcome continuity() { return from_report(check_functional_continuity(500, {0.2, 2.0}, SilhouetteKernel{}, RngSeed{105})); }

Outcome persistence_bounds() { return from_report(check_persistence_bounds(500, RngSeed{106})); }

// ---------------------------------------------------------------------------

struct Signature {
    FunctionalCurve mean;
    SignatureEstimate pointwise;
    SignatureEstimate uniform;
};

Signature experiment_signature(double theta, double sigma, RngSeed seed) {
    SimulationConfig sim;
    sim.templ = PaperPhi{theta};
    sim.noise.sigma = sigma;
    sim.duration = 30.0;
    sim.rate = 50.0;
    sim.seed = seed;
    const auto series = simulate_signal(sim);

    const WindowConfig wcfg{150, 1};
    const SignatureSpec spec{};
    const auto curves = window_curves(series, wcfg, spec);
    const auto mean = mean_curve(curves);
    BootstrapConfig bcfg;
    bcfg.replicates = 200;
    bcfg.block_len = 100;
    bcfg.alpha = 0.01;
    bcfg.seed = derive_seed(seed, "bootstrap");
    const auto reps = bootstrap_replicates(curves, bcfg);
    return {mean, bands_from_replicates(mean, reps, bcfg.alpha, BandKind::pointwise),
            bands_from_replicates(mean, reps, bcfg.alpha, BandKind::uniform)};
}

double inside_fraction(const FunctionalCurve& x, const SignatureEstimate& band) {
    std::size_t inside = 0;
    for (std::size_t i = 0; i < x.values.size(); ++i)
        inside += band.lower.values[i] <= x.values[i] && x.values[i] <= band.upper.values[i];
    return static_cast<double>(inside) / static_cast<double>(x.values.size());
}

double mutual_fraction(const Signature& a, const Signature& b) {
    std::size_t both = 0;
    const auto& pa = a.pointwise;
    const auto& pb = b.pointwise;
    for (std::size_t i = 0; i < a.mean.values.size(); ++i) {
        const double x = a.mean.values[i];
        const double y = b.mean.values[i];
        both += pb.lower.values[i] <= x && x <= pb.upper.values[i] && pa.lower.values[i] <= y && y <= pa.upper.values[i];
    }
    return static_cast<double>(both) / static_cast<double>(a.mean.values.size());
}

double half_width(const SignatureEstimate& e) {
    double w = 0.0;
    for (std::size_t i = 0; i < e.mean.values.size(); ++i)
        w = std::max({w, e.upper.values[i] - e.mean.values[i], e.mean.values[i] - e.lower.values[i]});
    return w;
}

Outcome reproduction() {
    const auto a = experiment_signature(1.0, 0.1, RngSeed{701});
    const auto b = experiment_signature(1.0, 0.1, RngSeed{702});
    const double mutual = mutual_fraction(a, b);
    const bool ok_a = mutual >= 0.90;

    const auto four = experiment_signature(4.0, 0.1, RngSeed{703});
    const double gap = a.mean.sup_distance(four.mean);
    const double widths = half_width(a.uniform) + half_width(four.uniform);
    const bool ok_b = gap > widths;

    const auto a2 = experiment_signature(1.0, 2.0, RngSeed{704});
    const auto four2 = experiment_signature(4.0, 2.0, RngSeed{705});
    const double gap2 = a2.mean.sup_distance(four2.mean);
    const double widths2 = half_width(a2.uniform) + half_width(four2.uniform);

    std::string detail = "(a) mutual containment " + fmt("%.3f", mutual) + " (one-sided " +
                         fmt("%.3f", inside_fraction(a.mean, b.pointwise)) + ", " +
                         fmt("%.3f", inside_fraction(b.mean, a.pointwise)) + "); (b) sup gap " + fmt("%.4g", gap) +
                         " vs half-widths " + fmt("%.4g", widths) + "; (c) sigma=2 gap " + fmt("%.4g", gap2) +
                         " vs " + fmt("%.4g", widths2) + (gap2 > widths2 ? " separated" : " not separated") +
                         " [recorded]";
    return {ok_a && ok_b, detail};
}

// ---------------------------------------------------------------------------

Outcome bootstrap_sanity() {
    SimulationConfig sim;
    sim.seed = RngSeed{801};
    const auto series = simulate_signal(sim);
    const SignatureSpec spec{};
    const auto curves = window_curves(series, {150, 1}, spec);
    const auto mean = mean_curve(curves);
    const std::size_t n = curves.size();
    const std::size_t reps = 10000;

    BootstrapConfig cfg;
    cfg.replicates = reps;
    cfg.block_len = 1;
    cfg.seed = RngSeed{802};

    std::vector<double> freq(n, 0.0);
    for (std::size_t r = 0; r < reps; ++r)
        for (const std::size_t i : mbb_indices(n, 1, cfg.seed, r)) freq[i] += 1.0;
    const double draws = static_cast<double>(reps * n);
    const double q = 1.0 / static_cast<double>(n);
    const double expected = draws * q;
    const double se = std::sqrt(draws * q * (1.0 - q));
    double worst_freq = 0.0;
    for (const double f : freq) worst_freq = std::max(worst_freq, std::abs(f - expected) / se);

    const auto replicates = bootstrap_replicates(curves, cfg);
    const std::size_t nodes = mean.values.size();
    std::vector<double> worst_node(nodes, 0.0);
    parallel_for(nodes, [&](std::size_t k) {
        double s = 0.0;
        for (const auto& c : replicates) s += c.values[k];
        const double m = s / static_cast<double>(reps);
        double ss = 0.0;
        for (const auto& c : replicates) ss += (c.values[k] - m) * (c.values[k] - m);
        const double mc_se = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
        const double dev = std::abs(m - mean.values[k]);
        if (dev <= 1e-12) return;
        worst_node[k] = mc_se > 0.0 ? dev / mc_se : INFINITY;
    });
    const double worst_mean = *std::max_element(worst_node.begin(), worst_node.end());

    const bool ok = worst_freq <= 4.0 && worst_mean <= 3.0;
    return {ok, std::to_string(n) + " windows; max |freq - expected| " + fmt("%.3f", worst_freq) +
                    " SE (limit 4); max |replicate mean - F-hat| " + fmt("%.3f", worst_mean) + " MC SE (limit 3)"};
}

// ---------------------------------------------------------------------------

double ks_uniform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const double m = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lo = static_cast<double>(i) / m;
        const double hi = static_cast<double>(i + 1) / m;
        d = std::max({d, x[i] - lo, hi - x[i]});
    }
    return d;
}

Outcome stationarity() {
    constexpr std::size_t batches = 100;
    constexpr std::size_t paths = 256;
    const std::size_t steps[] = {1, 7, 50};
    const double m = static_cast<double>(paths);
    const double critical = 1.628 / (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m));

    std::string detail;
    bool ok = true;
    for (int model = 1; model <= 2; ++model) {
        ReparamModel reparam;
        if (model == 1) reparam.velocity = IidUniform{};
        reparam.gamma0 = UniformFrac{};
        std::vector<int> pass(batches, 0);
        parallel_for(batches, [&](std::size_t b) {
            const std::size_t n = steps[b % 3];
            std::vector<double> sample(paths);
            for (std::size_t j = 0; j < paths; ++j) {
                const auto seed = derive_seed(derive_seed(RngSeed{900 + static_cast<std::uint64_t>(model)}, b), j);
                const double g = sample_reparam(reparam, n, seed)[n];
                sample[j] = g - std::floor(g);
            }
            pass[b] = ks_uniform(sample) < critical;
        });
        const int passed = std::accumulate(pass.begin(), pass.end(), 0);
        ok = ok && passed >= 95;
        detail += (model == 1 ? "" : "; ") + std::string("model ") + std::to_string(model) + ": " +
                  std::to_string(passed) + "/100 batches below " + fmt("%.4f", critical);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool pipeline(const fs::path& dir, std::string& error) {
    const auto at = [&](const char* name) { return (dir / name).string(); };
    const std::vector<std::vector<std::string>> steps{
        {"simulate", "--seed", "1001", "--out", at("series.csv"), "--meta", at("series.json")},
        {"diagram", "--in", at("series.csv"), "--out", at("diagram.json")},
        {"signature", "--in", at("series.csv"), "--out", at("signature.json")},
        {"signature", "--in", at("series.csv"), "--kernel", "image", "--p", "2", "--out", at("image.json")},
        {"bootstrap", "--in", at("series.csv"), "--seed", "1002", "--out", at("bands.json")},
        {"bootstrap", "--in", at("series.csv"), "--seed", "1002", "--band", "uniform", "--out", at("uniform.json")},
        {"validate", "--seed", "1003", "--out", at("validation.json")},
        {"plot", "--in", at("bands.json"), "--out", at("bands.svg")},
    };
    for (const auto& args : steps) {
        std::ostringstream out;
        std::ostringstream err;
        if (cli::run(args, out, err) != 0) {
            error = args[0] + ": " + err.str();
            return false;
        }
    }
    return true;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / ("psig_acceptance_" + std::to_string(::getpid()));
    const fs::path a = root / "a";
    const fs::path b = root / "b";
    fs::create_directories(a);
    fs::create_directories(b);
    std::string error;
    Outcome result{true, ""};
    if (!pipeline(a, error) || !pipeline(b, error)) {
        result = {false, "pipeline failed: " + error};
    } else {
        std::size_t compared = 0;
        std::vector<std::string> differing;
        for (const auto& entry : fs::directory_iterator(a)) {
            const auto name = entry.path().filename();
            if (entry.path().extension() != ".json") continue;
            ++compared;
            if (slurp(entry.path()) != slurp(b / name)) differing.push_back(name.string());
        }
        result.ok = differing.empty() && compared == 7;
        result.detail = std::to_string(compared) + " JSON artifacts compared, " + std::to_string(differing.size()) +
                        " differ";
        for (const auto& d : differing) result.detail += " " + d;
    }
    fs::remove_all(root);
    return result;
}

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "oracle equivalence", 120, oracle},
        {2, "bottleneck stability", 60, bottleneck},
        {3, "additivity", 10, additivity},
        {4, "consistency rate", 10, consistency},
        {5, "functional continuity", 30, continuity},
        {6, "persistence bounds", 30, persistence_bounds},
        {7, "experiment reproduction", 300, reproduction},
        {8, "bootstrap sanity", 120, bootstrap_sanity},
        {9, "stationarity of frac(gamma)", 120, stationarity},
        {10, "determinism", 300, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_seconds;
        const bool ok = o.ok && in_time;
        failures += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << " ("
                  << fmt("%.1f", secs) << " s" << (in_time ? "" : ", over the " + fmt("%.0f", c.limit_seconds) + " s limit")
                  << ")" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
