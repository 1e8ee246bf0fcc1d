#include "psig/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "psig/errors.hpp"

namespace psig {

void CheckReport::record(double observed, double bound, double slack) {
    ++trials;
    const double margin = bound + slack - observed;
    worst_margin = std::min(worst_margin, bound - observed);
    if (!(margin >= 0.0)) ++violations;
}

nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j{{"check_id", r.check_id}, {"trials", r.trials},       {"violations", r.violations},
                     {"skipped", r.skipped},   {"passed", r.passed()},     {"config", r.config},
                     {"notes", r.notes}};
    j["worst_margin"] = std::isfinite(r.worst_margin) ? nlohmann::json(r.worst_margin) : nlohmann::json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// Reference diagram

PersistenceDiagram level_sweep_diagram(std::span<const double> values) {
    if (values.empty()) throw InputError("cannot compute the diagram of an empty series");
    struct Run {
        std::size_t first;
        std::size_t last;
        std::size_t component;
    };
    struct Comp {
        double birth;
        std::size_t min_index;
    };

    std::vector<double> levels(values.begin(), values.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<Comp> comps;
    std::vector<Run> runs;
    std::vector<DiagramPoint> points;
    for (const double v : levels) {
        std::vector<Run> next;
        std::size_t i = 0;
        while (i < values.size()) {
            if (values[i] > v) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < values.size() && values[j + 1] <= v) ++j;

            std::vector<std::size_t> inside;
            for (const auto& r : runs)
                if (r.first >= i && r.last <= j) inside.push_back(r.component);

            std::size_t owner;
            if (inside.empty()) {
                std::size_t argmin = i;
                for (std::size_t k = i; k <= j; ++k)
                    if (values[k] < values[argmin]) argmin = k;
                owner = comps.size();
                comps.push_back({v, argmin});
            } else {
                owner = inside.front();
                for (const std::size_t c : inside) {
                    const auto& a = comps[c];
                    const auto& b = comps[owner];
                    if (a.birth < b.birth || (a.birth == b.birth && a.min_index < b.min_index)) owner = c;
                }
                for (const std::size_t c : inside)
                    if (c != owner) points.push_back({comps[c].birth, v});
            }
            next.push_back({i, j, owner});
            i = j + 1;
        }
        runs = std::move(next);
    }
    // At the top level a single run covers the whole series.
    points.push_back({comps[runs.front().component].birth, levels.back()});
    std::erase_if(points, [](const DiagramPoint& p) { return p.death == p.birth; });
    return PersistenceDiagram(std::move(points));
}

// ---------------------------------------------------------------------------
// Helpers

std::vector<double> random_series(Rng& rng, std::size_t length) {
    std::vector<double> out(length);
    const double walk_scale = rng.uniform(0.0, 0.5);
    const double noise_scale = rng.uniform(0.0, 0.3);
    double amp[3];
    double freq[3];
    double phase[3];
    for (int k = 0; k < 3; ++k) {
        amp[k] = rng.uniform(0.0, 1.0);
        freq[k] = rng.uniform(0.2, 8.0);
        phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const double scale = rng.uniform(0.5, 5.0);
    double walk = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        walk += walk_scale * rng.normal();
        const double x = static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(length, 2) - 1);
        double s = walk + noise_scale * rng.normal();
        for (int k = 0; k < 3; ++k) s += amp[k] * std::sin(2.0 * std::numbers::pi * freq[k] * x + phase[k]);
        out[i] = scale * s;
    }
    return out;
}

namespace {

std::size_t random_length(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

// Bounded perturbation of one of three shapes: white, smooth, or sparse spikes.
std::vector<double> random_perturbation(Rng& rng, std::size_t length, double amplitude) {
    std::vector<double> e(length, 0.0);
    switch (rng.below(3)) {
        case 0:
            for (auto& x : e) x = rng.uniform(-amplitude, amplitude);
            break;
        case 1: {
            const double f = rng.uniform(0.5, 10.0);
            const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
            for (std::size_t i = 0; i < length; ++i)
                e[i] = amplitude * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) /
                                                static_cast<double>(length) + ph);
            break;
        }
        default:
            for (auto& x : e)
                if (rng.uniform() < 0.1) x = rng.uniform(-amplitude, amplitude);
            break;
    }
    return e;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

double pers_power(const PersistenceDiagram& d, double epsilon, double p) {
    return truncated_persistence_power(d, TruncationSpec{epsilon, p});
}

void absorb(CheckReport& into, const CheckReport& part) {
    into.trials += part.trials;
    into.violations += part.violations;
    into.skipped += part.skipped;
    into.worst_margin = std::min(into.worst_margin, part.worst_margin);
    into.notes.insert(into.notes.end(), part.notes.begin(), part.notes.end());
}

// One period of the template sampled from its first global maximum, plus the
// series of `periods` periods on [0, periods] whose grid contains that maximum.
struct TiledSamples {
    std::vector<double> series;
    std::size_t cut;  // index of the first global-maximum sample
};

TiledSamples tile_template(const PeriodicTemplate& templ, std::size_t periods, std::size_t per_period) {
    const double c = templ.argmax();
    std::vector<double> tile(per_period);
    for (std::size_t j = 0; j < per_period; ++j)
        tile[j] = templ(c + static_cast<double>(j) / static_cast<double>(per_period));
    const auto top = static_cast<std::size_t>(std::max_element(tile.begin(), tile.end()) - tile.begin());
    const std::size_t cut = static_cast<std::size_t>(std::llround(c * static_cast<double>(per_period))) % per_period;

    TiledSamples out{std::vector<double>(periods * per_period + 1), cut};
    for (std::size_t i = 0; i < out.series.size(); ++i)
        out.series[i] = tile[(i + per_period - cut + top) % per_period];
    return out;
}

std::span<const double> sub(const std::vector<double>& v, std::size_t first, std::size_t last_inclusive) {
    return std::span<const double>(v).subspan(first, last_inclusive - first + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Checks

CheckReport check_oracle_equivalence(std::size_t max_len, int alphabet) {
    CheckReport report{.check_id = "oracle"};
    report.config = {{"max_len", max_len}, {"alphabet", alphabet}};
    std::vector<double> values;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<int> digits(len, 0);
        values.assign(len, 0.0);
        while (true) {
            for (std::size_t i = 0; i < len; ++i) values[i] = digits[i];
            const bool same = sublevel_diagram(values) == level_sweep_diagram(values);
            report.record(same ? 0.0 : 1.0, 0.0);
            if (!same && report.notes.size() < 5) {
                std::string s;
                for (const int d : digits) s += std::to_string(d);
                report.notes.push_back("mismatch on " + s);
            }
            std::size_t k = 0;
            while (k < len && ++digits[k] == alphabet) digits[k++] = 0;
            if (k == len) break;
        }
    }
    return report;
}

CheckReport check_bottleneck_stability(std::size_t trials, RngSeed seed) {
    CheckReport report{.check_id = "bottleneck"};
    report.config = {{"trials", trials}, {"seed", seed.value}, {"max_len", 200}, {"slack", 1e-9}};
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = random_length(rng, 2, 200);
        const auto f = random_series(rng, n);
        const double amp = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 1.0);
        const auto g = add(f, random_perturbation(rng, n, amp));
        const double d = bottleneck_distance(sublevel_diagram(f), sublevel_diagram(g));
        report.record(d, sup_diff(f, g), 1e-9);
    }
    return report;
}

CheckReport check_additivity(const PeriodicTemplate& templ, const std::vector<std::size_t>& periods, double p,
                             std::size_t samples_per_period) {
    CheckReport report{.check_id = "additivity"};
    report.config = {{"periods", periods}, {"p", p}, {"samples_per_period", samples_per_period}};
    const TruncationSpec untruncated{0.0, p};
    for (const std::size_t R : periods) {
        if (R < 1) throw InputError("additivity needs R >= 1");
        const auto tiled = tile_template(templ, R, samples_per_period);
        const auto& x = tiled.series;
        const std::size_t n = samples_per_period;
        const std::size_t cut = tiled.cut;
        if (x[cut] != *std::max_element(x.begin(), x.end())) {
            ++report.skipped;
            report.notes.push_back("R=" + std::to_string(R) + ": maximum not on the sample grid, skipped");
            continue;
        }
        // Whole periods fitting after the cut.
        const std::size_t copies = (R * n - cut) / n;
        const auto whole = sublevel_diagram(x);
        const auto longer = tile_template(templ, R + 1, n);
        const auto one = sublevel_diagram(sub(longer.series, cut, cut + n));
        const auto remainder =
            diagram_union(sublevel_diagram(sub(x, 0, cut)), sublevel_diagram(sub(x, cut + copies * n, R * n)));

        const bool exact = approx_equal(whole, diagram_union(one.replicated(copies), remainder), 1e-12);
        report.record(exact ? 0.0 : 1.0, 0.0);
        if (!exact) report.notes.push_back("R=" + std::to_string(R) + ": decomposition mismatch");

        const double rem = truncated_persistence(remainder, untruncated);
        const double per = truncated_persistence(one, untruncated);
        report.record(rem, 2.0 * per, 1e-12);
    }
    return report;
}

CheckReport check_consistency_rate(const PeriodicTemplate& templ, const std::vector<std::size_t>& periods,
                                   const TruncationSpec& spec, const KernelSpec& kernel,
                                   std::size_t samples_per_period) {
    CheckReport report{.check_id = "consistency"};
    const double amplitude = templ.amplitude();
    report.config = {{"periods", periods},
                     {"epsilon", spec.epsilon},
                     {"p", spec.p},
                     {"point_lipschitz", kernel.point_lipschitz()},
                     {"diagonal_bound", kernel.diagonal_bound()},
                     {"amplitude", amplitude},
                     {"samples_per_period", samples_per_period}};
    const auto grid = EvaluationGrid::for_kernel(kernel);
    const std::size_t n = samples_per_period;

    // Unit-speed sampling from phase 0: the tile starting at x = 0.
    std::vector<double> tile(n);
    for (std::size_t j = 0; j < n; ++j) tile[j] = templ(static_cast<double>(j) / static_cast<double>(n));
    const auto top = static_cast<std::size_t>(std::max_element(tile.begin(), tile.end()) - tile.begin());
    std::vector<double> period(n + 1);
    for (std::size_t j = 0; j <= n; ++j) period[j] = tile[(top + j) % n];
    const auto limit = normalized_functional(sublevel_diagram(period), spec, kernel, grid);

    double previous = std::numeric_limits<double>::infinity();
    nlohmann::json diffs = nlohmann::json::array();
    for (const std::size_t R : periods) {
        if (R < 2) throw InputError("consistency rate needs R >= 2");
        std::vector<double> x(R * n + 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = tile[i % n];
        const auto curve = normalized_functional(sublevel_diagram(x), spec, kernel, grid);
        const double diff = curve.sup_distance(limit);
        const double bound =
            4.0 * (kernel.diagonal_bound() + kernel.point_lipschitz() * amplitude) / static_cast<double>(R - 1);
        report.record(diff, bound, 1e-9);
        // Envelope should not grow with R.
        report.record(diff, previous, 1e-9);
        previous = diff;
        diffs.push_back({{"R", R}, {"difference", diff}, {"bound", bound}});
    }
    report.config["results"] = diffs;
    return report;
}

CheckReport check_functional_continuity(std::size_t trials, const TruncationSpec& spec, const KernelSpec& kernel,
                                        RngSeed seed) {
    if (spec.p < 2.0) throw InputError("the continuity bound is only asserted for p >= 2");
    CheckReport report{.check_id = "continuity"};
    report.config = {{"trials", trials}, {"seed", seed.value}, {"epsilon", spec.epsilon}, {"p", spec.p},
                     {"kernel", kernel.is_silhouette() ? "silhouette" : "image"}, {"slack", 1e-9}};
    const auto grid = EvaluationGrid::for_kernel(kernel);
    const double lk = kernel.point_lipschitz();
    const double c = kernel.diagonal_bound();
    const TruncationSpec lower{spec.epsilon, spec.p - 1.0};
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = random_length(rng, 4, 120);
        const auto f = random_series(rng, n);
        std::vector<double> g;
        if (rng.uniform() < 0.75)
            g = add(f, random_perturbation(rng, n, rng.uniform(0.0, 1.0)));
        else
            g = random_series(rng, n);
        const auto d1 = sublevel_diagram(f);
        const auto d2 = sublevel_diagram(g);
        const double denom = truncated_persistence_power(d1, spec);
        if (!(denom > 0.0)) {
            ++report.skipped;
            continue;
        }
        const double u = std::max(d1.max_persistence(), d2.max_persistence());
        const double db = bottleneck_distance(d1, d2);
        const double lhs = normalized_functional(d1, spec, kernel, grid)
                               .sup_distance(normalized_functional(d2, spec, kernel, grid));
        const double ratio =
            (truncated_persistence_power(d1, lower) + truncated_persistence_power(d2, lower)) / denom;
        const double rhs = (lk + 2.0 * spec.p * (lk * u + c) * ratio) * db;
        report.record(lhs, rhs, 1e-9);
    }
    return report;
}

CheckReport check_persistence_bounds(std::size_t trials, RngSeed seed) {
    CheckReport report{.check_id = "persistence_bounds"};
    report.config = {{"trials_per_bound", trials}, {"seed", seed.value}, {"holder_exponent", 1.0}};
    Rng rng(seed);
    CheckReport upper{.check_id = "upper"};
    CheckReport lipschitz{.check_id = "lipschitz"};
    CheckReport lower{.check_id = "lower"};
    CheckReport tight{.check_id = "tightness"};
    for (std::size_t t = 0; t < trials; ++t) {
        // Upper bound for a Lipschitz PL function on [0, T].
        {
            const std::size_t n = random_length(rng, 2, 150);
            const double dt = rng.uniform(0.01, 1.0);
            const auto f = random_series(rng, n);
            const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
            const double amp = *hi - *lo;
            double lip = 0.0;
            for (std::size_t i = 1; i < n; ++i) lip = std::max(lip, std::abs(f[i] - f[i - 1]) / dt);
            const double horizon = static_cast<double>(n - 1) * dt;
            const double p = rng.uniform(2.2, 4.0);
            const double eps = rng.uniform(0.01, 0.99) * amp;
            if (!(amp > 0.0) || !(eps > 0.0)) {
                ++upper.skipped;
            } else {
                const double lhs = pers_power(sublevel_diagram(f), eps, p);
                const double rhs = std::pow(amp - eps, p) * (1.0 + p * horizon * (2.0 * lip / eps));
                upper.record(lhs, rhs, 1e-9 * (1.0 + rhs));
            }
        }
        // Lipschitz dependence on the function.
        {
            const std::size_t n = random_length(rng, 2, 150);
            const auto f = random_series(rng, n);
            const auto g = add(f, random_perturbation(rng, n, rng.uniform(0.0, 1.0)));
            const double p = rng.uniform(2.0, 4.0);
            const double eps = rng.uniform(0.0, 1.0);
            const auto df = sublevel_diagram(f);
            const auto dg = sublevel_diagram(g);
            const double lhs = std::abs(pers_power(df, eps, p) - pers_power(dg, eps, p));
            const double rhs = p * sup_diff(f, g) * (pers_power(df, eps, p - 1.0) + pers_power(dg, eps, p - 1.0));
            lipschitz.record(lhs, rhs, 1e-9 * (1.0 + rhs));
        }
        // Lower bound under an additive perturbation of amplitude A_W = max W - min W.
        {
            const std::size_t n = random_length(rng, 2, 150);
            const auto f = random_series(rng, n);
            const auto w = random_perturbation(rng, n, rng.uniform(0.0, 2.0));
            const auto [wlo, whi] = std::minmax_element(w.begin(), w.end());
            const double aw = *whi - *wlo;
            const double p = rng.uniform(1.0, 4.0);
            const double eps = rng.uniform(0.0, 1.0);
            const double perturbed = pers_power(sublevel_diagram(add(f, w)), eps, p);
            const double floor_value = pers_power(sublevel_diagram(f), eps + aw, p);
            lower.record(floor_value, perturbed, 1e-9 * (1.0 + perturbed));
        }
        // Equality case: f with max - min = 2 |f|_inf and W = -a f.
        {
            const std::size_t n = random_length(rng, 3, 100);
            const double height = rng.uniform(0.5, 5.0);
            const std::size_t valley = 1 + rng.below(n - 2);
            std::vector<double> f(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double s = i <= valley ? 1.0 - static_cast<double>(i) / static_cast<double>(valley)
                                             : static_cast<double>(i - valley) / static_cast<double>(n - 1 - valley);
                f[i] = height * (2.0 * s - 1.0);
            }
            const double a = rng.uniform(0.0, 0.9);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = -a * f[i];
            const double p = rng.uniform(1.0, 4.0);
            const double eps = rng.uniform(0.0, 0.5) * height;
            const double lhs = pers_power(sublevel_diagram(add(f, w)), eps, p);
            const double rhs = pers_power(sublevel_diagram(f), eps + 2.0 * a * height, p);
            tight.record(std::abs(lhs - rhs), 0.0, 1e-9);
        }
    }
    for (const auto* part : {&upper, &lipschitz, &lower, &tight}) {
        absorb(report, *part);
        report.config[part->check_id] = {{"trials", part->trials}, {"violations", part->violations},
                                         {"worst_margin", part->worst_margin}};
    }
    return report;
}

CheckReport check_invariance(std::size_t trials, RngSeed seed) {
    CheckReport report{.check_id = "invariance"};
    report.config = {{"trials", trials}, {"seed", seed.value}};
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t n = random_length(rng, 1, 100);
        const auto f = random_series(rng, n);

        // Re-grid: every segment gets a random number of extra nodes on the line between
        // its endpoints, i.e. the same PL function on a non-uniform time grid.
        std::vector<double> g;
        for (std::size_t i = 0; i < n; ++i) {
            g.push_back(f[i]);
            if (i + 1 == n) break;
            const std::size_t extra = rng.below(5);
            std::vector<double> cuts(extra);
            for (auto& s : cuts) s = rng.uniform_open();
            std::sort(cuts.begin(), cuts.end());
            const double a = f[i];
            const double b = f[i + 1];
            for (const double s : cuts) g.push_back(std::clamp(a + (b - a) * s, std::min(a, b), std::max(a, b)));
        }
        const auto base = sublevel_diagram(f);
        report.record(base == sublevel_diagram(g) ? 0.0 : 1.0, 0.0);

        const double shift = static_cast<double>(static_cast<int>(rng.below(17)) - 8);
        std::vector<double> h(f);
        for (auto& v : h) v += shift;
        report.record(approx_equal(sublevel_diagram(h), base.shifted(shift), 1e-12) ? 0.0 : 1.0, 0.0);
    }
    return report;
}

CheckReport check_reparam_stability(RngSeed seed) {
    CheckReport report{.check_id = "stability"};
    constexpr double horizon = 10.0;  // seconds
    constexpr double rate = 50.0;
    constexpr double periods = 10.0;
    constexpr double wiggle = 0.004;  // periods
    constexpr int wiggle_freq = 3;
    constexpr std::size_t draws = 40;
    const std::vector<double> ladder{1.0, 0.5, 0.25};
    const PeriodicTemplate templ = PaperPhi{1.0};
    const NoiseModel noise{0.3, 0.1};
    const TruncationSpec spec{0.2, 2.0};
    const KernelSpec kernel = SilhouetteKernel{};
    const auto grid = EvaluationGrid::for_kernel(kernel);
    report.config = {{"seed", seed.value}, {"ladder", ladder}, {"noise_sigma", noise.sigma},
                     {"noise_tau", noise.tau}, {"draws", draws}};

    const auto n = static_cast<std::size_t>(horizon * rate) + 1;
    const double dt = 1.0 / rate;
    std::vector<std::vector<double>> paths(draws);
    for (std::size_t k = 0; k < draws; ++k) paths[k] = sample_gp_noise(noise, n, dt, derive_seed(seed, k));

    auto signature = [&](double lambda) {
        std::vector<FunctionalCurve> curves;
        for (const auto& w : paths) {
            std::vector<double> s(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) * dt;
                const double gamma = periods * t / horizon +
                                     lambda * wiggle * std::sin(2.0 * std::numbers::pi * wiggle_freq * t / horizon);
                s[i] = templ(gamma) + w[i];
            }
            curves.push_back(normalized_functional(sublevel_diagram(s), spec, kernel, grid));
        }
        std::vector<double> acc(grid.size(), 0.0);
        for (const auto& c : curves)
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.values[i];
        for (auto& v : acc) v /= static_cast<double>(curves.size());
        return FunctionalCurve(grid, std::move(acc));
    };

    const auto reference = signature(0.0);
    nlohmann::json distances = nlohmann::json::array();
    double previous = std::numeric_limits<double>::infinity();
    for (const double lambda : ladder) {
        const double d = signature(lambda).sup_distance(reference);
        distances.push_back({{"lambda", lambda}, {"sup_distance", d}});
        report.record(d, previous);
        previous = d;
    }
    report.config["distances"] = distances;
    return report;
}

CheckReport check_bias_bound(std::size_t trials, RngSeed seed) {
    CheckReport report{.check_id = "bias"};
    report.config = {{"trials", trials}, {"seed", seed.value}};
    const KernelSpec kernel = SilhouetteKernel{};
    const auto grid = EvaluationGrid::for_kernel(kernel);
    const TruncationSpec spec{0.2, 1.0};
    const std::vector<PeriodicTemplate> templates{Sine{1}, PaperPhi{1.0}, PaperPhi{4.0}};
    std::vector<double> amplitudes;
    for (const auto& t : templates) amplitudes.push_back(t.amplitude());
    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t which = rng.below(templates.size());
        double periods[2];
        FunctionalCurve curves[2] = {FunctionalCurve::zeros(grid), FunctionalCurve::zeros(grid)};
        for (int k = 0; k < 2; ++k) {
            ReparamModel model;
            const double lo = rng.uniform(0.5, 1.0);
            const double hi = lo + rng.uniform(0.2, 1.0);
            if (rng.below(2) == 0)
                model.velocity = IidUniform{lo, hi};
            else
                model.velocity = MarkovTruncGauss{lo, hi, (hi - lo) / 5.0};
            model.h = 1.0 / 50.0;
            const std::size_t n = random_length(rng, 250, 1500);
            const auto gamma = sample_reparam(model, n, RngSeed{rng.below(1ULL << 62)});
            std::vector<double> s(gamma.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = templates[which](gamma[i]);
            periods[k] = gamma.back() - gamma.front();
            curves[k] = normalized_functional(sublevel_diagram(s), spec, kernel, grid);
        }
        const double r_min = std::min(periods[0], periods[1]);
        if (!(r_min > 2.0)) {
            ++report.skipped;
            continue;
        }
        const double bound = kernel.point_lipschitz() * 4.0 * amplitudes[which] / (r_min - 2.0);
        report.record(curves[0].sup_distance(curves[1]), bound, 1e-9);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Suite

const std::vector<SuiteEntry>& validation_suite() {
    static const std::vector<SuiteEntry> suite{
        {"oracle", [](RngSeed) { return check_oracle_equivalence(12, 3); }},
        {"bottleneck", [](RngSeed s) { return check_bottleneck_stability(1000, derive_seed(s, "bottleneck")); }},
        {"additivity",
         [](RngSeed) {
             CheckReport r{.check_id = "additivity"};
             const std::vector<std::size_t> periods{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
             const std::pair<const char*, PeriodicTemplate> templates[] = {{"sine", Sine{1}},
                                                                           {"paper_phi", PaperPhi{1.0}}};
             for (const auto& [label, t] : templates) {
                 auto part = check_additivity(t, periods, 1.0, 64);
                 r.config[label] = part.config;
                 absorb(r, part);
             }
             return r;
         }},
        {"consistency",
         [](RngSeed) {
             CheckReport r{.check_id = "consistency"};
             const std::vector<std::size_t> periods{3, 6, 11, 21};
             const std::pair<const char*, PeriodicTemplate> templates[] = {{"sine", Sine{1}},
                                                                           {"paper_phi", PaperPhi{1.0}}};
             for (const auto& [label, t] : templates) {
                 auto part = check_consistency_rate(t, periods, TruncationSpec{0.2, 1.0}, SilhouetteKernel{}, 64);
                 r.config[label] = part.config;
                 absorb(r, part);
             }
             return r;
         }},
        {"continuity",
         [](RngSeed s) {
             return check_functional_continuity(500, TruncationSpec{0.2, 2.0}, SilhouetteKernel{},
                                                derive_seed(s, "continuity"));
         }},
        {"persistence_bounds",
         [](RngSeed s) { return check_persistence_bounds(500, derive_seed(s, "persistence_bounds")); }},
        {"invariance", [](RngSeed s) { return check_invariance(1000, derive_seed(s, "invariance")); }},
        {"stability", [](RngSeed s) { return check_reparam_stability(derive_seed(s, "stability")); }},
        {"bias", [](RngSeed s) { return check_bias_bound(100, derive_seed(s, "bias")); }},
    };
    return suite;
}

std::vector<CheckReport> run_validation(const std::vector<std::string>& names, RngSeed seed) {
    const auto& suite = validation_suite();
    const bool all = std::find(names.begin(), names.end(), "all") != names.end();
    for (const auto& name : names) {
        if (name == "all") continue;
        const bool known = std::any_of(suite.begin(), suite.end(), [&](const SuiteEntry& e) { return e.name == name; });
        if (!known) throw InputError("unknown validation suite '" + name + "'");
    }
    std::vector<CheckReport> reports;
    for (const auto& entry : suite) {
        if (all || std::find(names.begin(), names.end(), entry.name) != names.end()) {
            reports.push_back(entry.run(seed));
            reports.back().check_id = entry.name;
        }
    }
    return reports;
}

}  // namespace psig
