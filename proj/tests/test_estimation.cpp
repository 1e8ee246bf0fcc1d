#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "psig/errors.hpp"
#include "psig/estimation.hpp"
#include "psig/io.hpp"
#include "psig/simulator.hpp"

using namespace psig;

namespace {

TimeSeries simulated(std::uint64_t seed, double duration = 30.0, double sigma = 0.1) {
    SimulationConfig cfg;
    cfg.duration = duration;
    cfg.noise.sigma = sigma;
    cfg.seed = RngSeed{seed};
    return simulate_signal(cfg);
}

FunctionalCurve curve_of(const EvaluationGrid& g, std::vector<double> v) { return FunctionalCurve(g, std::move(v)); }

}  // namespace

TEST_CASE("windows") {
    const TimeSeries s({1, 2, 3, 4, 5}, 0.5);
    const auto w = windows(s, {3, 1});
    REQUIRE(w.size() == 3);
    CHECK(w[1] == TimeSeries({2, 3, 4}, 0.5));
    CHECK(windows(s, {5, 1}).front() == s);
    CHECK(windows(TimeSeries(std::vector<double>(10, 0.0)), {3, 3}).size() == 3);
    CHECK(num_windows(10, {3, 3}) == 3);
    CHECK(num_windows(1500, {150, 1}) == 1351);
    CHECK_THROWS_AS((void)windows(s, {6, 1}), InputError);
    CHECK_THROWS_AS((void)windows(s, {1, 1}), InputError);
    CHECK_THROWS_AS((void)windows(s, {3, 0}), InputError);
}

TEST_CASE("empirical signature") {
    SignatureSpec spec;
    const auto s = simulated(1, 4.0);

    const WindowConfig whole{s.size(), 1};
    const auto f = empirical_signature(s, whole, spec);
    CHECK(f == normalized_functional(sublevel_diagram(s), spec.truncation, spec.kernel, spec.grid));

    const WindowConfig two{s.size() - 1, 1};
    const auto c = window_curves(s, two, spec);
    REQUIRE(c.size() == 2);
    const auto m = empirical_signature(s, two, spec);
    for (std::size_t i = 0; i < m.values.size(); ++i)
        CHECK(m.values[i] == doctest::Approx((c[0].values[i] + c[1].values[i]) / 2).epsilon(1e-15));

    // Exactly periodic noiseless series: windows a whole period apart are identical.
    std::vector<double> periodic;
    for (int i = 0; i < 400; ++i) periodic.push_back(std::sin(2 * 3.14159265358979 * (i % 40) / 40.0) * 3);
    const TimeSeries p(periodic);
    const WindowConfig spaced{120, 40};
    const auto e = empirical_signature(p, spaced, spec);
    CHECK(e.sup_distance(window_curves(p, spaced, spec)[3]) <= 1e-15);
}

TEST_CASE("moving block indices") {
    for (std::size_t r = 0; r < 20; ++r) {
        const auto idx = mbb_indices(50, 7, RngSeed{3}, r);
        REQUIRE(idx.size() == 50);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            CHECK(idx[i] < 50);
            if (i % 7 != 0) CHECK(idx[i] == idx[i - 1] + 1);
        }
        CHECK(idx == mbb_indices(50, 7, RngSeed{3}, r));
    }
    const auto full = mbb_indices(50, 50, RngSeed{3}, 4);
    for (std::size_t i = 0; i < 50; ++i) CHECK(full[i] == i);
    CHECK_THROWS_AS((void)mbb_indices(50, 51, RngSeed{3}, 0), InputError);
    CHECK_THROWS_AS((void)mbb_indices(50, 0, RngSeed{3}, 0), InputError);
}

TEST_CASE("L equal to the number of windows reproduces the mean") {
    SignatureSpec spec;
    const auto s = simulated(2, 6.0);
    const WindowConfig w{150, 1};
    const auto curves = window_curves(s, w, spec);
    BootstrapConfig b;
    b.block_len = curves.size();
    b.replicates = 5;
    const auto mean = mean_curve(curves);
    for (std::size_t r = 0; r < 5; ++r) CHECK(mbb_resample(curves, b, r) == mean);

    const auto est = bootstrap_bands(s, w, spec, b);
    CHECK(est.lower == est.mean);
    CHECK(est.upper == est.mean);
}

TEST_CASE("quantiles and bands") {
    CHECK(quantile({4, 1, 3, 2}, 0.5) == 2.5);
    CHECK(quantile({4, 1, 3, 2}, 0.0) == 1.0);
    CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
    CHECK(quantile({1, 2, 3, 4, 5}, 0.1) == doctest::Approx(1.4));
    CHECK_THROWS_AS((void)quantile({}, 0.5), InputError);

    const EvaluationGrid g({GridAxis{0, 1, 3}});
    const auto mean = curve_of(g, {1, 1, 1});
    std::vector<FunctionalCurve> same(10, mean);
    for (const auto kind : {BandKind::pointwise, BandKind::uniform}) {
        const auto e = bands_from_replicates(mean, same, 0.05, kind);
        CHECK(e.lower == mean);
        CHECK(e.upper == mean);
    }

    // Replicates i / 100 at every node.
    std::vector<FunctionalCurve> reps;
    for (int i = 0; i <= 100; ++i) {
        const double v = i / 100.0;
        reps.push_back(curve_of(g, {v, 2 * v, -v}));
    }
    const auto centre = curve_of(g, {0.5, 1.0, -0.5});
    const auto pw = bands_from_replicates(centre, reps, 0.1, BandKind::pointwise);
    CHECK(pw.lower.values[0] == doctest::Approx(0.05));
    CHECK(pw.upper.values[0] == doctest::Approx(0.95));
    CHECK(pw.lower.values[2] == doctest::Approx(-0.95));
    const auto un = bands_from_replicates(centre, reps, 0.1, BandKind::uniform);
    // sup over nodes of |F* - F| is 2 |v - 0.5|; its 0.9 quantile is 0.9.
    CHECK(un.upper.values[1] - 1.0 == doctest::Approx(0.9));
    CHECK(1.0 - un.lower.values[1] == doctest::Approx(0.9));
    CHECK(un.upper.values[0] - 0.5 == doctest::Approx(0.9));

    CHECK_THROWS_AS((void)bands_from_replicates(centre, {reps[0]}, 0.1, BandKind::pointwise), InputError);
    CHECK_THROWS_AS((void)bands_from_replicates(centre, reps, 1.0, BandKind::pointwise), InputError);
    CHECK(band_kind_from_string("uniform") == BandKind::uniform);
    CHECK_THROWS_AS((void)band_kind_from_string("wide"), InputError);
}

TEST_CASE("band nesting, median containment and determinism") {
    SignatureSpec spec;
    const auto s = simulated(3, 10.0);
    const WindowConfig w{150, 1};
    const auto curves = window_curves(s, w, spec);
    BootstrapConfig b;
    b.replicates = 100;
    b.block_len = 20;
    b.seed = RngSeed{8};
    const auto reps = bootstrap_replicates(curves, b);
    const auto mean = mean_curve(curves);
    const auto tight = bands_from_replicates(mean, reps, 0.2, BandKind::pointwise);
    const auto loose = bands_from_replicates(mean, reps, 0.01, BandKind::pointwise);
    for (std::size_t i = 0; i < mean.values.size(); ++i) {
        CHECK(loose.lower.values[i] <= tight.lower.values[i]);
        CHECK(loose.upper.values[i] >= tight.upper.values[i]);
        std::vector<double> col;
        for (const auto& r : reps) col.push_back(r.values[i]);
        const double med = quantile(col, 0.5);
        CHECK(tight.lower.values[i] <= med);
        CHECK(med <= tight.upper.values[i]);
    }

    // Same bands whatever the worker count.
    ::setenv("SIG_THREADS", "1", 1);
    const auto serial = bootstrap_bands(s, w, spec, b);
    ::setenv("SIG_THREADS", "0", 1);
    const auto parallel = bootstrap_bands(s, w, spec, b);
    ::unsetenv("SIG_THREADS");
    CHECK(serial.mean == parallel.mean);
    CHECK(serial.lower == parallel.lower);
    CHECK(serial.upper == parallel.upper);

    b.replicates = 1;
    CHECK_THROWS_AS((void)bootstrap_bands(s, w, spec, b), InputError);
}

TEST_CASE("L = 1 resampling is uniform over windows") {
    constexpr std::size_t n = 40;
    constexpr std::size_t reps = 10000;
    std::vector<double> counts(n, 0.0);
    for (std::size_t r = 0; r < reps; ++r)
        for (const auto i : mbb_indices(n, 1, RngSeed{5}, r)) counts[i] += 1.0;
    const double total = static_cast<double>(n * reps);
    const double p = 1.0 / n;
    const double se = std::sqrt(p * (1 - p) / total);
    for (const double c : counts) CHECK(std::abs(c / total - p) < 4 * se);
}

TEST_CASE("default block length") {
    CHECK(default_block_len(1) == 1);
    CHECK(default_block_len(100000) == 100);
    CHECK(default_block_len(1351) == 17);
    std::size_t prev = 0;
    for (std::size_t n = 1; n < 20000; ++n) {
        const auto l = default_block_len(n);
        CHECK(l >= prev);
        CHECK(std::pow(static_cast<double>(l), 5.0) <= static_cast<double>(n) * n + 0.5);
        CHECK(std::pow(static_cast<double>(l + 1), 5.0) > static_cast<double>(n) * n);
        prev = l;
    }
}

TEST_CASE("estimate JSON and CSV") {
    SignatureSpec spec;
    const auto s = simulated(4, 5.0);
    BootstrapConfig b;
    b.replicates = 20;
    b.block_len = 10;
    const auto e = bootstrap_bands(s, {150, 1}, spec, b);
    const auto back = estimate_from_json(Json::parse(to_json(e).dump()));
    CHECK(back.mean == e.mean);
    CHECK(back.lower == e.lower);
    CHECK(back.upper == e.upper);
    CHECK(back.alpha == e.alpha);
    CHECK(back.replicates == 20);
    CHECK(back.band_kind == BandKind::pointwise);
    std::ostringstream csv;
    write_estimate_csv(csv, e);
    CHECK(csv.str().rfind("t,mean,lower,upper\n", 0) == 0);
}

TEST_CASE("uniform bands cover a long-run reference") {
    // Model 1 velocities, short windows: dependence between window curves dies out
    // within a few hundred samples, which a desk-scale series can resolve.
    SignatureSpec spec;
    const WindowConfig w{50, 1};
    auto config = [](std::uint64_t seed, double duration) {
        SimulationConfig cfg;
        cfg.reparam.velocity = IidUniform{0.5, 1.5};
        cfg.noise.sigma = 0.1;
        cfg.duration = duration;
        cfg.seed = RngSeed{seed};
        return cfg;
    };

    std::vector<FunctionalCurve> long_runs;
    for (std::uint64_t k = 0; k < 50; ++k)
        long_runs.push_back(empirical_signature(simulate_signal(config(100000 + k, 300.0)), w, spec));
    const auto reference = mean_curve(long_runs);

    int covered = 0;
    constexpr int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const auto s = simulate_signal(config(static_cast<std::uint64_t>(t), 60.0));
        BootstrapConfig b;
        b.replicates = 200;
        b.alpha = 0.1;
        b.band = BandKind::uniform;
        b.block_len = 100;
        b.seed = RngSeed{static_cast<std::uint64_t>(t)};
        const auto e = bootstrap_bands(s, w, spec, b);
        bool inside = true;
        for (std::size_t i = 0; i < reference.values.size(); ++i)
            inside = inside && reference.values[i] >= e.lower.values[i] && reference.values[i] <= e.upper.values[i];
        covered += inside ? 1 : 0;
    }
    MESSAGE("uniform 90% bands covered the reference in " << covered << " of " << trials << " trials");
    CHECK(covered >= 80);
}

TEST_CASE("noiseless halves agree within the band for their difference") {
    // The two half-means carry independent errors of the same law, so their gap is
    // compared with sqrt(2) times one half's uniform half-width.
    SignatureSpec spec;
    const WindowConfig w{150, 1};
    int within_one = 0;
    int within_diff = 0;
    constexpr int seeds = 40;
    for (int k = 0; k < seeds; ++k) {
        SimulationConfig cfg;
        cfg.noise.sigma = 0.0;
        cfg.duration = 120.0;
        cfg.seed = RngSeed{static_cast<std::uint64_t>(1000 + k)};
        const auto s = simulate_signal(cfg);
        const std::size_t half = s.size() / 2;
        const auto first = s.slice(0, half);
        const auto second = s.slice(half, half);
        BootstrapConfig b;
        b.replicates = 200;
        b.alpha = 0.1;
        b.band = BandKind::uniform;
        b.block_len = 100;
        b.seed = RngSeed{static_cast<std::uint64_t>(k)};
        const auto e = bootstrap_bands(first, w, spec, b);
        double half_width = 0.0;
        for (std::size_t i = 0; i < e.mean.values.size(); ++i)
            half_width = std::max(half_width, e.upper.values[i] - e.mean.values[i]);
        const double gap = e.mean.sup_distance(empirical_signature(second, w, spec));
        within_one += gap < half_width ? 1 : 0;
        within_diff += gap < std::sqrt(2.0) * half_width ? 1 : 0;
    }
    MESSAGE("gap below one half-width: " << within_one << " of " << seeds << "; below sqrt(2) half-width: "
                                         << within_diff << " of " << seeds);
    CHECK(within_diff >= 32);
}
