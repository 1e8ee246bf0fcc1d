#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "psig/errors.hpp"
#include "psig/validation.hpp"

using namespace psig;

namespace {

PersistenceDiagram diag(std::vector<DiagramPoint> pts) { return PersistenceDiagram(std::move(pts)); }

}  // namespace

TEST_CASE("level-sweep reference on hand examples") {
    CHECK(level_sweep_diagram(std::vector<double>{0, 2, 1, 3}) == diag({{0, 3}, {1, 2}}));
    CHECK(level_sweep_diagram(std::vector<double>{0, 1, 2, 3}) == diag({{0, 3}}));
    CHECK(level_sweep_diagram(std::vector<double>{5, 5, 5}).empty());
    CHECK(level_sweep_diagram(std::vector<double>{3, 0, 2, 1, 4, -1, 5}) ==
          diag({{-1, 5}, {0, 4}, {1, 2}}));
    CHECK_THROWS_AS((void)level_sweep_diagram(std::vector<double>{}), InputError);
}

TEST_CASE("check report bookkeeping") {
    CheckReport r{.check_id = "x"};
    CHECK(r.passed());
    r.record(1.0, 2.0);
    CHECK(r.worst_margin == 1.0);
    r.record(2.0 + 1e-12, 2.0, 1e-9);
    CHECK(r.passed());
    CHECK(r.worst_margin < 0.0);
    r.record(3.0, 2.0, 1e-9);
    CHECK_FALSE(r.passed());
    CHECK(r.violations == 1);
    CHECK(r.trials == 3);
    r.record(std::numeric_limits<double>::quiet_NaN(), 2.0);
    CHECK(r.violations == 2);

    const auto j = to_json(r);
    CHECK(j.at("check_id") == "x");
    CHECK(j.at("passed") == false);
    CHECK(j.at("trials") == 4);
    CHECK(to_json(CheckReport{.check_id = "y"}).at("worst_margin").is_null());
}

TEST_CASE("individual checks pass at reduced size") {
    CHECK(check_oracle_equivalence(7, 3).passed());
    CHECK(check_bottleneck_stability(100, RngSeed{1}).passed());
    CHECK(check_persistence_bounds(50, RngSeed{2}).passed());
    CHECK(check_invariance(100, RngSeed{3}).passed());
    CHECK(check_bias_bound(10, RngSeed{4}).passed());
    CHECK(check_functional_continuity(100, {0.2, 2.0}, SilhouetteKernel{}, RngSeed{5}).passed());
    CHECK(check_functional_continuity(50, {0.1, 3.0}, ImageKernel{}, RngSeed{6}).passed());
    CHECK_THROWS_AS((void)check_functional_continuity(10, {0.2, 1.0}, SilhouetteKernel{}, RngSeed{5}), InputError);
}

TEST_CASE("additivity decomposition") {
    const auto sine = check_additivity(Sine{1}, {1, 2, 5, 10}, 1.0, 64);
    CHECK(sine.passed());
    CHECK(sine.trials == 8);
    CHECK(sine.skipped == 0);
    // Phase-0 maximum: the remainder is empty for every R.
    const auto aligned = check_additivity(CustomTemplate{{3, 1, 2, 0, 1}}, {1, 3}, 2.0, 5);
    CHECK(aligned.passed());
    CHECK(check_additivity(PaperPhi{4.0}, {2, 3, 4}, 3.0, 128).passed());
}

TEST_CASE("sine R = 5 has four whole periods plus the remainder") {
    // Unit-speed sine from phase 0: cut at 1/4, copies are {(-1, 1)}, remainder
    // is D([0, 1/4]) + D([4.25, 5]) = {(0, 1)} + {(-1, 1)}.
    std::vector<double> x;
    for (int i = 0; i <= 5 * 64; ++i) x.push_back(std::sin(2 * 3.141592653589793 * i / 64.0));
    const auto d = sublevel_diagram(x);
    REQUIRE(d.size() == 6);
    int full = 0;
    for (const auto& p : d.points()) full += std::abs(p.birth + 1) < 1e-12 && std::abs(p.death - 1) < 1e-12;
    CHECK(full == 5);
}

TEST_CASE("consistency rate for the sine template") {
    const auto r = check_consistency_rate(Sine{1}, {3, 6, 11, 21}, {0.2, 1.0}, SilhouetteKernel{}, 64);
    CHECK(r.passed());
    CHECK(r.config.at("results").size() == 4);
    CHECK(r.config.at("results")[0].at("bound") == 8.0);
    CHECK_THROWS_AS((void)check_consistency_rate(Sine{1}, {1}, {0.2, 1.0}, SilhouetteKernel{}, 64), InputError);
}

TEST_CASE("suite registry") {
    const auto& suite = validation_suite();
    std::vector<std::string> names;
    for (const auto& e : suite) names.push_back(e.name);
    CHECK(names == std::vector<std::string>{"oracle", "bottleneck", "additivity", "consistency", "continuity",
                                            "persistence_bounds", "invariance", "stability", "bias"});

    const auto one = run_validation({"bottleneck"}, RngSeed{0});
    REQUIRE(one.size() == 1);
    CHECK(one[0].check_id == "bottleneck");
    CHECK(one[0].trials == 1000);
    CHECK(one[0].passed());
    CHECK_THROWS_AS((void)run_validation({"nonsense"}, RngSeed{0}), InputError);

    // Deterministic given the seed.
    const auto a = run_validation({"stability"}, RngSeed{9});
    const auto b = run_validation({"stability"}, RngSeed{9});
    CHECK(to_json(a[0]) == to_json(b[0]));
}

TEST_CASE("full suite passes") {
    for (const auto& r : run_validation({"all"}, RngSeed{0})) {
        INFO(r.check_id);
        CHECK(r.passed());
        CHECK(r.trials > 0);
    }
}
