#pragma once

// Randomized desk-scale checks of the inequalities, lemmas and rates the
// signature construction relies on. Every check is deterministic given its seed.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "psig/functionals.hpp"
#include "psig/persistence.hpp"
#include "psig/rng.hpp"
#include "psig/simulator.hpp"

namespace psig {

struct CheckReport {
    std::string check_id;
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;
    /// Smallest (bound - observed) seen; negative means a violation.
    double worst_margin = std::numeric_limits<double>::infinity();
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> notes;

    [[nodiscard]] bool passed() const noexcept { return violations == 0; }
    /// Records one comparison `observed <= bound + slack`.
    void record(double observed, double bound, double slack = 0.0);
};

[[nodiscard]] nlohmann::json to_json(const CheckReport& r);

/// Independent reference for the sublevel diagram: sweeps the distinct levels in
/// increasing order and tracks maximal runs of samples at or below each level.
[[nodiscard]] PersistenceDiagram level_sweep_diagram(std::span<const double> values);

/// Exhaustive comparison with the level-sweep reference over every series of length
/// 1..max_len with entries in {0, ..., alphabet - 1}.
[[nodiscard]] CheckReport check_oracle_equivalence(std::size_t max_len = 12, int alphabet = 3);

/// d_b(D(f), D(f + e)) <= |e|_inf over random series and perturbations.
[[nodiscard]] CheckReport check_bottleneck_stability(std::size_t trials, RngSeed seed);

/// Diagram of R periods cut at a global maximum equals R - 1 copies of the one-period
/// diagram plus a remainder with pers_p(remainder) <= 2 pers_p(one period).
[[nodiscard]] CheckReport check_additivity(const PeriodicTemplate& templ, const std::vector<std::size_t>& periods,
                                           double p = 1.0, std::size_t samples_per_period = 64);

/// |Fbar(R periods) - Fbar(one period)|_inf <= 4 (C + L_k A_phi) / (R - 1), noiseless,
/// unit-speed sampling; also checks the differences do not grow along `periods`.
[[nodiscard]] CheckReport check_consistency_rate(const PeriodicTemplate& templ, const std::vector<std::size_t>& periods,
                                                 const TruncationSpec& spec, const KernelSpec& kernel,
                                                 std::size_t samples_per_period = 64);

/// Continuity of the normalized functional in the bottleneck distance (p >= 2).
[[nodiscard]] CheckReport check_functional_continuity(std::size_t trials, const TruncationSpec& spec,
                                                      const KernelSpec& kernel, RngSeed seed);

/// Upper bound, Lipschitz bound and lower bound on truncated total persistence.
[[nodiscard]] CheckReport check_persistence_bounds(std::size_t trials, RngSeed seed);

/// Diagrams are unchanged by value-preserving re-griddings and shift with constants.
[[nodiscard]] CheckReport check_invariance(std::size_t trials, RngSeed seed);

/// Qualitative stability: with fixed endpoints, signature distance shrinks as the
/// reparametrization distance shrinks along a 3-step ladder.
[[nodiscard]] CheckReport check_reparam_stability(RngSeed seed);

/// Noiseless bias bound |Fbar(phi o g1) - Fbar(phi o g2)| <= L_k 4 A_phi / (min(R1, R2) - 2).
[[nodiscard]] CheckReport check_bias_bound(std::size_t trials, RngSeed seed);

struct SuiteEntry {
    std::string name;
    std::function<CheckReport(RngSeed)> run;
};

/// Registered checks in fixed order.
[[nodiscard]] const std::vector<SuiteEntry>& validation_suite();

/// Runs the named checks ("all" selects every check) in registration order.
/// Throws InputError on an unknown name.
[[nodiscard]] std::vector<CheckReport> run_validation(const std::vector<std::string>& names, RngSeed seed);

/// A random piecewise-linear series of the given length: a random walk mixed with a
/// few sinusoids, scaled to roughly unit amplitude.
[[nodiscard]] std::vector<double> random_series(Rng& rng, std::size_t length);

}  // namespace psig
