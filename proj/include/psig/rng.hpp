#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace psig {

struct RngSeed {
    std::uint64_t value = 0;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Independent sub-stream seed for a named component.
[[nodiscard]] RngSeed derive_seed(RngSeed seed, std::string_view tag) noexcept;
/// Independent sub-stream seed for the i-th task (e.g. bootstrap replicate i).
[[nodiscard]] RngSeed derive_seed(RngSeed seed, std::uint64_t index) noexcept;

/// Portable generator: mt19937_64 plus hand-written transforms, so streams are
/// bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1).
    double uniform_open() noexcept { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal (Box-Muller, one value cached).
    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace psig
