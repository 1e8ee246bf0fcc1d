#include "psig/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace psig {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a; only needs to be stable, not strong.
std::uint64_t hash_tag(std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

RngSeed derive_seed(RngSeed seed, std::string_view tag) noexcept {
    return {splitmix64(splitmix64(seed.value) ^ hash_tag(tag))};
}

RngSeed derive_seed(RngSeed seed, std::uint64_t index) noexcept {
    return {splitmix64(splitmix64(seed.value ^ 0x5bd1e9955bd1e995ULL) + splitmix64(index))};
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
}

double Rng::normal() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace psig
