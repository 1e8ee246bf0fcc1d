#pragma once

// Synthetic observations S_n = phi(gamma_n) + W_n: 1-periodic templates,
// velocity-driven reparametrizations and squared-exponential Gaussian noise.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "psig/rng.hpp"
#include "psig/time_series.hpp"

namespace psig {

/// theta * (sin(6 pi x) + |frac(x) - 1/2| - 1/2) + 5 sin(4 pi x)
struct PaperPhi {
    double theta = 1.0;
};

/// sin(2 pi k x), k >= 1 full oscillations per unit period.
struct Sine {
    int frequency_periods = 1;
};

/// One period of samples at x = j / n, linearly interpolated with wrap-around.
struct CustomTemplate {
    std::vector<double> samples;
};

class PeriodicTemplate {
public:
    using Variant = std::variant<PaperPhi, Sine, CustomTemplate>;

    PeriodicTemplate(PaperPhi t);        // NOLINT(google-explicit-constructor)
    PeriodicTemplate(Sine t);            // NOLINT(google-explicit-constructor)
    PeriodicTemplate(CustomTemplate t);  // NOLINT(google-explicit-constructor)

    [[nodiscard]] const Variant& variant() const noexcept { return impl_; }

    /// phi(x) = phi(x - floor(x)).
    [[nodiscard]] double operator()(double x) const noexcept;

    /// Location in [0, 1) of the first global maximum (numerical search).
    [[nodiscard]] double argmax() const;
    /// max phi - min phi (numerical search).
    [[nodiscard]] double amplitude() const;

private:
    Variant impl_;
};

struct IidUniform {
    double v_min = 0.5;
    double v_max = 1.5;
};

/// V_0 ~ U[v_min, v_max]; V_{n+1} | V_n ~ N(V_n, eta^2) truncated to [v_min, v_max].
struct MarkovTruncGauss {
    double v_min = 0.5;
    double v_max = 1.5;
    double eta = 0.2;
};

struct UniformFrac {};
struct FixedStart {
    double x0 = 0.0;
};

/// gamma_{n+1} = gamma_n + h V_n.
struct ReparamModel {
    std::variant<IidUniform, MarkovTruncGauss> velocity = MarkovTruncGauss{};
    double h = 0.02;
    std::variant<UniformFrac, FixedStart> gamma0 = UniformFrac{};

    void validate() const;
    [[nodiscard]] double v_min() const noexcept;
    [[nodiscard]] double v_max() const noexcept;
};

/// Stationary Gaussian noise with covariance sigma^2 exp(-(s - t)^2 / (2 tau^2)).
struct NoiseModel {
    double sigma = 0.1;
    double tau = 0.1;

    void validate() const;
};

/// gamma_0 .. gamma_n (n + 1 values), strictly increasing.
[[nodiscard]] std::vector<double> sample_reparam(const ReparamModel& model, std::size_t n, RngSeed seed);

/// n samples of the noise at spacing dt: circulant embedding, with a Cholesky
/// fallback for n <= 4000 when the embedding is not positive semi-definite.
[[nodiscard]] std::vector<double> sample_gp_noise(const NoiseModel& model, std::size_t n, double dt, RngSeed seed);

/// Draws from N(mean, eta^2) truncated to [lo, hi] given u in (0, 1) (inverse CDF).
[[nodiscard]] double truncated_normal_quantile(double mean, double eta, double lo, double hi, double u);

struct SimulationConfig {
    PeriodicTemplate templ = PaperPhi{1.0};
    ReparamModel reparam{};
    NoiseModel noise{};
    double duration = 30.0;  // seconds
    double rate = 50.0;      // Hz
    RngSeed seed{0};

    [[nodiscard]] std::size_t num_samples() const;
};

/// round(duration * rate) samples with h = 1 / rate; reparam and noise use
/// independent sub-seeds of `seed`.
[[nodiscard]] TimeSeries simulate_signal(const SimulationConfig& config);

}  // namespace psig
