#include "psig/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <boost/math/special_functions/erf.hpp>
#include <fftw3.h>

#include "psig/errors.hpp"

namespace psig {

// ---------------------------------------------------------------------------
// Templates

PeriodicTemplate::PeriodicTemplate(PaperPhi t) : impl_(t) {
    if (!std::isfinite(t.theta)) throw InputError("template theta must be finite");
}

PeriodicTemplate::PeriodicTemplate(Sine t) : impl_(t) {
    if (t.frequency_periods < 1) throw InputError("sine template needs frequency_periods >= 1");
}

PeriodicTemplate::PeriodicTemplate(CustomTemplate t) : impl_(std::move(t)) {
    const auto& s = std::get<CustomTemplate>(impl_).samples;
    if (s.size() < 2) throw InputError("custom template needs at least 2 samples per period");
    for (const double v : s)
        if (!std::isfinite(v)) throw InputError("custom template samples must be finite");
}

namespace {

double frac(double x) noexcept { return x - std::floor(x); }

struct TemplateEval {
    double x;
    double operator()(const PaperPhi& t) const noexcept {
        const double f = frac(x);
        return t.theta * (std::sin(6.0 * std::numbers::pi * f) + std::abs(f - 0.5) - 0.5) +
               5.0 * std::sin(4.0 * std::numbers::pi * f);
    }
    double operator()(const Sine& t) const noexcept {
        return std::sin(2.0 * std::numbers::pi * static_cast<double>(t.frequency_periods) * frac(x));
    }
    double operator()(const CustomTemplate& t) const noexcept {
        const std::size_t n = t.samples.size();
        const double pos = frac(x) * static_cast<double>(n);
        const auto j = std::min(static_cast<std::size_t>(pos), n - 1);
        const double s = pos - static_cast<double>(j);
        return t.samples[j] + (t.samples[(j + 1) % n] - t.samples[j]) * s;
    }
};

// Golden-section refinement of a local extremum of f bracketed by [a, b].
template <class F>
double golden_refine(F&& f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

// Location of the global maximum of the 1-periodic function f over [0, 1).
template <class F>
double locate_max(F&& f) {
    constexpr std::size_t coarse = 1 << 16;
    std::size_t best = 0;
    double best_val = f(0.0);
    for (std::size_t j = 1; j < coarse; ++j) {
        const double v = f(static_cast<double>(j) / coarse);
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    const double step = 1.0 / coarse;
    const double centre = static_cast<double>(best) * step;
    const double refined = golden_refine(f, centre - step, centre + step);
    const double x = f(refined) >= best_val ? refined : centre;
    return frac(x);
}

}  // namespace

double PeriodicTemplate::operator()(double x) const noexcept { return std::visit(TemplateEval{x}, impl_); }

double PeriodicTemplate::argmax() const {
    if (const auto* s = std::get_if<Sine>(&impl_)) return 0.25 / static_cast<double>(s->frequency_periods);
    if (const auto* c = std::get_if<CustomTemplate>(&impl_)) {
        const auto it = std::max_element(c->samples.begin(), c->samples.end());
        return static_cast<double>(it - c->samples.begin()) / static_cast<double>(c->samples.size());
    }
    return locate_max([this](double x) { return (*this)(x); });
}

double PeriodicTemplate::amplitude() const {
    if (std::holds_alternative<Sine>(impl_)) return 2.0;
    if (const auto* c = std::get_if<CustomTemplate>(&impl_)) {
        const auto [lo, hi] = std::minmax_element(c->samples.begin(), c->samples.end());
        return *hi - *lo;
    }
    const double top = (*this)(argmax());
    const double bottom = (*this)(locate_max([this](double x) { return -(*this)(x); }));
    return top - bottom;
}

// ---------------------------------------------------------------------------
// Reparametrization

void ReparamModel::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw InputError("reparam time step h must be > 0");
    const double lo = v_min();
    const double hi = v_max();
    if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi)) throw InputError("reparam requires 0 < v_min <= v_max");
    if (const auto* m = std::get_if<MarkovTruncGauss>(&velocity)) {
        if (!(m->eta > 0.0) || !(m->eta < (hi - lo) / 4.0))
            throw InputError("markov reparam requires 0 < eta < (v_max - v_min) / 4");
    }
    if (const auto* f = std::get_if<FixedStart>(&gamma0); f && !std::isfinite(f->x0))
        throw InputError("fixed gamma0 must be finite");
}

double ReparamModel::v_min() const noexcept {
    return std::visit([](const auto& v) { return v.v_min; }, velocity);
}

double ReparamModel::v_max() const noexcept {
    return std::visit([](const auto& v) { return v.v_max; }, velocity);
}

double truncated_normal_quantile(double mean, double eta, double lo, double hi, double u) {
    // Standard normal CDF through erfc keeps precision in both tails.
    const auto cdf = [](double z) { return 0.5 * boost::math::erfc(-z / std::numbers::sqrt2); };
    const double a = cdf((lo - mean) / eta);
    const double b = cdf((hi - mean) / eta);
    const double q = a + u * (b - a);
    if (!(q > 0.0 && q < 1.0)) return std::clamp(mean, lo, hi);
    const double z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
    return std::clamp(mean + eta * z, lo, hi);
}

std::vector<double> sample_reparam(const ReparamModel& model, std::size_t n, RngSeed seed) {
    model.validate();
    if (n < 1) throw InputError("sample_reparam needs n >= 1");
    Rng rng(seed);
    std::vector<double> gamma(n + 1);
    gamma[0] = std::visit(
        [&](const auto& g) {
            if constexpr (std::is_same_v<std::decay_t<decltype(g)>, FixedStart>)
                return g.x0;
            else
                return rng.uniform();
        },
        model.gamma0);

    const double lo = model.v_min();
    const double hi = model.v_max();
    double v = rng.uniform(lo, hi);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            if (const auto* m = std::get_if<MarkovTruncGauss>(&model.velocity))
                v = truncated_normal_quantile(v, m->eta, lo, hi, rng.uniform_open());
            else
                v = rng.uniform(lo, hi);
        }
        gamma[k + 1] = gamma[k] + model.h * v;
    }
    return gamma;
}

// ---------------------------------------------------------------------------
// Gaussian process noise

void NoiseModel::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("noise tau must be > 0");
}

namespace {

constexpr double kEmbeddingJitter = 1e-10;
constexpr std::size_t kPaddingFactor = 4;
constexpr std::size_t kCholeskyLimit = 4000;

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place forward DFT.
void dft(std::vector<std::complex<double>>& data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

double covariance(const NoiseModel& model, double lag) {
    return model.sigma * model.sigma * std::exp(-(lag * lag) / (2.0 * model.tau * model.tau));
}

std::optional<std::vector<double>> circulant_sample(const NoiseModel& model, std::size_t n, double dt, Rng& rng) {
    std::size_t m = 1;
    while (m < kPaddingFactor * n) m <<= 1;

    std::vector<std::complex<double>> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = covariance(model, static_cast<double>(std::min(j, m - j)) * dt);
    dft(row);

    double top = 0.0;
    for (const auto& z : row) top = std::max(top, z.real());
    std::vector<double> eig(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double l = row[j].real();
        if (l < -kEmbeddingJitter * top) return std::nullopt;
        eig[j] = std::max(l, 0.0);
    }

    std::vector<std::complex<double>> z(m);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double a = rng.normal();
        const double b = rng.normal();
        z[j] = std::sqrt(eig[j] * scale) * std::complex<double>(a, b);
    }
    dft(z);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = z[j].real();
    return out;
}

std::optional<std::vector<double>> cholesky_sample(const NoiseModel& model, std::size_t n, double dt, Rng& rng) {
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov(i, j) = covariance(model, (static_cast<double>(i) - static_cast<double>(j)) * dt);
    const double var = model.sigma * model.sigma;
    for (double jitter = kEmbeddingJitter; jitter <= 1e-6; jitter *= 10.0) {
        Eigen::MatrixXd a = cov;
        a.diagonal().array() += jitter * var;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success) continue;
        Eigen::VectorXd xi(n);
        for (std::size_t i = 0; i < n; ++i) xi(i) = rng.normal();
        const Eigen::VectorXd x = llt.matrixL() * xi;
        return std::vector<double>(x.data(), x.data() + n);
    }
    return std::nullopt;
}

}  // namespace

std::vector<double> sample_gp_noise(const NoiseModel& model, std::size_t n, double dt, RngSeed seed) {
    model.validate();
    if (n < 1) throw InputError("sample_gp_noise needs n >= 1");
    if (!(dt > 0.0)) throw InputError("sample_gp_noise needs dt > 0");
    if (model.sigma == 0.0) return std::vector<double>(n, 0.0);

    Rng rng(seed);
    if (auto out = circulant_sample(model, n, dt, rng)) return *out;
    if (n <= kCholeskyLimit) {
        Rng fallback(derive_seed(seed, "cholesky"));
        if (auto out = cholesky_sample(model, n, dt, fallback)) return *out;
    }
    throw NumericError("circulant embedding of the noise covariance is not positive semi-definite (n = " +
                       std::to_string(n) + ", tau / dt = " + std::to_string(model.tau / dt) +
                       "); increase the embedding padding or reduce tau");
}

// ---------------------------------------------------------------------------
// Signal

std::size_t SimulationConfig::num_samples() const {
    const double n = std::round(duration * rate);
    if (!std::isfinite(n) || n < 2.0) throw InputError("duration * rate must be at least 2 samples");
    return static_cast<std::size_t>(n);
}

TimeSeries simulate_signal(const SimulationConfig& config) {
    if (!(config.rate > 0.0) || !(config.duration > 0.0)) throw InputError("duration and rate must be positive");
    const std::size_t n = config.num_samples();
    ReparamModel reparam = config.reparam;
    reparam.h = 1.0 / config.rate;
    const auto gamma = sample_reparam(reparam, n - 1, derive_seed(config.seed, "reparam"));
    const auto noise = sample_gp_noise(config.noise, n, reparam.h, derive_seed(config.seed, "noise"));
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = config.templ(gamma[i]) + noise[i];
    return TimeSeries(std::move(values), reparam.h);
}

}  // namespace psig
