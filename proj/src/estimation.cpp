#include "psig/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "psig/errors.hpp"
#include "psig/parallel.hpp"

namespace psig {

std::string to_string(BandKind kind) { return kind == BandKind::pointwise ? "pointwise" : "uniform"; }

BandKind band_kind_from_string(const std::string& name) {
    if (name == "pointwise") return BandKind::pointwise;
    if (name == "uniform") return BandKind::uniform;
    throw InputError("unknown band kind '" + name + "' (expected pointwise or uniform)");
}

std::size_t num_windows(std::size_t n, const WindowConfig& cfg) {
    if (cfg.window_len < 2) throw InputError("window length must be at least 2");
    if (cfg.stride < 1) throw InputError("window stride must be at least 1");
    if (cfg.window_len > n)
        throw InputError("window length " + std::to_string(cfg.window_len) + " exceeds series length " +
                         std::to_string(n));
    return (n - cfg.window_len) / cfg.stride + 1;
}

std::vector<TimeSeries> windows(const TimeSeries& series, const WindowConfig& cfg) {
    const std::size_t count = num_windows(series.size(), cfg);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) out.push_back(series.slice(w * cfg.stride, cfg.window_len));
    return out;
}

std::vector<FunctionalCurve> window_curves(const TimeSeries& series, const WindowConfig& cfg,
                                           const SignatureSpec& spec) {
    spec.truncation.validate();
    const std::size_t count = num_windows(series.size(), cfg);
    std::vector<FunctionalCurve> curves(count, FunctionalCurve::zeros(spec.grid));
    const auto values = series.values();
    parallel_for(count, [&](std::size_t w) {
        const auto diagram = sublevel_diagram(values.subspan(w * cfg.stride, cfg.window_len));
        curves[w] = normalized_functional(diagram, spec.truncation, spec.kernel, spec.grid);
    });
    return curves;
}

FunctionalCurve mean_curve(const std::vector<FunctionalCurve>& curves) {
    if (curves.empty()) throw InputError("cannot average an empty set of curves");
    std::vector<double> acc(curves.front().values.size(), 0.0);
    for (const auto& c : curves) {
        if (!(c.grid == curves.front().grid)) throw InputError("curves live on different grids");
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.values[i];
    }
    const double n = static_cast<double>(curves.size());
    for (double& v : acc) v /= n;
    return FunctionalCurve(curves.front().grid, std::move(acc));
}

FunctionalCurve empirical_signature(const TimeSeries& series, const WindowConfig& cfg, const SignatureSpec& spec) {
    return mean_curve(window_curves(series, cfg, spec));
}

std::vector<std::size_t> mbb_indices(std::size_t num_windows, std::size_t block_len, RngSeed seed,
                                     std::size_t replicate_index) {
    if (num_windows < 1) throw InputError("bootstrap needs at least one window");
    if (block_len < 1 || block_len > num_windows)
        throw InputError("block length must lie in [1, number of windows]");
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(replicate_index)));
    const std::size_t starts = num_windows - block_len + 1;
    const std::size_t blocks = (num_windows + block_len - 1) / block_len;
    std::vector<std::size_t> idx;
    idx.reserve(blocks * block_len);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t s = rng.below(starts);
        for (std::size_t k = 0; k < block_len; ++k) idx.push_back(s + k);
    }
    idx.resize(num_windows);
    return idx;
}

FunctionalCurve mbb_resample(const std::vector<FunctionalCurve>& window_curves, const BootstrapConfig& cfg,
                             std::size_t replicate_index) {
    const auto idx = mbb_indices(window_curves.size(), cfg.block_len, cfg.seed, replicate_index);
    const auto& grid = window_curves.front().grid;
    std::vector<double> acc(grid.size(), 0.0);
    for (const std::size_t w : idx) {
        const auto& v = window_curves[w].values;
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    const double n = static_cast<double>(idx.size());
    for (double& v : acc) v /= n;
    return FunctionalCurve(grid, std::move(acc));
}

std::vector<FunctionalCurve> bootstrap_replicates(const std::vector<FunctionalCurve>& window_curves,
                                                  const BootstrapConfig& cfg) {
    if (cfg.replicates < 2) throw InputError("bootstrap needs at least 2 replicates");
    if (window_curves.empty()) throw InputError("bootstrap needs at least one window");
    std::vector<FunctionalCurve> reps(cfg.replicates, FunctionalCurve::zeros(window_curves.front().grid));
    parallel_for(cfg.replicates, [&](std::size_t b) { reps[b] = mbb_resample(window_curves, cfg, b); });
    return reps;
}

double quantile(std::vector<double> sample, double q) {
    if (sample.empty()) throw InputError("quantile of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sample[lo] + (sample[hi] - sample[lo]) * frac;
}

SignatureEstimate bands_from_replicates(const FunctionalCurve& mean, const std::vector<FunctionalCurve>& replicates,
                                        double alpha, BandKind kind) {
    if (replicates.size() < 2) throw InputError("bands need at least 2 replicates");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    const std::size_t nodes = mean.values.size();
    std::vector<double> lower(nodes);
    std::vector<double> upper(nodes);

    if (kind == BandKind::pointwise) {
        std::vector<double> column(replicates.size());
        for (std::size_t i = 0; i < nodes; ++i) {
            for (std::size_t b = 0; b < replicates.size(); ++b) column[b] = replicates[b].values[i];
            lower[i] = quantile(column, alpha / 2.0);
            upper[i] = quantile(column, 1.0 - alpha / 2.0);
        }
    } else {
        std::vector<double> sup(replicates.size());
        for (std::size_t b = 0; b < replicates.size(); ++b) sup[b] = replicates[b].sup_distance(mean);
        const double q = quantile(sup, 1.0 - alpha);
        for (std::size_t i = 0; i < nodes; ++i) {
            lower[i] = mean.values[i] - q;
            upper[i] = mean.values[i] + q;
        }
    }
    return SignatureEstimate{mean, FunctionalCurve(mean.grid, std::move(lower)),
                             FunctionalCurve(mean.grid, std::move(upper)), alpha, replicates.size(), kind};
}

SignatureEstimate bootstrap_bands(const TimeSeries& series, const WindowConfig& wcfg, const SignatureSpec& spec,
                                  const BootstrapConfig& bcfg) {
    if (bcfg.replicates < 2) throw InputError("bootstrap needs at least 2 replicates");
    const auto curves = window_curves(series, wcfg, spec);
    const auto mean = mean_curve(curves);
    const auto reps = bootstrap_replicates(curves, bcfg);
    return bands_from_replicates(mean, reps, bcfg.alpha, bcfg.band);
}

std::size_t default_block_len(std::size_t num_windows) {
    if (num_windows <= 1) return 1;
    // Largest L with L^5 <= n^2, i.e. floor(n^0.4) without floating-point rounding.
    using wide = unsigned __int128;
    const wide n2 = static_cast<wide>(num_windows) * num_windows;
    auto fits = [&](std::size_t l) {
        const wide x = l;
        return x * x * x * x * x <= n2;
    };
    auto l = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(num_windows), 0.4)));
    while (l > 1 && !fits(l)) --l;
    while (fits(l + 1)) ++l;
    return std::max<std::size_t>(1, l);
}

}  // namespace psig
