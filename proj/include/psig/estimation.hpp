#pragma once

// Sliding-window signature estimation and moving-block bootstrap bands.

#include <cstddef>
#include <string>
#include <vector>

#include "psig/functionals.hpp"
#include "psig/rng.hpp"
#include "psig/time_series.hpp"

namespace psig {

struct WindowConfig {
    std::size_t window_len = 150;
    std::size_t stride = 1;
};

enum class BandKind { pointwise, uniform };

[[nodiscard]] std::string to_string(BandKind kind);
[[nodiscard]] BandKind band_kind_from_string(const std::string& name);

struct BootstrapConfig {
    std::size_t replicates = 200;
    std::size_t block_len = 100;
    double alpha = 0.01;
    RngSeed seed{0};
    BandKind band = BandKind::pointwise;
};

struct SignatureEstimate {
    FunctionalCurve mean;
    FunctionalCurve lower;
    FunctionalCurve upper;
    double alpha;
    std::size_t replicates;
    BandKind band_kind;
};

/// Everything needed to turn a window into a curve.
struct SignatureSpec {
    TruncationSpec truncation{};
    KernelSpec kernel = SilhouetteKernel{};
    EvaluationGrid grid = EvaluationGrid::for_kernel(SilhouetteKernel{});
};

/// X_n = (S_n, ..., S_{n+M-1}) for n = 0, stride, 2 stride, ... while the window fits.
[[nodiscard]] std::vector<TimeSeries> windows(const TimeSeries& series, const WindowConfig& cfg);

/// Normalized functional of every window, in window order.
[[nodiscard]] std::vector<FunctionalCurve> window_curves(const TimeSeries& series, const WindowConfig& cfg,
                                                         const SignatureSpec& spec);

/// Node-wise mean of curves (fixed summation order).
[[nodiscard]] FunctionalCurve mean_curve(const std::vector<FunctionalCurve>& curves);

/// Node-wise mean of the normalized functional over all windows.
[[nodiscard]] FunctionalCurve empirical_signature(const TimeSeries& series, const WindowConfig& cfg,
                                                  const SignatureSpec& spec);

/// Window indices of one moving-block bootstrap sample: ceil(n / L) block starts drawn
/// uniformly from the n - L + 1 starts whose block fits, blocks of L consecutive indices
/// concatenated and cut to n entries. Depends only on (seed, replicate_index).
[[nodiscard]] std::vector<std::size_t> mbb_indices(std::size_t num_windows, std::size_t block_len, RngSeed seed,
                                                   std::size_t replicate_index);

/// Mean curve of one bootstrap sample of the precomputed window curves.
[[nodiscard]] FunctionalCurve mbb_resample(const std::vector<FunctionalCurve>& window_curves,
                                           const BootstrapConfig& cfg, std::size_t replicate_index);

/// All B replicate curves, computed in parallel, ordered by replicate index.
[[nodiscard]] std::vector<FunctionalCurve> bootstrap_replicates(const std::vector<FunctionalCurve>& window_curves,
                                                                const BootstrapConfig& cfg);

/// Bands from replicate curves around `mean`.
[[nodiscard]] SignatureEstimate bands_from_replicates(const FunctionalCurve& mean,
                                                      const std::vector<FunctionalCurve>& replicates,
                                                      double alpha, BandKind kind);

[[nodiscard]] SignatureEstimate bootstrap_bands(const TimeSeries& series, const WindowConfig& wcfg,
                                                const SignatureSpec& spec, const BootstrapConfig& bcfg);

/// max(1, floor(num_windows^0.4)).
[[nodiscard]] std::size_t default_block_len(std::size_t num_windows);

/// Number of windows produced for a series of length n.
[[nodiscard]] std::size_t num_windows(std::size_t n, const WindowConfig& cfg);

/// Empirical quantile with linear interpolation between order statistics.
[[nodiscard]] double quantile(std::vector<double> sample, double q);

}  // namespace psig
