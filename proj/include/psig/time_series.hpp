#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace psig {

/// Uniformly sampled real signal. Values are finite and nonempty, dt > 0.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, double dt = 1.0);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Contiguous sub-series [first, first + count), same dt.
    [[nodiscard]] TimeSeries slice(std::size_t first, std::size_t count) const;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    double dt_;
};

}  // namespace psig
