#include "psig/time_series.hpp"

#include <cmath>
#include <string>

#include "psig/errors.hpp"

namespace psig {

TimeSeries::TimeSeries(std::vector<double> values, double dt) : values_(std::move(values)), dt_(dt) {
    if (values_.empty()) throw InputError("time series is empty");
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InputError("time series dt must be positive and finite");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw InputError("time series value at index " + std::to_string(i) + " is not finite");
    }
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > values_.size()) throw InputError("slice out of range");
    return TimeSeries(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                          values_.begin() + static_cast<std::ptrdiff_t>(first + count)),
                      dt_);
}

}  // namespace psig
