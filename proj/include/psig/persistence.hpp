#pragma once

// Sublevel-set H0 persistence of piecewise-linear signals.

#include <cstddef>
#include <span>
#include <vector>

#include "psig/time_series.hpp"

namespace psig {

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;

    [[nodiscard]] double persistence() const noexcept { return death - birth; }

    friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
    friend auto operator<=>(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Finite multiset of (birth, death) pairs; the diagonal is implicit.
/// Points are kept sorted lexicographically so that equal multisets compare equal.
class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    /// Throws InputError if some point has death < birth or a non-finite coordinate.
    explicit PersistenceDiagram(std::vector<DiagramPoint> points);

    [[nodiscard]] std::span<const DiagramPoint> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }

    /// Largest death - birth, 0 for the empty diagram.
    [[nodiscard]] double max_persistence() const noexcept;

    /// Every point shifted by `offset` in both coordinates.
    [[nodiscard]] PersistenceDiagram shifted(double offset) const;
    /// Multiset with each multiplicity multiplied by `copies`.
    [[nodiscard]] PersistenceDiagram replicated(std::size_t copies) const;

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;

private:
    std::vector<DiagramPoint> points_;
};

/// H0 sublevel-set diagram of the piecewise-linear interpolation of the series.
///
/// Local minima are born at their value. At a merge the component with the larger
/// birth dies; equal births are resolved in favour of the component whose minimum
/// has the smaller sample index. The last component dies at the global maximum.
/// Plateaus are collapsed and zero-persistence points are dropped. The result
/// depends only on the ordered values, never on dt.
[[nodiscard]] PersistenceDiagram sublevel_diagram(std::span<const double> values);
[[nodiscard]] PersistenceDiagram sublevel_diagram(const TimeSeries& series);

/// Exact bottleneck distance with diagonal matching under the sup-norm cost.
[[nodiscard]] double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Multiset union.
[[nodiscard]] PersistenceDiagram diagram_union(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Multiset equality up to an absolute per-coordinate tolerance, after sorting.
[[nodiscard]] bool approx_equal(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol = 1e-12);

}  // namespace psig
