#pragma once

// Truncated persistence weights, compactly supported kernels and the linear /
// normalized functional representations of a diagram, evaluated on grids.

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "psig/persistence.hpp"

namespace psig {

/// Weight w(b, d) = (d - b - epsilon)_+ raised to `p`.
struct TruncationSpec {
    double epsilon = 0.2;
    double p = 1.0;

    void validate() const;
};

/// Corner (lower, upper) of the triangle the projection maps onto.
struct ProjectionWindow {
    double lower = -9.0;
    double upper = 9.0;

    void validate() const;
};

struct SilhouetteKernel {
    ProjectionWindow window;
};

/// Persistence-image kernel tapered by (2 - |.|_inf / sigma)_+^r.
struct ImageKernel {
    ProjectionWindow window;
    double sigma = 1.0;
    double r = 1.1;
};

class KernelSpec {
public:
    using Variant = std::variant<SilhouetteKernel, ImageKernel>;

    KernelSpec(SilhouetteKernel k);  // NOLINT(google-explicit-constructor)
    KernelSpec(ImageKernel k);       // NOLINT(google-explicit-constructor)

    [[nodiscard]] const Variant& variant() const noexcept { return kernel_; }
    [[nodiscard]] bool is_silhouette() const noexcept { return std::holds_alternative<SilhouetteKernel>(kernel_); }
    [[nodiscard]] const ProjectionWindow& window() const noexcept;
    /// Dimension of the index space: 1 for the silhouette, 2 for the image.
    [[nodiscard]] int dim() const noexcept { return is_silhouette() ? 1 : 2; }

    /// Lipschitz constant of t -> k(x)(t), uniform in x.
    [[nodiscard]] double time_lipschitz() const noexcept;
    /// Lipschitz constant of x -> k(x) in sup norm, w.r.t. the sup norm on points.
    [[nodiscard]] double point_lipschitz() const noexcept;
    /// Bound on |k(x)| for x on the diagonal.
    [[nodiscard]] double diagonal_bound() const noexcept;

private:
    Variant kernel_;
};

struct GridAxis {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;

    [[nodiscard]] double node(std::size_t i) const noexcept {
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    [[nodiscard]] double step() const noexcept { return (stop - start) / static_cast<double>(count - 1); }

    friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

/// Regular grid on the index space; 2-D nodes are stored row-major (axis 0 outer).
class EvaluationGrid {
public:
    explicit EvaluationGrid(std::vector<GridAxis> axes);

    /// Default grid for a kernel: the window padded by an eighth of its width on each
    /// side, with 512 nodes (silhouette) or 64x64 nodes (image).
    static EvaluationGrid for_kernel(const KernelSpec& kernel);
    static EvaluationGrid for_kernel(const KernelSpec& kernel, std::size_t count_per_axis);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(axes_.size()); }
    [[nodiscard]] std::span<const GridAxis> axes() const noexcept { return axes_; }
    [[nodiscard]] std::size_t size() const noexcept;
    /// Coordinates of node `i` (second coordinate unused in 1-D).
    [[nodiscard]] std::array<double, 2> node(std::size_t i) const noexcept;
    /// Largest axis step.
    [[nodiscard]] double max_step() const noexcept;

    friend bool operator==(const EvaluationGrid&, const EvaluationGrid&) = default;

private:
    std::vector<GridAxis> axes_;
};

/// A functional sampled on an evaluation grid.
struct FunctionalCurve {
    EvaluationGrid grid;
    std::vector<double> values;

    FunctionalCurve(EvaluationGrid g, std::vector<double> v);
    static FunctionalCurve zeros(const EvaluationGrid& g);

    /// max |a - b| over nodes; grids must match.
    [[nodiscard]] double sup_distance(const FunctionalCurve& other) const;

    friend bool operator==(const FunctionalCurve&, const FunctionalCurve&) = default;
};

[[nodiscard]] double truncated_weight(const DiagramPoint& point, const TruncationSpec& spec);

/// (sum of w_eps^p)^(1/p), 0 for an empty diagram.
[[nodiscard]] double truncated_persistence(const PersistenceDiagram& d, const TruncationSpec& spec);
/// sum of w_eps^p, i.e. truncated_persistence^p without the root.
[[nodiscard]] double truncated_persistence_power(const PersistenceDiagram& d, const TruncationSpec& spec);

/// Moves a point towards the diagonal, into the triangle with corner (lower, upper).
[[nodiscard]] DiagramPoint project(const DiagramPoint& point, const ProjectionWindow& window);

/// k(point) evaluated at a node of the index space (t[1] is ignored for the silhouette).
[[nodiscard]] double kernel_eval(const KernelSpec& spec, const DiagramPoint& point, std::array<double, 2> t);
[[nodiscard]] double kernel_eval(const KernelSpec& spec, const DiagramPoint& point, double t);

/// rho(D) = sum over points of w_eps^p k(point).
[[nodiscard]] FunctionalCurve linear_functional(const PersistenceDiagram& d, const TruncationSpec& spec,
                                                const KernelSpec& kernel, const EvaluationGrid& grid);

/// rho(D) / sum of w_eps^p, or the zero curve when the denominator vanishes.
[[nodiscard]] FunctionalCurve normalized_functional(const PersistenceDiagram& d, const TruncationSpec& spec,
                                                    const KernelSpec& kernel, const EvaluationGrid& grid);

}  // namespace psig
