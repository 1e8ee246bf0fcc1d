#include "psig/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psig/errors.hpp"

namespace psig {

void TruncationSpec::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be finite and >= 0");
    if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("p must be finite and >= 1");
}

void ProjectionWindow::validate() const {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
        throw InputError("projection window requires finite lower < upper");
}

KernelSpec::KernelSpec(SilhouetteKernel k) : kernel_(k) { k.window.validate(); }

KernelSpec::KernelSpec(ImageKernel k) : kernel_(k) {
    k.window.validate();
    if (!(k.sigma > 0.0) || !std::isfinite(k.sigma)) throw InputError("image kernel sigma must be > 0");
    if (!(k.r > 1.0) || !std::isfinite(k.r)) throw InputError("image kernel r must be > 1");
}

const ProjectionWindow& KernelSpec::window() const noexcept {
    return std::visit([](const auto& k) -> const ProjectionWindow& { return k.window; }, kernel_);
}

double KernelSpec::time_lipschitz() const noexcept {
    if (const auto* img = std::get_if<ImageKernel>(&kernel_))
        return std::pow(2.0, img->r + 1.0) / (std::numbers::pi * std::numbers::e * std::pow(img->sigma, 3));
    return 2.0;
}

double KernelSpec::point_lipschitz() const noexcept {
    if (const auto* img = std::get_if<ImageKernel>(&kernel_))
        return std::pow(2.0, img->r - 1.0) * (img->r + 2.0) / (std::numbers::pi * std::pow(img->sigma, 3));
    return 2.0;
}

double KernelSpec::diagonal_bound() const noexcept {
    // The projection keeps diagonal points on the diagonal, where the silhouette tent is
    // flat zero and the image kernel peaks at its centre value.
    if (const auto* img = std::get_if<ImageKernel>(&kernel_))
        return std::pow(2.0, img->r) / (2.0 * std::numbers::pi * img->sigma * img->sigma);
    return 0.0;
}

EvaluationGrid::EvaluationGrid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
    if (axes_.size() != 1 && axes_.size() != 2) throw InputError("evaluation grid must be 1-D or 2-D");
    for (const auto& a : axes_) {
        if (a.count < 2) throw InputError("grid axis needs at least 2 nodes");
        if (!std::isfinite(a.start) || !std::isfinite(a.stop) || !(a.start < a.stop))
            throw InputError("grid axis requires finite start < stop");
    }
}

EvaluationGrid EvaluationGrid::for_kernel(const KernelSpec& kernel) {
    return for_kernel(kernel, kernel.is_silhouette() ? 512 : 64);
}

EvaluationGrid EvaluationGrid::for_kernel(const KernelSpec& kernel, std::size_t count_per_axis) {
    const auto& w = kernel.window();
    const double pad = (w.upper - w.lower) / 8.0;
    const GridAxis axis{w.lower - pad, w.upper + pad, count_per_axis};
    if (kernel.is_silhouette()) return EvaluationGrid({axis});
    return EvaluationGrid({axis, axis});
}

std::size_t EvaluationGrid::size() const noexcept {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.count;
    return n;
}

std::array<double, 2> EvaluationGrid::node(std::size_t i) const noexcept {
    if (axes_.size() == 1) return {axes_[0].node(i), 0.0};
    const std::size_t inner = axes_[1].count;
    return {axes_[0].node(i / inner), axes_[1].node(i % inner)};
}

double EvaluationGrid::max_step() const noexcept {
    double s = 0.0;
    for (const auto& a : axes_) s = std::max(s, a.step());
    return s;
}

FunctionalCurve::FunctionalCurve(EvaluationGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw InputError("curve has the wrong number of values for its grid");
    for (const double x : values)
        if (!std::isfinite(x)) throw NumericError("curve contains a non-finite value");
}

FunctionalCurve FunctionalCurve::zeros(const EvaluationGrid& g) { return FunctionalCurve(g, std::vector<double>(g.size(), 0.0)); }

double FunctionalCurve::sup_distance(const FunctionalCurve& other) const {
    if (!(grid == other.grid)) throw InputError("curves live on different grids");
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) best = std::max(best, std::abs(values[i] - other.values[i]));
    return best;
}

double truncated_weight(const DiagramPoint& point, const TruncationSpec& spec) {
    return std::max(point.death - point.birth - spec.epsilon, 0.0);
}

double truncated_persistence_power(const PersistenceDiagram& d, const TruncationSpec& spec) {
    double total = 0.0;
    for (const auto& x : d.points()) {
        const double w = truncated_weight(x, spec);
        if (w > 0.0) total += std::pow(w, spec.p);
    }
    return total;
}

double truncated_persistence(const PersistenceDiagram& d, const TruncationSpec& spec) {
    const double total = truncated_persistence_power(d, spec);
    return total > 0.0 ? std::pow(total, 1.0 / spec.p) : 0.0;
}

DiagramPoint project(const DiagramPoint& point, const ProjectionWindow& window) {
    const double excess = std::max({point.death - window.upper, window.lower - point.birth, 0.0});
    const double shift = std::min(excess, (point.death - point.birth) / 2.0);
    return {point.birth + shift, point.death - shift};
}

namespace {

double silhouette_at(const DiagramPoint& projected, double t) {
    const double half = (projected.death - projected.birth) / 2.0;
    const double mid = (projected.birth + projected.death) / 2.0;
    return std::max(half - std::abs(t - mid), 0.0);
}

double image_at(const ImageKernel& k, const DiagramPoint& projected, double x, double y) {
    const double dx = projected.birth - x;
    const double dy = projected.death - y;
    const double taper = 2.0 - std::max(std::abs(dx), std::abs(dy)) / k.sigma;
    if (taper <= 0.0) return 0.0;
    const double s2 = k.sigma * k.sigma;
    return std::pow(taper, k.r) * std::exp(-(dx * dx + dy * dy) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

// Adds weight * k(point) to `out` on every grid node.
void accumulate(const KernelSpec& spec, const DiagramPoint& point, double weight, const EvaluationGrid& grid,
                std::vector<double>& out) {
    const DiagramPoint pr = project(point, spec.window());
    if (const auto* img = std::get_if<ImageKernel>(&spec.variant())) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const auto t = grid.node(i);
            const double v = image_at(*img, pr, t[0], t[1]);
            if (v != 0.0) out[i] += weight * v;
        }
        return;
    }
    const GridAxis& axis = grid.axes()[0];
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = axis.node(i);
        if (t <= pr.birth || t >= pr.death) continue;
        out[i] += weight * silhouette_at(pr, t);
    }
}

}  // namespace

double kernel_eval(const KernelSpec& spec, const DiagramPoint& point, std::array<double, 2> t) {
    const DiagramPoint pr = project(point, spec.window());
    if (const auto* img = std::get_if<ImageKernel>(&spec.variant())) return image_at(*img, pr, t[0], t[1]);
    return silhouette_at(pr, t[0]);
}

double kernel_eval(const KernelSpec& spec, const DiagramPoint& point, double t) {
    return kernel_eval(spec, point, std::array<double, 2>{t, 0.0});
}

namespace {

void check_grid(const KernelSpec& kernel, const EvaluationGrid& grid) {
    if (grid.dim() != kernel.dim()) throw InputError("grid dimension does not match the kernel");
}

}  // namespace

FunctionalCurve linear_functional(const PersistenceDiagram& d, const TruncationSpec& spec, const KernelSpec& kernel,
                                  const EvaluationGrid& grid) {
    check_grid(kernel, grid);
    std::vector<double> values(grid.size(), 0.0);
    for (const auto& x : d.points()) {
        const double w = truncated_weight(x, spec);
        if (w > 0.0) accumulate(kernel, x, std::pow(w, spec.p), grid, values);
    }
    return FunctionalCurve(grid, std::move(values));
}

FunctionalCurve normalized_functional(const PersistenceDiagram& d, const TruncationSpec& spec,
                                      const KernelSpec& kernel, const EvaluationGrid& grid) {
    FunctionalCurve rho = linear_functional(d, spec, kernel, grid);
    const double total = truncated_persistence_power(d, spec);
    if (!(total > 0.0)) return FunctionalCurve::zeros(grid);
    for (double& v : rho.values) v /= total;
    return rho;
}

}  // namespace psig
