#include "psig/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psig/errors.hpp"

namespace psig {

PersistenceDiagram::PersistenceDiagram(std::vector<DiagramPoint> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!std::isfinite(p.birth) || !std::isfinite(p.death))
            throw InputError("diagram point has a non-finite coordinate");
        if (p.death < p.birth) throw InputError("diagram point has death < birth");
    }
    std::sort(points_.begin(), points_.end());
}

double PersistenceDiagram::max_persistence() const noexcept {
    double best = 0.0;
    for (const auto& p : points_) best = std::max(best, p.persistence());
    return best;
}

PersistenceDiagram PersistenceDiagram::shifted(double offset) const {
    std::vector<DiagramPoint> pts(points_);
    for (auto& p : pts) {
        p.birth += offset;
        p.death += offset;
    }
    return PersistenceDiagram(std::move(pts));
}

PersistenceDiagram PersistenceDiagram::replicated(std::size_t copies) const {
    std::vector<DiagramPoint> pts;
    pts.reserve(points_.size() * copies);
    for (std::size_t c = 0; c < copies; ++c) pts.insert(pts.end(), points_.begin(), points_.end());
    return PersistenceDiagram(std::move(pts));
}

namespace {

struct Component {
    std::size_t parent;
    double birth;
    std::size_t min_index;  // sample index of the component's minimum in the original series
};

std::size_t find_root(std::vector<Component>& comps, std::size_t i) {
    while (comps[i].parent != i) {
        comps[i].parent = comps[comps[i].parent].parent;
        i = comps[i].parent;
    }
    return i;
}

bool is_elder(const Component& a, const Component& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.min_index < b.min_index;
}

}  // namespace

PersistenceDiagram sublevel_diagram(std::span<const double> values) {
    if (values.empty()) throw InputError("cannot compute the diagram of an empty series");

    // Collapse plateaus: keep the first sample of every run of equal values.
    std::vector<double> level;
    std::vector<std::size_t> origin;
    level.reserve(values.size());
    origin.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw InputError("series contains a non-finite value");
        if (level.empty() || values[i] != level.back()) {
            level.push_back(values[i]);
            origin.push_back(i);
        }
    }

    const std::size_t n = level.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (level[a] != level[b]) return level[a] < level[b];
        return a < b;
    });

    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<Component> comps(n, Component{unset, 0.0, 0});
    std::vector<DiagramPoint> pairs;

    for (const std::size_t k : order) {
        const double v = level[k];
        std::size_t roots[2];
        std::size_t nroots = 0;
        if (k > 0 && comps[k - 1].parent != unset) roots[nroots++] = find_root(comps, k - 1);
        if (k + 1 < n && comps[k + 1].parent != unset) roots[nroots++] = find_root(comps, k + 1);

        if (nroots == 0) {
            comps[k] = Component{k, v, origin[k]};
        } else if (nroots == 1) {
            comps[k] = Component{roots[0], 0.0, 0};
        } else {
            std::size_t elder = roots[0];
            std::size_t younger = roots[1];
            if (is_elder(comps[younger], comps[elder])) std::swap(elder, younger);
            pairs.push_back({comps[younger].birth, v});
            comps[younger].parent = elder;
            comps[k] = Component{elder, 0.0, 0};
        }
    }

    // The surviving component is killed at the global maximum.
    const double top = level[order.back()];
    pairs.push_back({comps[find_root(comps, order.front())].birth, top});

    std::erase_if(pairs, [](const DiagramPoint& p) { return p.death == p.birth; });
    return PersistenceDiagram(std::move(pairs));
}

PersistenceDiagram sublevel_diagram(const TimeSeries& series) { return sublevel_diagram(series.values()); }

PersistenceDiagram diagram_union(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    std::vector<DiagramPoint> pts(a.points().begin(), a.points().end());
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    return PersistenceDiagram(std::move(pts));
}

bool approx_equal(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol) {
    if (a.size() != b.size()) return false;
    const auto pa = a.points();
    const auto pb = b.points();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (std::abs(pa[i].birth - pb[i].birth) > tol || std::abs(pa[i].death - pb[i].death) > tol) return false;
    }
    return true;
}

}  // namespace psig
