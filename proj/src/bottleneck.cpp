// Exact bottleneck distance: binary search over the finite set of candidate
// radii, with Hopcroft-Karp deciding whether a perfect matching exists.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "psig/persistence.hpp"

namespace psig {
namespace {

double linf(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double half_persistence(const DiagramPoint& p) { return (p.death - p.birth) / 2.0; }

class HopcroftKarp {
public:
    HopcroftKarp(std::size_t left, std::size_t right)
        : adj_(left), match_left_(left, none), match_right_(right, none), dist_(left) {}

    void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(v); }

    std::size_t max_matching() {
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t u = 0; u < adj_.size(); ++u)
                if (match_left_[u] == none && dfs(u)) ++matched;
        }
        return matched;
    }

private:
    static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<std::size_t> queue;
        bool found = false;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            if (match_left_[u] == none) {
                dist_[u] = 0;
                queue.push(u);
            } else {
                dist_[u] = inf;
            }
        }
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop();
            for (const std::size_t v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == none) {
                    found = true;
                } else if (dist_[w] == inf) {
                    dist_[w] = dist_[u] + 1;
                    queue.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (const std::size_t v : adj_[u]) {
            const std::size_t w = match_right_[v];
            if (w == none || (dist_[w] == dist_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        dist_[u] = inf;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> dist_;
};

// Left side: points of `a`, then one diagonal slot per point of `b`.
// Right side: points of `b`, then one diagonal slot per point of `a`.
bool perfect_matching_within(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b, double radius) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    HopcroftKarp graph(na + nb, na + nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j)
            if (linf(a[i], b[j]) <= radius) graph.add_edge(i, j);
        if (half_persistence(a[i]) <= radius) graph.add_edge(i, nb + i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        if (half_persistence(b[j]) <= radius) graph.add_edge(na + j, j);
        for (std::size_t i = 0; i < na; ++i) graph.add_edge(na + j, nb + i);
    }
    return graph.max_matching() == na + nb;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
    const auto a = d1.points();
    const auto b = d2.points();
    if (a.empty() && b.empty()) return 0.0;

    std::vector<double> candidates;
    candidates.reserve(a.size() * b.size() + a.size() + b.size() + 1);
    candidates.push_back(0.0);
    for (const auto& p : a) candidates.push_back(half_persistence(p));
    for (const auto& q : b) candidates.push_back(half_persistence(q));
    for (const auto& p : a)
        for (const auto& q : b) candidates.push_back(linf(p, q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Matching every point to the diagonal is feasible at the largest half-persistence,
    // so the last candidate always succeeds.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (perfect_matching_within(a, b, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

}  // namespace psig
