// Independent brute-force oracles for the graph measures. These stay
// deliberately naive (path enumeration, subset enumeration, node
// removal) so they share no code path with the library implementations.
#ifndef CHURN_TEST_ORACLES_HPP
#define CHURN_TEST_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "churn/graph.hpp"

namespace oracle {

// adjacency matrix view of a churn::Graph
inline std::vector<std::vector<bool>> adjacency(const churn::Graph& g) {
    std::size_t n = g.node_count();
    std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : g.edges()) a[u][v] = a[v][u] = true;
    return a;
}

// all-pairs distances by Floyd-Warshall; -1 = unreachable
inline std::vector<std::vector<int>> distances(const std::vector<std::vector<bool>>& a) {
    std::size_t n = a.size();
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (a[i][j]) d[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (auto& row : d)
        for (auto& x : row)
            if (x >= inf) x = -1;
    return d;
}

// enumerate every simple path s->t, keep the shortest ones, count how
// many pass through each interior node
struct PathCensus {
    std::size_t shortest_count = 0;
    std::vector<std::size_t> through;  // per node
};

inline void enumerate_paths(const std::vector<std::vector<bool>>& a, std::size_t t,
                            std::vector<std::size_t>& path, std::vector<bool>& used,
                            std::size_t best_len, PathCensus& census) {
    std::size_t cur = path.back();
    if (path.size() - 1 > best_len) return;
    if (cur == t) {
        if (path.size() - 1 == best_len) {
            ++census.shortest_count;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) ++census.through[path[i]];
        }
        return;
    }
    for (std::size_t next = 0; next < a.size(); ++next) {
        if (!a[cur][next] || used[next]) continue;
        used[next] = true;
        path.push_back(next);
        enumerate_paths(a, t, path, used, best_len, census);
        path.pop_back();
        used[next] = false;
    }
}

inline std::vector<double> betweenness(const churn::Graph& g) {
    auto a = adjacency(g);
    auto d = distances(a);
    std::size_t n = a.size();
    std::vector<double> bc(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            if (d[s][t] <= 0) continue;
            PathCensus census;
            census.through.assign(n, 0);
            std::vector<std::size_t> path{s};
            std::vector<bool> used(n, false);
            used[s] = true;
            enumerate_paths(a, t, path, used, static_cast<std::size_t>(d[s][t]), census);
            for (std::size_t v = 0; v < n; ++v)
                if (v != s && v != t && census.through[v] > 0)
                    bc[v] += static_cast<double>(census.through[v]) /
                             static_cast<double>(census.shortest_count);
        }
    }
    return bc;
}

inline std::vector<double> closeness(const churn::Graph& g) {
    auto d = distances(adjacency(g));
    std::vector<double> out(d.size(), 0.0);
    for (std::size_t v = 0; v < d.size(); ++v) {
        long long sum = 0;
        for (std::size_t w = 0; w < d.size(); ++w)
            if (d[v][w] > 0) sum += d[v][w];
        out[v] = sum == 0 ? 0.0 : 1.0 / static_cast<double>(sum);
    }
    return out;
}

inline std::vector<std::size_t> eccentricity(const churn::Graph& g) {
    auto d = distances(adjacency(g));
    std::vector<std::size_t> out(d.size(), 0);
    for (std::size_t v = 0; v < d.size(); ++v)
        for (std::size_t w = 0; w < d.size(); ++w)
            if (d[v][w] > 0) out[v] = std::max(out[v], static_cast<std::size_t>(d[v][w]));
    return out;
}

// coreness by exhaustive induced-subgraph check: core(v) is the largest
// k with a vertex subset containing v whose induced minimum degree >= k
inline std::vector<std::size_t> coreness(const churn::Graph& g) {
    auto a = adjacency(g);
    std::size_t n = a.size();
    std::vector<std::size_t> core(n, 0);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::size_t min_deg = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!(mask & (1u << v))) continue;
            std::size_t deg = 0;
            for (std::size_t w = 0; w < n; ++w)
                if ((mask & (1u << w)) && a[v][w]) ++deg;
            min_deg = std::min(min_deg, deg);
        }
        for (std::size_t v = 0; v < n; ++v)
            if (mask & (1u << v)) core[v] = std::max(core[v], min_deg);
    }
    return core;
}

inline std::size_t component_count(const std::vector<std::vector<bool>>& a,
                                   const std::vector<bool>& present) {
    std::size_t n = a.size();
    std::vector<bool> seen(n, false);
    std::size_t comps = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (!present[s] || seen[s]) continue;
        ++comps;
        std::vector<std::size_t> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (present[v] && a[u][v] && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
    }
    return comps;
}

inline std::vector<bool> articulation_points(const churn::Graph& g) {
    auto a = adjacency(g);
    std::size_t n = a.size();
    std::vector<bool> all(n, true);
    std::size_t base = component_count(a, all);
    std::vector<bool> out(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        bool isolated = true;
        for (std::size_t w = 0; w < n; ++w) isolated = isolated && !a[v][w];
        if (isolated) continue;  // removing it removes its singleton component
        auto present = all;
        present[v] = false;
        out[v] = component_count(a, present) > base;
    }
    return out;
}

inline bool separated(const std::vector<std::vector<bool>>& a, std::size_t s, std::size_t t) {
    std::size_t n = a.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v)
            if (a[u][v] && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
    }
    return !seen[t];
}

// checks whether some k-subset of edges disconnects s from t
inline bool k_cut_exists(const churn::Graph& g, std::size_t s, std::size_t t, std::size_t k) {
    auto edges = g.edges();
    std::size_t m = edges.size();
    if (k > m) k = m;
    std::vector<std::size_t> pick(k);
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                            std::size_t depth) -> bool {
        if (depth == k) {
            auto a = adjacency(g);
            for (std::size_t i = 0; i < k; ++i)
                a[edges[pick[i]].first][edges[pick[i]].second] =
                    a[edges[pick[i]].second][edges[pick[i]].first] = false;
            return separated(a, s, t);
        }
        for (std::size_t e = start; e < m; ++e) {
            pick[depth] = e;
            if (rec(e + 1, depth + 1)) return true;
        }
        return false;
    };
    return rec(0, 0);
}

// verifies an exact min-cut value: no smaller cut exists, and a cut of
// exactly this size exists (0 means already separated)
inline bool verify_min_cut(const churn::Graph& g, std::size_t s, std::size_t t,
                           std::size_t claimed) {
    if (claimed == 0) return separated(adjacency(g), s, t);
    if (separated(adjacency(g), s, t)) return false;
    for (std::size_t k = 1; k < claimed; ++k)
        if (k_cut_exists(g, s, t, k)) return false;
    return k_cut_exists(g, s, t, claimed);
}

// deterministic random graph on up to max_nodes vertices
inline churn::Graph random_graph(std::mt19937& rng, std::size_t max_nodes) {
    std::size_t n = 2 + rng() % (max_nodes - 1);
    double p = 0.15 + 0.35 * (static_cast<double>(rng()) / 4294967296.0);
    churn::Graph g;
    for (std::size_t i = 0; i < n; ++i) g.add_node("n" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (static_cast<double>(rng()) / 4294967296.0 < p)
                g.add_edge("n" + std::to_string(i), "n" + std::to_string(j));
    return g;
}

}  // namespace oracle

#endif  // CHURN_TEST_ORACLES_HPP
