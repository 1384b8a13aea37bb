#ifndef CHURN_METRICS_HPP
#define CHURN_METRICS_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <stack>
#include <vector>

#include "churn/graph.hpp"

namespace churn {

/// The seven node-level network measures.
struct NodeMetrics {
    std::size_t degree = 0;
    double betweenness = 0.0;
    double closeness = 0.0;
    std::size_t coreness = 0;
    std::size_t eccentricity = 0;
    bool is_articulation = false;
    double avg_min_cut = 0.0;
};

namespace detail {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// BFS distances from src; unreached nodes get kUnreached.
inline std::vector<std::size_t> bfs_distances(const Graph& g, Graph::NodeIndex src) {
    std::vector<std::size_t> dist(g.node_count(), kUnreached);
    std::deque<Graph::NodeIndex> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        auto u = q.front();
        q.pop_front();
        for (auto v : g.neighbors(u))
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

}  // namespace detail

inline std::size_t degree(const Graph& g, const std::string& v) {
    return g.degree(g.index_of(v));
}

/// Betweenness over unordered pairs {s,t}, endpoints excluded, via
/// Brandes' single-source accumulation. Cross-component pairs
/// contribute nothing.
inline std::vector<double> betweenness_all(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    std::vector<std::size_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<Graph::NodeIndex>> preds(n);
    for (Graph::NodeIndex s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), detail::kUnreached);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        std::vector<Graph::NodeIndex> order;
        std::deque<Graph::NodeIndex> q{s};
        dist[s] = 0;
        sigma[s] = 1.0;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            order.push_back(u);
            for (auto w : g.neighbors(u)) {
                if (dist[w] == detail::kUnreached) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
                if (dist[w] == dist[u] + 1) {
                    sigma[w] += sigma[u];
                    preds[w].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto w = *it;
            for (auto u : preds[w])
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    // each unordered pair was accumulated from both endpoints
    for (auto& b : bc) b /= 2.0;
    return bc;
}

/// Inverse of the sum of distances to nodes reachable from v.
/// Isolated node -> 0.
inline double closeness(const Graph& g, Graph::NodeIndex v) {
    auto dist = detail::bfs_distances(g, v);
    std::size_t total = 0;
    for (auto d : dist)
        if (d != detail::kUnreached) total += d;
    return total == 0 ? 0.0 : 1.0 / static_cast<double>(total);
}

inline double closeness(const Graph& g, const std::string& v) {
    return closeness(g, g.index_of(v));
}

/// k-core numbers by minimum-degree peeling (bucket queue).
inline std::vector<std::size_t> coreness_all(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> deg(n), core(n, 0);
    std::size_t max_deg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        max_deg = std::max(max_deg, deg[v]);
    }
    std::vector<std::vector<Graph::NodeIndex>> bucket(max_deg + 1);
    for (std::size_t v = 0; v < n; ++v) bucket[deg[v]].push_back(v);
    std::vector<bool> removed(n, false);
    std::size_t k = 0;
    for (std::size_t d = 0; d <= max_deg; ++d) {
        // peeling may refill lower buckets; rescan from d each time
        for (std::size_t i = 0; i < bucket[d].size(); ++i) {
            auto v = bucket[d][i];
            if (removed[v] || deg[v] != d) continue;
            k = std::max(k, d);
            core[v] = k;
            removed[v] = true;
            for (auto w : g.neighbors(v)) {
                if (removed[w] || deg[w] <= d) continue;
                --deg[w];
                bucket[deg[w]].push_back(w);
                if (deg[w] < d) d = deg[w];  // never happens: deg[w] > d before decrement
            }
        }
    }
    return core;
}

/// Max BFS distance within v's component; isolated node -> 0.
inline std::size_t eccentricity(const Graph& g, Graph::NodeIndex v) {
    auto dist = detail::bfs_distances(g, v);
    std::size_t ecc = 0;
    for (auto d : dist)
        if (d != detail::kUnreached) ecc = std::max(ecc, d);
    return ecc;
}

inline std::size_t eccentricity(const Graph& g, const std::string& v) {
    return eccentricity(g, g.index_of(v));
}

/// Cut vertices via iterative DFS low-link.
inline std::vector<bool> articulation_points(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<bool> is_art(n, false);
    std::vector<std::size_t> disc(n, detail::kUnreached), low(n);
    std::size_t timer = 0;

    struct Frame {
        Graph::NodeIndex v;
        Graph::NodeIndex parent;
        std::set<Graph::NodeIndex>::const_iterator it;
        std::size_t child_count = 0;
    };

    for (Graph::NodeIndex root = 0; root < n; ++root) {
        if (disc[root] != detail::kUnreached) continue;
        std::vector<Frame> stack;
        disc[root] = low[root] = timer++;
        stack.push_back({root, root, g.neighbors(root).begin(), 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.it != g.neighbors(f.v).end()) {
                auto w = *f.it++;
                if (disc[w] == detail::kUnreached) {
                    ++f.child_count;
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, f.v, g.neighbors(w).begin(), 0});
                } else if (w != f.parent) {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                auto v = f.v;
                auto parent = f.parent;
                bool is_root = (v == root);
                std::size_t children = f.child_count;
                stack.pop_back();
                if (is_root) {
                    if (children >= 2) is_art[v] = true;
                } else {
                    low[parent] = std::min(low[parent], low[v]);
                    if (low[v] >= disc[parent] && parent != root) is_art[parent] = true;
                    if (parent == root) {
                        // root handled by child count above
                    }
                }
            }
        }
        // non-root articulation check for root's children is covered by
        // low[v] >= disc[parent]; the root itself only by child count.
    }
    return is_art;
}

namespace detail {

/// Unit-capacity max-flow between s and t (Edmonds-Karp on the
/// residual graph). By Menger's theorem this equals the minimum edge
/// cut separating s and t. Returns 0 when t is unreachable.
inline std::size_t min_edge_cut(const Graph& g, Graph::NodeIndex s, Graph::NodeIndex t) {
    const std::size_t n = g.node_count();
    // residual capacities as adjacency map per node
    std::vector<std::unordered_map<Graph::NodeIndex, int>> cap(n);
    for (Graph::NodeIndex u = 0; u < n; ++u)
        for (auto v : g.neighbors(u)) cap[u][v] = 1;
    std::size_t flow = 0;
    while (true) {
        std::vector<Graph::NodeIndex> parent(n, kUnreached);
        parent[s] = s;
        std::deque<Graph::NodeIndex> q{s};
        while (!q.empty() && parent[t] == kUnreached) {
            auto u = q.front();
            q.pop_front();
            for (const auto& [v, c] : cap[u])
                if (c > 0 && parent[v] == kUnreached) {
                    parent[v] = u;
                    q.push_back(v);
                }
        }
        if (parent[t] == kUnreached) break;
        for (auto v = t; v != s; v = parent[v]) {
            auto u = parent[v];
            --cap[u][v];
            ++cap[v][u];
        }
        ++flow;
    }
    return flow;
}

}  // namespace detail

/// Controls the optional uniform-node sampling for avg_min_cut on
/// large graphs. Sampling kicks in when node_count > threshold.
struct MinCutOptions {
    std::size_t sample_threshold = 2000;
    std::size_t sample_size = 200;
    std::uint32_t seed = 42;
};

/// Result of avg_min_cut including how many counterpart nodes were
/// actually evaluated (n-1 when exact).
struct AvgMinCutResult {
    double value = 0.0;
    std::size_t pairs_evaluated = 0;
    bool sampled = false;
};

inline AvgMinCutResult avg_min_cut_detailed(const Graph& g, Graph::NodeIndex v,
                                            const MinCutOptions& opt = {}) {
    const std::size_t n = g.node_count();
    AvgMinCutResult r;
    if (n <= 1) return r;

    // cross-component pairs contribute 0; restrict work to v's component
    auto dist = detail::bfs_distances(g, v);
    std::vector<Graph::NodeIndex> others;
    for (Graph::NodeIndex u = 0; u < n; ++u)
        if (u != v && dist[u] != detail::kUnreached) others.push_back(u);

    std::vector<Graph::NodeIndex> targets;
    if (n > opt.sample_threshold && others.size() > opt.sample_size) {
        std::mt19937 rng(opt.seed);
        std::vector<Graph::NodeIndex> pool = others;
        for (std::size_t i = 0; i < opt.sample_size; ++i) {
            std::size_t j = i + rng() % (pool.size() - i);
            std::swap(pool[i], pool[j]);
            targets.push_back(pool[i]);
        }
        r.sampled = true;
    } else {
        targets = others;
    }
    r.pairs_evaluated = targets.size();

    double sum = 0.0;
    for (auto u : targets) sum += static_cast<double>(detail::min_edge_cut(g, v, u));
    if (r.sampled) {
        // estimate the full in-component sum from the sample mean
        sum = sum / static_cast<double>(targets.size()) * static_cast<double>(others.size());
    }
    // divisor is the graph size n, following the measure's definition
    r.value = sum / static_cast<double>(n);
    return r;
}

inline double avg_min_cut(const Graph& g, Graph::NodeIndex v, const MinCutOptions& opt = {}) {
    return avg_min_cut_detailed(g, v, opt).value;
}

inline double avg_min_cut(const Graph& g, const std::string& v, const MinCutOptions& opt = {}) {
    return avg_min_cut(g, g.index_of(v), opt);
}

/// All seven measures for every node, indexed by node index.
inline std::vector<NodeMetrics> all_metrics(const Graph& g, const MinCutOptions& opt = {}) {
    const std::size_t n = g.node_count();
    std::vector<NodeMetrics> out(n);
    auto bc = betweenness_all(g);
    auto core = coreness_all(g);
    auto art = articulation_points(g);
    for (Graph::NodeIndex v = 0; v < n; ++v) {
        out[v].degree = g.degree(v);
        out[v].betweenness = bc[v];
        out[v].closeness = closeness(g, v);
        out[v].coreness = core[v];
        out[v].eccentricity = eccentricity(g, v);
        out[v].is_articulation = art[v];
        out[v].avg_min_cut = avg_min_cut(g, v, opt);
    }
    return out;
}

}  // namespace churn

#endif  // CHURN_METRICS_HPP
