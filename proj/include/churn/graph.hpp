#ifndef CHURN_GRAPH_HPP
#define CHURN_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace churn {

class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Undirected simple graph over opaque string node ids.
/// Nodes are indexed densely in insertion order; self-loops and parallel
/// edges are rejected at insertion. Immutable-by-convention once built:
/// all metric code only reads.
class Graph {
public:
    using NodeIndex = std::size_t;

    Graph() = default;

    NodeIndex add_node(const std::string& id) {
        auto it = index_.find(id);
        if (it != index_.end()) return it->second;
        NodeIndex idx = ids_.size();
        ids_.push_back(id);
        index_.emplace(id, idx);
        adj_.emplace_back();
        return idx;
    }

    /// Adds the undirected edge {u, v}, creating endpoints as needed.
    /// Returns false if the edge was already present.
    bool add_edge(const std::string& u, const std::string& v) {
        if (u == v) throw GraphError("self-loop rejected: " + u);
        NodeIndex ui = add_node(u);
        NodeIndex vi = add_node(v);
        if (!adj_[ui].insert(vi).second) return false;
        adj_[vi].insert(ui);
        ++edge_count_;
        return true;
    }

    bool has_node(const std::string& id) const { return index_.count(id) != 0; }

    NodeIndex index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw GraphError("unknown node id: " + id);
        return it->second;
    }

    const std::string& id_of(NodeIndex idx) const { return ids_.at(idx); }

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    const std::set<NodeIndex>& neighbors(NodeIndex v) const { return adj_.at(v); }

    std::size_t degree(NodeIndex v) const { return adj_.at(v).size(); }

    /// Node ids in insertion order.
    const std::vector<std::string>& node_ids() const { return ids_; }

    /// Edges as index pairs with first < second, sorted.
    std::vector<std::pair<NodeIndex, NodeIndex>> edges() const {
        std::vector<std::pair<NodeIndex, NodeIndex>> out;
        out.reserve(edge_count_);
        for (NodeIndex u = 0; u < adj_.size(); ++u)
            for (NodeIndex v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        std::sort(out.begin(), out.end());
        return out;
    }

    bool has_edge(NodeIndex u, NodeIndex v) const {
        return u < adj_.size() && adj_[u].count(v) != 0;
    }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::set<NodeIndex>> adj_;
    std::size_t edge_count_ = 0;
};

/// Edge-list text format: one edge per line, "<node-id>\t<node-id>".
inline void save_edge_list(const Graph& g, std::ostream& os) {
    for (const auto& [u, v] : g.edges())
        os << g.id_of(u) << '\t' << g.id_of(v) << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw GraphError("cannot open for writing: " + path);
    save_edge_list(g, os);
}

inline Graph load_edge_list(std::istream& is) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string u, v;
        if (!(ss >> u >> v))
            throw GraphError("bad edge-list line " + std::to_string(lineno) + ": " + line);
        g.add_edge(u, v);
    }
    return g;
}

inline Graph load_edge_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw GraphError("cannot open: " + path);
    return load_edge_list(is);
}

}  // namespace churn

#endif  // CHURN_GRAPH_HPP
