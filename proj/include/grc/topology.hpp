#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "grc/field.hpp"

namespace grc {

/// Simple connected undirected graph over node indices [0, n).
/// Serialized form: {"nodes": N, "edges": [[u, v], ...]}.
class Graph {
  public:
    Graph(int n, const std::vector<std::pair<int, int>>& edges) : adj_(n) {
        for (auto [u, v] : edges) add_edge(u, v);
        if (!connected()) throw std::invalid_argument("Graph: not connected");
    }

    static Graph from_json(const nlohmann::json& j) {
        int n = j.at("nodes").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        return Graph(n, edges);
    }

    nlohmann::json to_json() const {
        nlohmann::json edges = nlohmann::json::array();
        for (int u = 0; u < node_count(); ++u) {
            for (int v : adj_[u]) {
                if (u < v) edges.push_back({u, v});
            }
        }
        return {{"nodes", node_count()}, {"edges", edges}};
    }

    int node_count() const { return (int)adj_.size(); }
    const std::set<int>& neighbors(int v) const { return adj_.at(v); }

    /// BFS distances from the source; unreachable nodes get -1.
    std::vector<int> distances(int src) const {
        std::vector<int> dist(node_count(), -1);
        std::deque<int> queue{src};
        dist[src] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int u : adj_[v]) {
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        return dist;
    }

  private:
    void add_edge(int u, int v) {
        int n = node_count();
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loop");
        if (adj_[u].count(v)) throw std::invalid_argument("Graph: duplicate edge");
        adj_[u].insert(v);
        adj_[v].insert(u);
    }

    bool connected() const {
        if (node_count() == 0) return false;
        auto d = distances(0);
        for (int x : d)
            if (x < 0) return false;
        return true;
    }

    std::vector<std::set<int>> adj_;
};

/// The d nodes closest to f in graph distance, ties broken by ascending
/// node index.
inline std::vector<int> select_helpers(const Graph& g, int f, int d) {
    if (d > g.node_count() - 1) throw std::invalid_argument("select_helpers: d exceeds n-1");
    auto dist = g.distances(f);
    std::vector<int> order;
    for (int v = 0; v < g.node_count(); ++v)
        if (v != f) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    order.resize(d);
    std::sort(order.begin(), order.end());
    return order;
}

/// Shortest-path tree rooted at the failed node, restricted to the
/// subgraph induced by {f} and the helper set. Each helper's parent is
/// its lowest-index neighbor one BFS level closer to the root.
struct RepairTree {
    int root = -1;
    std::vector<int> helpers;                 // ascending
    std::map<int, int> parent;                // helper -> parent (root or helper)
    std::map<int, std::vector<int>> children; // node -> children, ascending
    std::map<int, int> subtree;               // helper -> |D*(v)|
    std::map<int, int> depth;                 // node -> BFS depth in induced subgraph

    /// Helpers ordered leaves-first, so each node appears after all of its
    /// children.
    std::vector<int> bottom_up() const {
        std::vector<int> order = helpers;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth.at(a) > depth.at(b); });
        return order;
    }
};

inline RepairTree build_repair_tree(const Graph& g, int f, const std::vector<int>& helpers) {
    std::set<int> members(helpers.begin(), helpers.end());
    if (members.count(f)) throw std::invalid_argument("build_repair_tree: failed node among helpers");
    members.insert(f);

    // BFS inside the induced subgraph.
    std::map<int, int> depth;
    std::deque<int> queue{f};
    depth[f] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : g.neighbors(v)) {
            if (members.count(u) && !depth.count(u)) {
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            }
        }
    }
    for (int h : helpers) {
        if (!depth.count(h)) throw std::invalid_argument("build_repair_tree: helper unreachable in induced subgraph");
    }

    RepairTree t;
    t.root = f;
    t.helpers = helpers;
    std::sort(t.helpers.begin(), t.helpers.end());
    t.depth = depth;
    for (int h : t.helpers) {
        int best = -1;
        for (int u : g.neighbors(h)) {
            if (members.count(u) && depth.at(u) == depth.at(h) - 1) {
                best = (best < 0) ? u : std::min(best, u);
            }
        }
        t.parent[h] = best;
        t.children[best].push_back(h);
    }
    // Descendant-inclusive subtree sizes, deepest nodes first.
    for (auto it = t.helpers.rbegin(); it != t.helpers.rend(); ++it) t.subtree[*it] = 1;
    auto order = t.bottom_up();
    for (int v : order) {
        int count = 1;
        for (int c : t.children.count(v) ? t.children.at(v) : std::vector<int>{}) count += t.subtree.at(c);
        t.subtree[v] = count;
    }
    return t;
}

}  // namespace grc
