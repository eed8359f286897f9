#pragma once

#include "grc/code_pm.hpp"
#include "grc/engine.hpp"
#include "grc/topology.hpp"

namespace grc {

/// Communication plan for a data collector with direct access to only a
/// subset of the chosen k nodes. The collector is a virtual node attached
/// to every access node; all traffic flows over the subgraph induced by
/// the chosen nodes plus those attachment edges. Ranks are assigned by
/// ascending distance from the collector (ties by node index) and the
/// rank-r node's quota under the bandwidth-optimal scheme is d - r.
struct RetrievalPlan {
    int dc = -1;
    int d = 0;
    std::vector<int> nodes;    // K, ascending
    std::vector<int> attach;   // direct-access subset, ascending
    std::map<int, int> parent; // toward the collector
    std::map<int, std::vector<int>> children;
    std::map<int, int> depth;  // attach nodes at depth 1
    std::vector<int> rank_order;
    std::map<int, long long> quota;
    std::map<int, int> subtree;  // nodes of K at or below, inclusive

    std::vector<int> bottom_up() const {
        std::vector<int> order = nodes;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth.at(a) > depth.at(b); });
        return order;
    }
};

inline RetrievalPlan plan_retrieval(const Graph& g, std::vector<int> nodes, std::vector<int> attach, int d) {
    std::sort(nodes.begin(), nodes.end());
    std::sort(attach.begin(), attach.end());
    std::set<int> in_k(nodes.begin(), nodes.end());
    if (in_k.size() != nodes.size()) throw std::invalid_argument("plan_retrieval: duplicate nodes");
    for (int a : attach) {
        if (!in_k.count(a)) throw std::invalid_argument("plan_retrieval: attachment node outside the chosen set");
    }
    if (attach.empty()) throw std::invalid_argument("plan_retrieval: empty attachment set");
    if ((int)nodes.size() > d) throw std::invalid_argument("plan_retrieval: need |K| <= d");

    RetrievalPlan plan;
    plan.dc = g.node_count();
    plan.d = d;
    plan.nodes = nodes;
    plan.attach = attach;

    std::deque<int> queue;
    for (int a : attach) {
        plan.depth[a] = 1;
        queue.push_back(a);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : g.neighbors(v)) {
            if (in_k.count(u) && !plan.depth.count(u)) {
                plan.depth[u] = plan.depth.at(v) + 1;
                queue.push_back(u);
            }
        }
    }
    for (int v : nodes) {
        if (!plan.depth.count(v)) throw std::invalid_argument("plan_retrieval: retrieval graph is disconnected");
    }
    for (int v : nodes) {
        if (plan.depth.at(v) == 1) {
            plan.parent[v] = plan.dc;
        } else {
            int best = -1;
            for (int u : g.neighbors(v)) {
                if (in_k.count(u) && plan.depth.at(u) == plan.depth.at(v) - 1) best = best < 0 ? u : std::min(best, u);
            }
            plan.parent[v] = best;
        }
        plan.children[plan.parent.at(v)].push_back(v);
    }
    plan.rank_order = nodes;
    std::stable_sort(plan.rank_order.begin(), plan.rank_order.end(),
                     [&](int a, int b) { return plan.depth.at(a) < plan.depth.at(b); });
    for (std::size_t r = 0; r < plan.rank_order.size(); ++r) plan.quota[plan.rank_order[r]] = d - (long long)r;
    for (int v : plan.bottom_up()) {
        int count = 1;
        if (plan.children.count(v)) {
            for (int c : plan.children.at(v)) count += plan.subtree.at(c);
        }
        plan.subtree[v] = count;
    }
    return plan;
}

struct RetrievalOutcome {
    BandwidthReport report;
    std::vector<u64> file;
};

/// Baseline: every chosen node forwards full columns toward the
/// collector, so an edge carries l symbols per node at or below it.
inline RetrievalOutcome retrieve_relay(const RepairableCode& code, const RetrievalPlan& plan) {
    CodeParams cp = code.params();
    RetrievalOutcome out;
    out.report.strategy = "relay";
    for (int v : plan.nodes) {
        long long symbols = cp.l * plan.subtree.at(v);
        out.report.per_edge.push_back({v, plan.parent.at(v), symbols});
        out.report.total_symbols += symbols;
    }
    out.report.lower_bound = Rational(retrieval_lower_bound((int)plan.nodes.size(), (int)plan.nodes.size(), cp.d,
                                                            cp.l, cp.beta));
    out.file = generic_retrieve(code, plan.nodes);
    out.report.verified = (out.file == code.file());
    return out;
}

/// Bandwidth-optimal collection for the symmetric-polynomial code at the
/// minimum-bandwidth corner: the rank-r node contributes its d-r
/// triangular evaluations and the collector edge carries exactly M
/// symbols in total.
inline RetrievalOutcome retrieve_mbr_optimal(const PmMbrCode& code, const RetrievalPlan& plan) {
    CodeParams cp = code.params();
    if ((int)plan.nodes.size() != cp.k) throw std::invalid_argument("retrieve_mbr_optimal: need k nodes");
    if (plan.d != cp.d) throw std::invalid_argument("retrieve_mbr_optimal: plan built for a different d");
    auto shares = code.triangular_shares(plan.rank_order);
    std::map<int, long long> quota_check;
    for (std::size_t r = 0; r < plan.rank_order.size(); ++r) {
        quota_check[plan.rank_order[r]] = (long long)shares[r].size();
    }
    RetrievalOutcome out;
    out.report.strategy = "optimal";
    for (int v : plan.nodes) {
        long long symbols = 0;
        // an edge moves the quotas of every node at or below its child end
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            symbols += quota_check.at(u);
            if (plan.children.count(u)) {
                for (int c : plan.children.at(u)) stack.push_back(c);
            }
        }
        out.report.per_edge.push_back({v, plan.parent.at(v), symbols});
        out.report.total_symbols += symbols;
    }
    out.report.lower_bound = Rational(retrieval_lower_bound(cp.k, cp.k, cp.d, cp.l, cp.beta));
    out.file = code.triangular_decode(plan.rank_order, shares);
    out.report.verified = (out.file == code.file());
    return out;
}

}  // namespace grc
