#pragma once

// Shared helpers for the test binaries: tiny hand-built knowledge bases, a
// random layered DAG builder and a brute-force substitution oracle that
// shares no code with the search module.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "shcps/shcps.hpp"

namespace testing_support {

using namespace shcps;

inline Node param(const std::string& id) { return Node{id, NodeKind::Parameter, true, std::nullopt, std::nullopt}; }
inline Node comp(const std::string& id) { return Node{id, NodeKind::Component, true, std::nullopt, std::nullopt}; }
inline Node comp(const std::string& id, PropertyVector p) {
    return Node{id, NodeKind::Component, true, std::move(p), std::nullopt};
}
inline Node param(const std::string& id, PropertyVector p) {
    return Node{id, NodeKind::Parameter, true, std::move(p), std::nullopt};
}

/// Scores exactly 1 under the distance-sensing model.
inline PropertyVector perfect_sensor() {
    return {{"Range", 10.0}, {"Acc", 100.0}, {"HFOV", 360.0}, {"Freq", 500.0}};
}

/// Single-property model: utility of {"q": v} is v / 100.
inline UtilityModel q_model() { return UtilityModel({{"q", 1.0}}, {{"q", 100.0}}); }
inline PropertyVector q(double v) { return {{"q", v}}; }

/// Layered DAG: layer 0 is a single root parameter, kinds alternate by
/// layer, every node of layer k+1 feeds one to `fan` nodes of layer k.
/// Nodes that end up without providers carry random q properties, and a
/// few non-root nodes are marked unavailable.
inline KnowledgeBase random_dag(std::mt19937_64& rng, unsigned layers, unsigned width, unsigned fan,
                                double unavailable = 0.1) {
    KnowledgeBase kb(q_model());
    std::uniform_int_distribution<unsigned> w(1, width);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<std::string>> level(layers + 1);
    level[0] = {"r"};
    kb.add_node(param("r"));
    for (unsigned k = 1; k <= layers; ++k) {
        const unsigned count = w(rng);
        for (unsigned i = 0; i < count; ++i) {
            std::string id = "L" + std::to_string(k) + "_" + std::to_string(i);
            kb.add_node(k % 2 == 0 ? param(id) : comp(id));
            level[k].push_back(id);
            std::vector<std::string> targets = level[k - 1];
            std::shuffle(targets.begin(), targets.end(), rng);
            const unsigned n = std::uniform_int_distribution<unsigned>(1, std::max(1u, fan))(rng);
            for (unsigned j = 0; j < n && j < targets.size(); ++j) kb.add_edge(id, targets[j]);
        }
    }
    for (const auto& [id, node] : kb.nodes()) {
        if (kb.is_leaf(id)) kb.set_properties(id, q(std::floor(unit(rng) * 100.0) + 1.0));
        if (id != "r" && unit(rng) < unavailable) kb.set_available(id, false);
    }
    return kb;
}

struct OracleSub {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    double utility = 0.0;
    bool operator<(const OracleSub& o) const { return std::tie(nodes, edges) < std::tie(o.nodes, o.edges); }
};

/// Brute force over provider choices: breadth-first over a FIFO of reached
/// but unexpanded nodes, branching on the provider of every reached
/// parameter. A candidate is kept when all its non-root members are
/// available. Results are collected as sets, so ordering plays no role.
inline void oracle_expand(const KnowledgeBase& kb, const NodeId& root, std::set<NodeId> seen, std::set<Edge> edges,
                          std::deque<NodeId> queue, std::set<OracleSub>& out) {
    while (!queue.empty()) {
        const NodeId n = queue.front();
        queue.pop_front();
        if (n != root && !kb.node(n).available) return;
        if (kb.is_leaf(n)) continue;
        if (kb.node(n).kind == NodeKind::Parameter) {
            for (const auto& m : kb.predecessors(n)) {
                auto s2 = seen;
                auto e2 = edges;
                auto q2 = queue;
                e2.insert(Edge{m, n});
                if (s2.insert(m).second) q2.push_back(m);
                oracle_expand(kb, root, std::move(s2), std::move(e2), std::move(q2), out);
            }
            return;
        }
        for (const auto& m : kb.predecessors(n)) {
            edges.insert(Edge{m, n});
            if (seen.insert(m).second) queue.push_back(m);
        }
    }
    OracleSub s;
    s.nodes.assign(seen.begin(), seen.end());
    s.edges.assign(edges.begin(), edges.end());
    s.utility = 1.0;
    for (const auto& m : s.nodes) {
        if (m != root) s.utility *= kb.intrinsic_utility(m);
    }
    out.insert(std::move(s));
}

inline std::set<OracleSub> oracle_substitutions(const KnowledgeBase& kb, const NodeId& root) {
    std::set<OracleSub> out;
    if (kb.is_leaf(root)) return out;
    oracle_expand(kb, root, {root}, {}, {root}, out);
    return out;
}

/// Independent count for trees: OR sums, AND multiplies, unavailable
/// providers contribute nothing.
inline double tree_count(const KnowledgeBase& kb, const NodeId& n, bool is_root = true) {
    if (!is_root && !kb.node(n).available) return 0.0;
    const auto preds = kb.predecessors(n);
    if (preds.empty()) return is_root ? 0.0 : 1.0;
    if (kb.node(n).kind == NodeKind::Parameter) {
        double s = 0.0;
        for (const auto& p : preds) s += tree_count(kb, p, false);
        return s;
    }
    double s = 1.0;
    for (const auto& p : preds) s *= tree_count(kb, p, false);
    return s;
}

inline std::vector<NodeId> sorted_ids(std::vector<NodeId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace testing_support
