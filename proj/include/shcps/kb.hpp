#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shcps/error.hpp"
#include "shcps/utility.hpp"

namespace shcps {

using NodeId = std::string;

enum class NodeKind { Component, Parameter };

constexpr std::string_view to_string(NodeKind k) {
    return k == NodeKind::Component ? "component" : "parameter";
}

/// Per-hop attenuation of inherited guarantees, in (0, 1].
class Theta {
public:
    explicit Theta(double value) : value_(value) {
        if (!(value > 0.0 && value <= 1.0)) {
            throw Error(ErrorCode::InvalidTheta, "theta must lie in (0,1], got " + std::to_string(value));
        }
    }
    double value() const { return value_; }

private:
    double value_;
};

enum class GuaranteeOrigin { Intrinsic, Inherited, Decomposed };

constexpr std::string_view to_string(GuaranteeOrigin o) {
    switch (o) {
    case GuaranteeOrigin::Intrinsic: return "intrinsic";
    case GuaranteeOrigin::Inherited: return "inherited";
    case GuaranteeOrigin::Decomposed: return "decomposed";
    }
    return "?";
}

/// Guaranteed property levels of a node. `utility` is the scalar requirement
/// theta^hops * u(vector), fixed when the node is annotated.
struct Guarantee {
    PropertyVector vector;
    double utility = 0.0;
    unsigned hops = 0;
    GuaranteeOrigin origin = GuaranteeOrigin::Intrinsic;

    bool operator==(const Guarantee&) const = default;
};

struct Node {
    NodeId id;
    NodeKind kind = NodeKind::Component;
    bool available = true;
    std::optional<PropertyVector> properties;
    std::optional<Guarantee> guarantee;

    bool operator==(const Node&) const = default;
};

/// Provider -> consumer. The provider sits one level deeper in the hierarchy.
struct Edge {
    NodeId from;
    NodeId to;

    auto operator<=>(const Edge&) const = default;
};

/// Directed acyclic AND/OR graph of parameters and components.
///
/// Predecessors of a node are its providers, successors its consumers.
/// Internal (non-leaf) nodes alternate kinds along every edge; a leaf, i.e.
/// a node without providers, may feed a node of its own kind. Every mutation
/// keeps the graph acyclic and the alternation rule intact, and leaves the
/// graph untouched when it throws.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    explicit KnowledgeBase(UtilityModel model) : model_(std::move(model)) {}

    void add_node(Node node) {
        if (node.id.empty()) throw Error(ErrorCode::SchemaError, "node id must be non-empty");
        if (nodes_.count(node.id)) throw Error(ErrorCode::DuplicateId, "node '" + node.id + "' already exists");
        NodeId id = node.id;
        nodes_.emplace(id, std::move(node));
        preds_[id];
        succs_[id];
    }

    void add_edge(const NodeId& from, const NodeId& to) {
        require(from);
        require(to);
        if (from == to) throw Error(ErrorCode::CycleDetected, "self-loop on '" + from + "'");
        if (edges_.count(Edge{from, to})) {
            throw Error(ErrorCode::DuplicateEdge, "edge " + from + " -> " + to + " already exists");
        }
        if (reaches(to, from)) {
            throw Error(ErrorCode::CycleDetected, "edge " + from + " -> " + to + " closes a cycle");
        }
        const NodeKind kf = nodes_.at(from).kind;
        const NodeKind kt = nodes_.at(to).kind;
        if (!preds_.at(from).empty() && kf == kt) {
            throw Error(ErrorCode::KindViolation,
                        "internal " + std::string(to_string(kf)) + " '" + from + "' cannot feed " +
                            std::string(to_string(kt)) + " '" + to + "'");
        }
        // `to` stops being a leaf, so its existing outgoing edges become internal.
        if (preds_.at(to).empty()) {
            for (const auto& consumer : succs_.at(to)) {
                if (nodes_.at(consumer).kind == kt) {
                    throw Error(ErrorCode::KindViolation, "'" + to + "' would become internal while feeding '" +
                                                              consumer + "' of the same kind");
                }
            }
        }
        edges_.insert(Edge{from, to});
        preds_[to].insert(from);
        succs_[from].insert(to);
    }

    bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }

    const Node& node(const NodeId& id) const {
        require(id);
        return nodes_.at(id);
    }

    void set_available(const NodeId& id, bool available) {
        require(id);
        nodes_.at(id).available = available;
    }

    void set_guarantee(const NodeId& id, std::optional<Guarantee> g) {
        require(id);
        nodes_.at(id).guarantee = std::move(g);
    }

    void set_properties(const NodeId& id, std::optional<PropertyVector> p) {
        require(id);
        nodes_.at(id).properties = std::move(p);
    }

    void clear_guarantees() {
        for (auto& [id, n] : nodes_) n.guarantee.reset();
    }

    /// Providers of `id`, lexicographic.
    const std::set<NodeId>& predecessor_set(const NodeId& id) const {
        require(id);
        return preds_.at(id);
    }
    const std::set<NodeId>& successor_set(const NodeId& id) const {
        require(id);
        return succs_.at(id);
    }

    std::vector<NodeId> predecessors(const NodeId& id) const {
        const auto& s = predecessor_set(id);
        return {s.begin(), s.end()};
    }
    std::vector<NodeId> successors(const NodeId& id) const {
        const auto& s = successor_set(id);
        return {s.begin(), s.end()};
    }

    bool is_leaf(const NodeId& id) const { return predecessor_set(id).empty(); }

    /// True iff at least two distinct components provide the parameter
    /// `output`. Availability is not considered.
    bool is_implicitly_redundant(const NodeId& output) const {
        const Node& n = node(output);
        if (n.kind != NodeKind::Parameter) {
            throw Error(ErrorCode::NotAParameter, "'" + output + "' is a component");
        }
        std::size_t providers = 0;
        for (const auto& p : preds_.at(output)) {
            if (nodes_.at(p).kind == NodeKind::Component) ++providers;
        }
        return providers >= 2;
    }

    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const UtilityModel& utility_model() const { return model_; }

    /// u(P(n)) for property-bearing nodes; nodes without properties are
    /// transparent to the multiplicative aggregation and score 1.
    double intrinsic_utility(const NodeId& id) const {
        const Node& n = node(id);
        return n.properties ? model_.node_utility(*n.properties) : 1.0;
    }

    /// Provider edges selected by the last applied substitution.
    const std::set<Edge>& active_edges() const { return active_; }

    void activate(const std::vector<Edge>& edges) {
        for (const auto& e : edges) {
            if (!edges_.count(e)) throw Error(ErrorCode::InvalidSubstitution, "unknown edge " + e.from + " -> " + e.to);
        }
        for (const auto& e : edges) {
            // A parameter draws from exactly one active provider.
            if (nodes_.at(e.to).kind == NodeKind::Parameter) {
                std::erase_if(active_, [&](const Edge& a) { return a.to == e.to; });
            }
        }
        active_.insert(edges.begin(), edges.end());
    }

    /// Full structural check used after bulk loads: acyclicity, kind
    /// alternation on internal edges and properties on every leaf.
    void validate() const {
        for (const auto& e : edges_) {
            if (!nodes_.count(e.from) || !nodes_.count(e.to)) {
                throw Error(ErrorCode::SchemaError, "edge " + e.from + " -> " + e.to + " has a missing endpoint");
            }
        }
        topological_order();
        for (const auto& e : edges_) {
            if (!preds_.at(e.from).empty() && nodes_.at(e.from).kind == nodes_.at(e.to).kind) {
                throw Error(ErrorCode::KindViolation, "internal edge " + e.from + " -> " + e.to + " joins two " +
                                                          std::string(to_string(nodes_.at(e.to).kind)) + "s");
            }
        }
        for (const auto& [id, n] : nodes_) {
            if (preds_.at(id).empty() && !n.properties) {
                throw Error(ErrorCode::SchemaError, "leaf '" + id + "' carries no properties");
            }
        }
        for (const auto& e : active_) {
            if (!edges_.count(e)) throw Error(ErrorCode::SchemaError, "active edge " + e.from + " -> " + e.to + " is not an edge");
        }
    }

    /// Providers before consumers; ties resolved lexicographically.
    std::vector<NodeId> topological_order() const {
        std::map<NodeId, std::size_t> indegree;
        for (const auto& [id, n] : nodes_) indegree[id] = preds_.at(id).size();
        std::set<NodeId> ready;
        for (const auto& [id, d] : indegree) {
            if (d == 0) ready.insert(id);
        }
        std::vector<NodeId> order;
        order.reserve(nodes_.size());
        while (!ready.empty()) {
            NodeId id = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(id);
            for (const auto& s : succs_.at(id)) {
                if (--indegree[s] == 0) ready.insert(s);
            }
        }
        if (order.size() != nodes_.size()) throw Error(ErrorCode::CycleDetected, "knowledge base contains a cycle");
        return order;
    }

    bool operator==(const KnowledgeBase& other) const {
        return model_ == other.model_ && nodes_ == other.nodes_ && edges_ == other.edges_ && active_ == other.active_;
    }

private:
    void require(const NodeId& id) const {
        if (!nodes_.count(id)) throw Error(ErrorCode::UnknownNode, "no node '" + id + "'");
    }

    // Is `target` reachable from `start` along provider -> consumer edges?
    bool reaches(const NodeId& start, const NodeId& target) const {
        if (preds_.at(target).empty() && start != target) {
            // nothing flows into target, so nothing reaches it
            return false;
        }
        std::vector<const NodeId*> stack{&start};
        std::set<NodeId> seen{start};
        while (!stack.empty()) {
            const NodeId& cur = *stack.back();
            stack.pop_back();
            if (cur == target) return true;
            for (const auto& s : succs_.at(cur)) {
                if (seen.insert(s).second) stack.push_back(&s);
            }
        }
        return false;
    }

    UtilityModel model_;
    std::map<NodeId, Node> nodes_;
    std::set<Edge> edges_;
    std::map<NodeId, std::set<NodeId>> preds_;
    std::map<NodeId, std::set<NodeId>> succs_;
    std::set<Edge> active_;
};

} // namespace shcps
