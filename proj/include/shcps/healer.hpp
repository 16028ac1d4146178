#pragma once

#include <chrono>
#include <optional>
#include <utility>

#include "shcps/error.hpp"
#include "shcps/guarantees.hpp"
#include "shcps/kb.hpp"
#include "shcps/search.hpp"

namespace shcps {

struct FaultEvent {
    NodeId node;
    double timestamp = 0.0; ///< monotonic seconds
};

struct RecoveryReport {
    FaultEvent fault;
    Strategy strategy;
    double theta = 1.0;
    double requirement = 0.0; ///< guarantee utility of the failed node
    SearchOutcome outcome;
    std::optional<Substitution> applied;
    bool compliant = false;
    /// Inherited guarantee of the failed node over the applied subgraph.
    std::optional<double> post_guarantee;
    double search_elapsed = 0.0;
};

inline double monotonic_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

inline std::pair<KnowledgeBase, FaultEvent> inject_fault(const KnowledgeBase& kb, const NodeId& node) {
    if (!kb.node(node).available) throw Error(ErrorCode::AlreadyFailed, "'" + node + "' is already unavailable");
    KnowledgeBase out = kb;
    out.set_available(node, false);
    return {std::move(out), FaultEvent{node, monotonic_seconds()}};
}

namespace detail {

inline double subgraph_guarantee(const KnowledgeBase& kb, const Substitution& s, Theta theta) {
    KnowledgeBase sub(kb.utility_model());
    for (const auto& id : s.nodes) {
        Node n = kb.node(id);
        n.guarantee.reset();
        sub.add_node(std::move(n));
    }
    for (const auto& e : s.edges) sub.add_edge(e.from, e.to);
    return inherit_guarantee(sub, s.root, theta).utility;
}

} // namespace detail

/// Searches for a substitution of the failed node and applies the preferred
/// one. Compliance requires its utility to meet the failed node's guarantee,
/// which must have been annotated under `theta`. When `healed` is given it
/// receives the knowledge base with the substitution's edges activated.
inline RecoveryReport recover(const KnowledgeBase& kb, const FaultEvent& fault, const Strategy& strategy, Theta theta,
                              KnowledgeBase* healed = nullptr) {
    const Node& failed = kb.node(fault.node);
    if (failed.available) throw Error(ErrorCode::NotFailed, "'" + fault.node + "' is still available");
    if (!failed.guarantee || !annotated_with(kb, *failed.guarantee, theta)) {
        throw Error(ErrorCode::NotAnnotated,
                    "'" + fault.node + "' has no guarantee for theta " + std::to_string(theta.value()));
    }

    RecoveryReport r;
    r.fault = fault;
    r.strategy = strategy;
    r.theta = theta.value();
    const Requirement requirement{failed.guarantee->utility};
    r.requirement = requirement.threshold;
    r.outcome = SearchContext(kb).search(strategy, fault.node, requirement);
    r.search_elapsed = r.outcome.elapsed;

    if (r.outcome.best) {
        r.applied = r.outcome.best;
        r.compliant = requirement.satisfied_by(r.applied->utility);
        KnowledgeBase out = apply_substitution(kb, *r.applied);
        r.post_guarantee = detail::subgraph_guarantee(kb, *r.applied, theta);
        if (healed) *healed = std::move(out);
    } else if (healed) {
        *healed = kb;
    }
    return r;
}

/// Monitor/execute loop over one knowledge base: faults are injected
/// explicitly, guarantees are (re)annotated by inheritance under the
/// healer's theta, and each recovery activates the applied substitution.
class Healer {
public:
    Healer(KnowledgeBase kb, Theta theta) : kb_(std::move(kb)), theta_(theta) { reannotate(); }

    FaultEvent inject(const NodeId& node) {
        auto [kb, event] = inject_fault(kb_, node);
        kb_ = std::move(kb);
        return event;
    }

    RecoveryReport recover(const FaultEvent& fault, const Strategy& strategy) {
        KnowledgeBase healed;
        RecoveryReport r = shcps::recover(kb_, fault, strategy, theta_, &healed);
        kb_ = std::move(healed);
        return r;
    }

    const KnowledgeBase& knowledge_base() const { return kb_; }
    Theta theta() const { return theta_; }

private:
    void reannotate() {
        kb_.clear_guarantees();
        annotate_all(kb_, theta_, GuaranteeMode::Inherit);
    }

    KnowledgeBase kb_;
    Theta theta_;
};

} // namespace shcps
