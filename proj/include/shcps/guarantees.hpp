#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "shcps/error.hpp"
#include "shcps/kb.hpp"

namespace shcps {

enum class GuaranteeMode {
    Inherit,   ///< bottom-up from providers, per-property minimum
    Decompose, ///< top-down from consumers, per-property maximum
};

constexpr std::string_view to_string(GuaranteeMode m) {
    return m == GuaranteeMode::Inherit ? "inherit" : "decompose";
}

/// Work counters of one annotation pass.
struct AnnotationReport {
    std::size_t nodes_computed = 0;  ///< guarantees assigned in this pass
    std::size_t nodes_touched = 0;   ///< distinct nodes read, computed or reused
    std::size_t edges_traversed = 0; ///< edges folded into a guarantee
    std::vector<NodeId> no_source;   ///< nodes left unannotated, lexicographic

    AnnotationReport& operator+=(const AnnotationReport& o) {
        nodes_computed += o.nodes_computed;
        nodes_touched += o.nodes_touched;
        edges_traversed += o.edges_traversed;
        no_source.insert(no_source.end(), o.no_source.begin(), o.no_source.end());
        return *this;
    }
};

namespace detail {

/// One annotation sweep. Guarantees already present in the knowledge base
/// are terminal values and are never recomputed, so annotating a node whose
/// neighbours are annotated costs one node plus its incident edges.
class GuaranteeSweep {
public:
    GuaranteeSweep(KnowledgeBase& kb, Theta theta, GuaranteeMode mode) : kb_(kb), theta_(theta), mode_(mode) {}

    /// Returns false when `start` has no source to derive a guarantee from.
    bool run(const NodeId& start) {
        if (resolved(start)) {
            touch(start);
            return kb_.node(start).guarantee.has_value();
        }
        std::vector<Frame> stack;
        stack.push_back(open(start));
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.done) {
                stack.pop_back();
                continue;
            }
            bool descended = false;
            while (f.it != f.end) {
                const NodeId& m = *f.it;
                if (!resolved(m)) {
                    Frame child = open(m);
                    if (!child.done) {
                        stack.push_back(std::move(child));
                        descended = true;
                        break;
                    }
                }
                fold(f, m);
                ++f.it;
            }
            if (descended) continue;
            finish(stack.back());
            stack.pop_back();
        }
        return kb_.node(start).guarantee.has_value();
    }

    AnnotationReport report() const {
        AnnotationReport r = counters_;
        r.nodes_touched = touched_.size();
        r.no_source.assign(failed_.begin(), failed_.end());
        return r;
    }

private:
    struct Frame {
        NodeId id;
        std::set<NodeId>::const_iterator it;
        std::set<NodeId>::const_iterator end;
        PropertyVector vector;
        unsigned max_hops = 0;
        bool any = false;
        bool done = false;
    };

    bool resolved(const NodeId& id) const { return kb_.node(id).guarantee.has_value() || failed_.count(id); }

    void touch(const NodeId& id) { touched_.insert(id); }

    const std::set<NodeId>& neighbours(const NodeId& id) const {
        return mode_ == GuaranteeMode::Inherit ? kb_.predecessor_set(id) : kb_.successor_set(id);
    }

    // Intrinsic and source-less nodes are settled immediately.
    Frame open(const NodeId& id) {
        touch(id);
        Frame f;
        f.id = id;
        const Node& n = kb_.node(id);
        if (n.properties) {
            Guarantee g;
            g.vector = *n.properties;
            g.hops = 0;
            g.origin = GuaranteeOrigin::Intrinsic;
            g.utility = kb_.utility_model().node_utility(g.vector);
            kb_.set_guarantee(id, std::move(g));
            ++counters_.nodes_computed;
            f.done = true;
            return f;
        }
        const auto& nb = neighbours(id);
        if (nb.empty()) {
            failed_.insert(id);
            f.done = true;
            return f;
        }
        f.it = nb.begin();
        f.end = nb.end();
        return f;
    }

    void fold(Frame& f, const NodeId& m) {
        touch(m);
        ++counters_.edges_traversed;
        const auto& g = kb_.node(m).guarantee;
        if (!g) return;
        for (const auto& [name, value] : g->vector) {
            auto cur = f.vector.get(name);
            if (!cur) {
                f.vector.set(name, value);
            } else if (mode_ == GuaranteeMode::Inherit ? value < *cur : value > *cur) {
                f.vector.set(name, value);
            }
        }
        f.max_hops = f.any ? std::max(f.max_hops, g->hops) : g->hops;
        f.any = true;
    }

    void finish(Frame& f) {
        if (!f.any) {
            failed_.insert(f.id);
            return;
        }
        Guarantee g;
        g.hops = f.max_hops + 1;
        g.vector = std::move(f.vector);
        g.origin = mode_ == GuaranteeMode::Inherit ? GuaranteeOrigin::Inherited : GuaranteeOrigin::Decomposed;
        g.utility = std::pow(theta_.value(), static_cast<double>(g.hops)) * kb_.utility_model().node_utility(g.vector);
        kb_.set_guarantee(f.id, std::move(g));
        ++counters_.nodes_computed;
    }

    KnowledgeBase& kb_;
    Theta theta_;
    GuaranteeMode mode_;
    AnnotationReport counters_;
    std::set<NodeId> touched_;
    std::set<NodeId> failed_;
};

inline Guarantee annotate_one(KnowledgeBase& kb, const NodeId& n, Theta theta, GuaranteeMode mode,
                              AnnotationReport* report) {
    if (kb.node(n).guarantee) throw Error(ErrorCode::AlreadyAnnotated, "'" + n + "' already carries a guarantee");
    GuaranteeSweep sweep(kb, theta, mode);
    const bool ok = sweep.run(n);
    if (report) *report = sweep.report();
    if (!ok) {
        throw Error(ErrorCode::NoSource, "'" + n + "' has neither properties nor a guaranteed " +
                                             (mode == GuaranteeMode::Inherit ? "provider" : "consumer"));
    }
    return *kb.node(n).guarantee;
}

} // namespace detail

/// Bottom-up guarantee: P(n) when defined, otherwise the per-property
/// minimum over the providers' guarantees (computed on demand), attenuated
/// by theta once per hop. Unannotated providers are annotated as a side
/// effect.
inline Guarantee inherit_guarantee(KnowledgeBase& kb, const NodeId& n, Theta theta,
                                   AnnotationReport* report = nullptr) {
    return detail::annotate_one(kb, n, theta, GuaranteeMode::Inherit, report);
}

/// Top-down mirror of inherit_guarantee: consumers' requirements are
/// combined with a per-property maximum.
inline Guarantee decompose_guarantee(KnowledgeBase& kb, const NodeId& n, Theta theta,
                                     AnnotationReport* report = nullptr) {
    return detail::annotate_one(kb, n, theta, GuaranteeMode::Decompose, report);
}

/// Annotates every node. Existing guarantees are kept and reused; call
/// `KnowledgeBase::clear_guarantees()` first to re-annotate under a new
/// theta. Nodes without a source are listed in the report and skipped.
inline AnnotationReport annotate_all(KnowledgeBase& kb, Theta theta, GuaranteeMode mode) {
    detail::GuaranteeSweep sweep(kb, theta, mode);
    for (const auto& [id, n] : kb.nodes()) sweep.run(id);
    return sweep.report();
}

/// Recomputes the scalar for `g` under `theta`; used to check that an
/// annotation was produced with a given theta.
inline bool annotated_with(const KnowledgeBase& kb, const Guarantee& g, Theta theta) {
    const double expected =
        std::pow(theta.value(), static_cast<double>(g.hops)) * kb.utility_model().node_utility(g.vector);
    return std::abs(expected - g.utility) <= 1e-12;
}

} // namespace shcps
