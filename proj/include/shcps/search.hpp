#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shcps/error.hpp"
#include "shcps/kb.hpp"

namespace shcps {

enum class Algorithm { Dfs, Orr, Shpgsa };

/// A search algorithm, optionally constrained by the failed node's guarantee
/// (the "G" variants: DFSG, ORRG, SHPGSAG).
struct Strategy {
    Algorithm algorithm = Algorithm::Dfs;
    bool guarded = false;

    std::string name() const {
        std::string base = algorithm == Algorithm::Dfs ? "DFS" : algorithm == Algorithm::Orr ? "ORR" : "SHPGSA";
        return guarded ? base + "G" : base;
    }

    /// Accepts dfs|orr|shpgsa with an optional trailing "g", any case.
    static Strategy parse(std::string text) {
        for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        Strategy s;
        if (text.size() > 1 && text.back() == 'g') {
            s.guarded = true;
            text.pop_back();
        }
        if (text == "dfs") s.algorithm = Algorithm::Dfs;
        else if (text == "orr") s.algorithm = Algorithm::Orr;
        else if (text == "shpgsa") s.algorithm = Algorithm::Shpgsa;
        else throw Error(ErrorCode::ConfigError, "unknown strategy '" + text + "'");
        return s;
    }

    static std::vector<Strategy> all() {
        return {{Algorithm::Orr, false},   {Algorithm::Shpgsa, false}, {Algorithm::Dfs, false},
                {Algorithm::Orr, true},    {Algorithm::Shpgsa, true},  {Algorithm::Dfs, true}};
    }

    bool operator==(const Strategy&) const = default;
};

/// Minimum substitution utility, taken from the failed node's guarantee.
struct Requirement {
    double threshold = 0.0;

    bool satisfied_by(double utility) const { return utility >= threshold - kUtilityEpsilon; }
};

inline Requirement requirement_for(const KnowledgeBase& kb, const NodeId& failed) {
    const auto& g = kb.node(failed).guarantee;
    if (!g) throw Error(ErrorCode::NotAnnotated, "'" + failed + "' carries no guarantee");
    return Requirement{g->utility};
}

/// Acyclic subgraph rooted at a failed node: every non-leaf parameter in it
/// draws from exactly one provider, every non-leaf component from all of its
/// inputs. Nodes and edges are kept sorted.
struct Substitution {
    NodeId root;
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;
    double utility = 0.0;

    bool operator==(const Substitution&) const = default;
};

/// Higher utility first; equal utilities prefer the lexicographically
/// smaller sorted node sequence.
inline bool preferred(const Substitution& a, const Substitution& b) {
    if (a.utility != b.utility) return a.utility > b.utility;
    return a.nodes < b.nodes;
}

struct SearchOutcome {
    Strategy strategy;
    NodeId failed;
    std::optional<Requirement> requirement;
    std::vector<Substitution> substitutions;
    std::optional<Substitution> best;
    std::size_t explored = 0; ///< partial candidates examined
    double elapsed = 0.0;     ///< seconds, monotonic clock
};

/// Worker abandoned by SHPGSAG because even its optimistic completion fell
/// below the requirement.
struct AbortedWorker {
    std::vector<NodeId> included;
    std::vector<Edge> edges;
    std::vector<NodeId> unresolved;
    double partial = 0.0;
    double bound = 0.0;
};

struct SearchTrace {
    std::vector<AbortedWorker> aborted;
};

namespace detail {

using Index = std::uint32_t;
using IndexEdge = std::pair<Index, Index>;

/// Dense, read-only view of a knowledge base. Indices follow the
/// lexicographic order of node ids, so sorted index sequences compare like
/// sorted id sequences.
struct CompiledGraph {
    std::vector<NodeId> ids;
    std::vector<NodeKind> kind;
    std::vector<char> available;
    std::vector<double> utility;
    std::vector<std::vector<Index>> preds;
    std::vector<Index> succ_count;
    std::vector<Index> topo; // providers first

    explicit CompiledGraph(const KnowledgeBase& kb) {
        const std::size_t n = kb.node_count();
        ids.reserve(n);
        for (const auto& [id, node] : kb.nodes()) {
            ids.push_back(id);
            kind.push_back(node.kind);
            available.push_back(node.available ? 1 : 0);
            utility.push_back(kb.intrinsic_utility(id));
        }
        preds.resize(n);
        succ_count.assign(n, 0);
        for (Index i = 0; i < n; ++i) {
            for (const auto& p : kb.predecessor_set(ids[i])) {
                preds[i].push_back(index(p));
                ++succ_count[preds[i].back()];
            }
        }
        for (const auto& id : kb.topological_order()) topo.push_back(index(id));
    }

    Index index(const NodeId& id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id) throw Error(ErrorCode::UnknownNode, "no node '" + id + "'");
        return static_cast<Index>(it - ids.begin());
    }

    std::size_t size() const { return ids.size(); }
    bool is_leaf(Index i) const { return preds[i].empty(); }
};

struct IndexedSubstitution {
    std::vector<Index> nodes; // sorted
    std::vector<IndexEdge> edges;
    double utility = 0.0;
};

inline bool preferred(const IndexedSubstitution& a, const IndexedSubstitution& b) {
    if (a.utility != b.utility) return a.utility > b.utility;
    return a.nodes < b.nodes;
}

/// Canonical form: sorted members, utility multiplied in index order over
/// every member but the root, so equal subgraphs always get bit-equal
/// utilities regardless of how they were built.
inline IndexedSubstitution canonical(const CompiledGraph& g, Index root, std::vector<Index> nodes,
                                     std::vector<IndexEdge> edges) {
    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    double u = 1.0;
    for (Index n : nodes) {
        if (n != root) u *= g.utility[n];
    }
    return {std::move(nodes), std::move(edges), u};
}

inline Substitution materialize(const CompiledGraph& g, Index root, const IndexedSubstitution& s) {
    Substitution out;
    out.root = g.ids[root];
    out.utility = s.utility;
    out.nodes.reserve(s.nodes.size());
    for (Index n : s.nodes) out.nodes.push_back(g.ids[n]);
    out.edges.reserve(s.edges.size());
    for (const auto& [a, b] : s.edges) out.edges.push_back(Edge{g.ids[a], g.ids[b]});
    return out;
}

inline std::uint64_t fingerprint(const IndexedSubstitution& s) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    for (Index n : s.nodes) mix(n);
    mix(0xffffffffull);
    for (const auto& [a, b] : s.edges) mix((std::uint64_t(a) << 32) | b);
    return h;
}

/// Depth-first construction of substitutions. Unresolved nodes sit on an
/// agenda stack; a parameter branches over its available providers in
/// lexicographic order, a component pulls in all of its inputs at once.
/// With a threshold, partial candidates whose running utility has already
/// dropped below it are cut: node utilities never exceed 1, so no
/// completion could recover.
class Enumerator {
public:
    /// Return true from the sink to stop the search.
    using Sink = std::function<bool(IndexedSubstitution&&)>;

    Enumerator(const CompiledGraph& g, Index root, std::optional<double> threshold)
        : g_(g), root_(root), threshold_(threshold), in_(g.size(), 0) {}

    void run(const Sink& sink) {
        sink_ = &sink;
        if (g_.is_leaf(root_)) return;
        in_[root_] = 1;
        included_.push_back(root_);
        agenda_.push_back(root_);
        expand(1.0);
    }

    std::size_t explored() const { return explored_; }
    std::size_t pruned() const { return pruned_; }

private:
    bool expand(double partial) {
        ++explored_;
        if (threshold_ && partial < *threshold_ - kUtilityEpsilon) {
            ++pruned_;
            return false;
        }
        if (agenda_.empty()) return (*sink_)(canonical(g_, root_, included_, edges_));

        const Index n = agenda_.back();
        agenda_.pop_back();
        bool stop = false;
        if (g_.kind[n] == NodeKind::Parameter) {
            for (Index p : g_.preds[n]) {
                if (!g_.available[p]) continue;
                edges_.emplace_back(p, n);
                if (in_[p]) {
                    stop = expand(partial);
                } else {
                    include(p);
                    stop = expand(partial * g_.utility[p]);
                    exclude(p);
                }
                edges_.pop_back();
                if (stop) break;
            }
        } else {
            const auto& inputs = g_.preds[n];
            const bool feasible =
                std::all_of(inputs.begin(), inputs.end(), [&](Index q) { return g_.available[q] != 0; });
            if (feasible) {
                const std::size_t edge_mark = edges_.size();
                const std::size_t inc_mark = included_.size();
                const std::size_t agenda_mark = agenda_.size();
                double next = partial;
                // reverse push: the smallest input is resolved first
                for (auto it = inputs.rbegin(); it != inputs.rend(); ++it) {
                    edges_.emplace_back(*it, n);
                    if (!in_[*it]) {
                        include(*it);
                        next *= g_.utility[*it];
                    }
                }
                stop = expand(next);
                for (std::size_t i = inc_mark; i < included_.size(); ++i) in_[included_[i]] = 0;
                included_.resize(inc_mark);
                agenda_.resize(agenda_mark);
                edges_.resize(edge_mark);
            }
        }
        agenda_.push_back(n);
        return stop;
    }

    void include(Index p) {
        in_[p] = 1;
        included_.push_back(p);
        if (!g_.is_leaf(p)) agenda_.push_back(p);
    }

    void exclude(Index p) {
        if (!g_.is_leaf(p)) agenda_.pop_back();
        included_.pop_back();
        in_[p] = 0;
    }

    const CompiledGraph& g_;
    Index root_;
    std::optional<double> threshold_;
    const Sink* sink_ = nullptr;
    std::vector<char> in_;
    std::vector<Index> included_;
    std::vector<IndexEdge> edges_;
    std::vector<Index> agenda_;
    std::size_t explored_ = 0;
    std::size_t pruned_ = 0;
};

/// Best achievable product of utilities strictly below each node, used as
/// an optimistic completion estimate. Where two consumers may share a
/// provider the product could count that provider twice and underestimate,
/// so such regions fall back to the trivial estimate 1.
struct CompletionBounds {
    std::vector<double> best;
    std::vector<char> feasible;

    explicit CompletionBounds(const CompiledGraph& g) : best(g.size(), 1.0), feasible(g.size(), 1) {
        std::vector<char> shared(g.size(), 0);
        for (Index n : g.topo) {
            if (g.is_leaf(n)) continue;
            bool sh = false;
            for (Index q : g.preds[n]) sh = sh || shared[q] || g.succ_count[q] > 1;
            shared[n] = sh;
            if (g.kind[n] == NodeKind::Parameter) {
                double b = 0.0;
                bool f = false;
                for (Index p : g.preds[n]) {
                    if (!g.available[p] || !feasible[p]) continue;
                    f = true;
                    b = std::max(b, g.utility[p] * best[p]);
                }
                feasible[n] = f;
                best[n] = b;
            } else {
                double b = 1.0;
                bool f = true;
                for (Index q : g.preds[n]) {
                    f = f && g.available[q] && feasible[q];
                    b *= g.utility[q] * best[q];
                }
                feasible[n] = f;
                best[n] = f ? b : 0.0;
            }
            if (sh && feasible[n]) best[n] = 1.0;
        }
    }
};

/// Best-first search over partial substitutions ("workers"). A worker's
/// priority is its optimistic bound; the first completed worker popped is
/// optimal, and remaining workers within the tie window are drained so the
/// lexicographic tie rule matches exhaustive enumeration.
class WorkerSearch {
public:
    WorkerSearch(const CompiledGraph& g, const CompletionBounds& bounds, Index root, std::optional<double> threshold,
                 SearchTrace* trace)
        : g_(g), root_(root), threshold_(threshold), trace_(trace), bounds_(bounds) {}

    std::optional<IndexedSubstitution> run() {
        if (g_.is_leaf(root_) || !bounds_.feasible[root_]) return std::nullopt;
        Worker w0;
        w0.included = {root_};
        w0.agenda = {root_};
        w0.partial = 1.0;
        w0.bound = bounds_.best[root_];
        offer(std::move(w0));

        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), lower_priority);
            Worker w = std::move(heap_.back());
            heap_.pop_back();
            ++explored_;
            if (best_ && w.bound < best_->utility - kUtilityEpsilon) break;
            if (w.agenda.empty()) {
                IndexedSubstitution s = canonical(g_, root_, w.included, w.edges);
                if (threshold_ && s.utility < *threshold_ - kUtilityEpsilon) continue;
                if (!best_ || preferred(s, *best_)) best_ = std::move(s);
                continue;
            }
            expand(std::move(w));
        }
        return best_;
    }

    std::size_t explored() const { return explored_; }

private:
    struct Worker {
        std::vector<Index> included; // sorted
        std::vector<IndexEdge> edges;
        std::vector<Index> agenda;
        double partial = 1.0;
        double bound = 1.0;
        std::uint64_t seq = 0;
    };

    // Max-heap order: bound, then the more complete worker, then the
    // lexicographically smaller member set, then creation order.
    static bool lower_priority(const Worker& a, const Worker& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.included.size() != b.included.size()) return a.included.size() < b.included.size();
        if (a.included != b.included) return a.included > b.included;
        return a.seq > b.seq;
    }

    static bool contains(const std::vector<Index>& sorted, Index x) {
        return std::binary_search(sorted.begin(), sorted.end(), x);
    }

    static void insert_sorted(std::vector<Index>& sorted, Index x) {
        sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
    }

    void expand(Worker w) {
        const Index n = w.agenda.back();
        w.agenda.pop_back();
        if (g_.kind[n] == NodeKind::Parameter) {
            for (Index p : g_.preds[n]) {
                if (!g_.available[p] || !bounds_.feasible[p]) continue;
                Worker c = w;
                c.edges.emplace_back(p, n);
                if (!contains(c.included, p)) add(c, p);
                offer(std::move(c));
            }
        } else {
            Worker c = std::move(w);
            const auto& inputs = g_.preds[n];
            for (auto it = inputs.rbegin(); it != inputs.rend(); ++it) {
                if (!g_.available[*it] || !bounds_.feasible[*it]) return;
                c.edges.emplace_back(*it, n);
                if (!contains(c.included, *it)) add(c, *it);
            }
            offer(std::move(c));
        }
    }

    void add(Worker& c, Index p) {
        insert_sorted(c.included, p);
        c.partial *= g_.utility[p];
        if (!g_.is_leaf(p)) c.agenda.push_back(p);
    }

    void offer(Worker c) {
        double bound = c.partial;
        for (Index a : c.agenda) bound *= bounds_.best[a];
        c.bound = bound;
        if (threshold_ && bound < *threshold_ - kUtilityEpsilon) {
            if (trace_) trace_->aborted.push_back(describe(c));
            return;
        }
        if (best_ && bound < best_->utility - kUtilityEpsilon) return;
        c.seq = next_seq_++;
        heap_.push_back(std::move(c));
        std::push_heap(heap_.begin(), heap_.end(), lower_priority);
    }

    AbortedWorker describe(const Worker& c) const {
        AbortedWorker a;
        for (Index i : c.included) a.included.push_back(g_.ids[i]);
        for (const auto& [x, y] : c.edges) a.edges.push_back(Edge{g_.ids[x], g_.ids[y]});
        std::sort(a.edges.begin(), a.edges.end());
        for (Index i : c.agenda) a.unresolved.push_back(g_.ids[i]);
        a.partial = c.partial;
        a.bound = c.bound;
        return a;
    }

    const CompiledGraph& g_;
    Index root_;
    std::optional<double> threshold_;
    SearchTrace* trace_;
    const CompletionBounds& bounds_;
    std::vector<Worker> heap_;
    std::optional<IndexedSubstitution> best_;
    std::size_t explored_ = 0;
    std::uint64_t next_seq_ = 0;
};

inline std::optional<double> threshold_of(const std::optional<Requirement>& r) {
    if (!r) return std::nullopt;
    return r->threshold;
}

} // namespace detail

/// Reusable search input: the knowledge base compiled once, then searched
/// by any number of strategies. Compilation, including the per-node
/// completion bounds, depends only on the knowledge base and is not part of
/// measured time.
class SearchContext {
public:
    explicit SearchContext(const KnowledgeBase& kb) : graph_(kb), bounds_(graph_) {}

    const detail::CompiledGraph& graph() const { return graph_; }
    const detail::CompletionBounds& bounds() const { return bounds_; }

    /// All complete substitutions in depth-first order; with a requirement,
    /// candidates below it are dropped (partial ones as soon as they fall
    /// below). `best` is the preferred survivor.
    SearchOutcome enumerate_dfs(const NodeId& failed, std::optional<Requirement> requirement = std::nullopt) const {
        using clock = std::chrono::steady_clock;
        SearchOutcome out = start({Algorithm::Dfs, requirement.has_value()}, failed, requirement);
        const detail::Index root = graph_.index(failed);
        const auto t0 = clock::now();
        std::vector<detail::IndexedSubstitution> found;
        detail::Enumerator e(graph_, root, detail::threshold_of(requirement));
        e.run([&](detail::IndexedSubstitution&& s) {
            if (!requirement || requirement->satisfied_by(s.utility)) found.push_back(std::move(s));
            return false;
        });
        const detail::IndexedSubstitution* best = nullptr;
        for (const auto& s : found) {
            if (!best || detail::preferred(s, *best)) best = &s;
        }
        out.elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        out.explored = e.explored();
        out.substitutions.reserve(found.size());
        for (const auto& s : found) out.substitutions.push_back(detail::materialize(graph_, root, s));
        if (best) out.best = detail::materialize(graph_, root, *best);
        return out;
    }

    /// Iterative first-valid search. Each round builds the next candidate in
    /// depth-first order; a candidate failing the requirement is recorded in
    /// an exclusion set and the next round continues past it, so no earlier
    /// candidate is ever rebuilt. Returns at most one substitution, which
    /// need not be the best.
    SearchOutcome search_orr(const NodeId& failed, std::optional<Requirement> requirement = std::nullopt) const {
        using clock = std::chrono::steady_clock;
        SearchOutcome out = start({Algorithm::Orr, requirement.has_value()}, failed, requirement);
        const detail::Index root = graph_.index(failed);
        const auto t0 = clock::now();
        std::unordered_set<std::uint64_t> excluded;
        std::optional<detail::IndexedSubstitution> hit;
        detail::Enumerator e(graph_, root, detail::threshold_of(requirement));
        e.run([&](detail::IndexedSubstitution&& s) {
            const std::uint64_t key = detail::fingerprint(s);
            if (excluded.count(key)) return false;
            if (!requirement || requirement->satisfied_by(s.utility)) {
                hit = std::move(s);
                return true;
            }
            excluded.insert(key);
            return false;
        });
        out.elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        out.explored = e.explored();
        if (hit) {
            out.substitutions.push_back(detail::materialize(graph_, root, *hit));
            out.best = out.substitutions.front();
        }
        return out;
    }

    /// Best-first worker search returning the utility-maximal substitution.
    /// With a requirement, a worker is aborted as soon as its optimistic
    /// completion falls below it, finished or not.
    SearchOutcome search_shpgsa(const NodeId& failed, std::optional<Requirement> requirement = std::nullopt,
                                SearchTrace* trace = nullptr) const {
        using clock = std::chrono::steady_clock;
        SearchOutcome out = start({Algorithm::Shpgsa, requirement.has_value()}, failed, requirement);
        const detail::Index root = graph_.index(failed);
        const auto t0 = clock::now();
        detail::WorkerSearch w(graph_, bounds_, root, detail::threshold_of(requirement), trace);
        auto best = w.run();
        out.elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        out.explored = w.explored();
        if (best) {
            out.substitutions.push_back(detail::materialize(graph_, root, *best));
            out.best = out.substitutions.front();
        }
        return out;
    }

    SearchOutcome search(const Strategy& strategy, const NodeId& failed,
                         std::optional<Requirement> requirement) const {
        if (!strategy.guarded) requirement.reset();
        else if (!requirement) throw Error(ErrorCode::NotAnnotated, strategy.name() + " needs a requirement");
        switch (strategy.algorithm) {
        case Algorithm::Dfs: return enumerate_dfs(failed, requirement);
        case Algorithm::Orr: return search_orr(failed, requirement);
        case Algorithm::Shpgsa: return search_shpgsa(failed, requirement);
        }
        return {};
    }

private:
    static SearchOutcome start(Strategy s, const NodeId& failed, const std::optional<Requirement>& r) {
        SearchOutcome out;
        out.strategy = s;
        out.failed = failed;
        out.requirement = r;
        return out;
    }

    detail::CompiledGraph graph_;
    detail::CompletionBounds bounds_;
};

inline SearchOutcome enumerate_dfs(const KnowledgeBase& kb, const NodeId& failed,
                                   std::optional<Requirement> requirement = std::nullopt) {
    return SearchContext(kb).enumerate_dfs(failed, requirement);
}

inline SearchOutcome search_orr(const KnowledgeBase& kb, const NodeId& failed,
                                std::optional<Requirement> requirement = std::nullopt) {
    return SearchContext(kb).search_orr(failed, requirement);
}

inline SearchOutcome search_shpgsa(const KnowledgeBase& kb, const NodeId& failed,
                                   std::optional<Requirement> requirement = std::nullopt,
                                   SearchTrace* trace = nullptr) {
    return SearchContext(kb).search_shpgsa(failed, requirement, trace);
}

/// Runs `strategy`; guarded strategies take their requirement from the
/// failed node's guarantee.
inline SearchOutcome run_search(const KnowledgeBase& kb, const Strategy& strategy, const NodeId& failed) {
    std::optional<Requirement> r;
    if (strategy.guarded) r = requirement_for(kb, failed);
    return SearchContext(kb).search(strategy, failed, r);
}

/// Preferred substitution meeting `requirement`, if any.
inline std::optional<Substitution> best_substitution(const SearchOutcome& outcome, const Requirement& requirement) {
    const Substitution* best = nullptr;
    for (const auto& s : outcome.substitutions) {
        if (!requirement.satisfied_by(s.utility)) continue;
        if (!best || preferred(s, *best)) best = &s;
    }
    if (!best) return std::nullopt;
    return *best;
}

/// Checks `s` against the current state of `kb` and returns a copy in which
/// the substitution's provider edges are active.
inline KnowledgeBase apply_substitution(const KnowledgeBase& kb, const Substitution& s) {
    if (!kb.contains(s.root)) throw Error(ErrorCode::InvalidSubstitution, "unknown root '" + s.root + "'");
    if (s.edges.empty()) throw Error(ErrorCode::InvalidSubstitution, "root '" + s.root + "' is not resolved");
    std::set<NodeId> members(s.nodes.begin(), s.nodes.end());
    if (!members.count(s.root)) throw Error(ErrorCode::InvalidSubstitution, "root is not a member");
    std::map<NodeId, std::vector<NodeId>> chosen;
    for (const auto& e : s.edges) {
        if (!kb.edges().count(e)) throw Error(ErrorCode::InvalidSubstitution, "no edge " + e.from + " -> " + e.to);
        if (!members.count(e.from) || !members.count(e.to)) {
            throw Error(ErrorCode::InvalidSubstitution, "edge " + e.from + " -> " + e.to + " leaves the subgraph");
        }
        chosen[e.to].push_back(e.from);
    }
    for (const auto& id : s.nodes) {
        if (!kb.contains(id)) throw Error(ErrorCode::InvalidSubstitution, "unknown member '" + id + "'");
        const Node& n = kb.node(id);
        if (id != s.root && !n.available) throw Error(ErrorCode::StaleSubstitution, "'" + id + "' is unavailable");
        if (kb.is_leaf(id)) continue;
        const auto& picked = chosen[id];
        if (n.kind == NodeKind::Parameter && picked.size() != 1) {
            throw Error(ErrorCode::InvalidSubstitution, "parameter '" + id + "' needs exactly one provider");
        }
        if (n.kind == NodeKind::Component && picked.size() != kb.predecessor_set(id).size()) {
            throw Error(ErrorCode::InvalidSubstitution, "component '" + id + "' is missing inputs");
        }
    }
    KnowledgeBase out = kb;
    out.activate(s.edges);
    return out;
}

} // namespace shcps
