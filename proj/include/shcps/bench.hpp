#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "shcps/error.hpp"
#include "shcps/generators.hpp"
#include "shcps/guarantees.hpp"
#include "shcps/report.hpp"
#include "shcps/search.hpp"

namespace shcps {

inline constexpr double kNoTheta = std::numeric_limits<double>::quiet_NaN();

/// One timed search. `theta` is NaN for unguarded strategies and
/// `best_utility` is NaN when nothing was found.
struct BenchmarkRecord {
    std::string model;
    std::string strategy;
    double theta = kNoTheta;
    unsigned trial = 0;
    std::size_t subs = 0;
    double best_utility = kNoTheta;
    double elapsed_s = 0.0;
};

struct AggregateRecord {
    std::string model;
    std::string strategy;
    double theta = kNoTheta;
    unsigned trials = 0;
    std::size_t subs_mode = 0;
    double best_utility = kNoTheta;
    double mean_elapsed_s = 0.0;
};

struct BenchConfig {
    std::vector<std::string> models{"rover", "drivetrain", "balanced"};
    std::vector<Strategy> strategies = Strategy::all();
    std::vector<double> thetas{0.9, 0.95, 0.99};
    unsigned trials = 100;
    unsigned warmup = 3;
    std::uint64_t seed = 1;
};

/// rover | drivetrain | balanced (b=2, d=8, LiDAR leaves) |
/// random-d<D> (b=2, sensor-bounded random leaves, seeded).
inline KnowledgeBase model_kb(const std::string& name, std::uint64_t seed = 1) {
    if (name == "rover") return fixture_rover();
    if (name == "drivetrain") return fixture_drivetrain();
    if (name == "balanced") {
        GeneratorSpec spec;
        spec.branching = 2;
        spec.depth = 8;
        return gen_balanced(spec);
    }
    if (name.rfind("random-d", 0) == 0) {
        GeneratorSpec spec;
        spec.shape = TreeShape::Random;
        spec.branching = 2;
        try {
            spec.depth = static_cast<unsigned>(std::stoul(name.substr(8)));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, "bad random model '" + name + "'");
        }
        spec.seed = seed;
        spec.leaf_properties = sensor_bounds();
        return gen_random(spec);
    }
    throw Error(ErrorCode::ConfigError, "unknown model '" + name + "'");
}

namespace detail {

inline void check_config(const BenchConfig& c) {
    if (c.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
    if (c.models.empty() || c.strategies.empty()) throw Error(ErrorCode::ConfigError, "nothing to run");
    for (double t : c.thetas) {
        if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::ConfigError, "theta " + std::to_string(t) + " outside (0,1]");
    }
}

inline std::optional<Requirement> annotate_requirement(const KnowledgeBase& base, const NodeId& failed,
                                                       double theta) {
    if (std::isnan(theta)) return std::nullopt;
    KnowledgeBase kb = base;
    kb.clear_guarantees();
    annotate_all(kb, Theta(theta), GuaranteeMode::Inherit);
    return requirement_for(kb, failed);
}

inline BenchmarkRecord record_of(const std::string& model, const SearchOutcome& o, double theta, unsigned trial) {
    return {model, o.strategy.name(), theta, trial, o.substitutions.size(),
            o.best ? o.best->utility : kNoTheta, o.elapsed};
}

inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Per (model, strategy, theta): `warmup` discarded runs, then `trials`
/// timed runs, each on a freshly annotated copy of the model.
inline std::vector<BenchmarkRecord> run_table2(const BenchConfig& config) {
    detail::check_config(config);
    std::vector<BenchmarkRecord> records;
    for (const auto& model : config.models) {
        const KnowledgeBase kb = model_kb(model, config.seed);
        const NodeId failed = default_failed(kb);
        const SearchContext ctx(kb);
        for (const auto& strategy : config.strategies) {
            std::vector<double> thetas = strategy.guarded ? config.thetas : std::vector<double>{kNoTheta};
            for (double theta : thetas) {
                for (unsigned w = 0; w < config.warmup; ++w) {
                    ctx.search(strategy, failed, detail::annotate_requirement(kb, failed, theta));
                }
                for (unsigned t = 0; t < config.trials; ++t) {
                    auto req = detail::annotate_requirement(kb, failed, theta);
                    records.push_back(detail::record_of(model, ctx.search(strategy, failed, req), theta, t));
                }
            }
        }
    }
    return records;
}

/// Groups by (model, strategy, theta) in first-seen order: mean time,
/// modal substitution count (smallest on ties) and the first trial's best
/// utility.
inline std::vector<AggregateRecord> aggregate(const std::vector<BenchmarkRecord>& records) {
    std::vector<AggregateRecord> out;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot;
    std::vector<std::map<std::size_t, unsigned>> counts;
    for (const auto& r : records) {
        auto key = std::make_tuple(r.model, r.strategy, format_number(r.theta));
        auto [it, fresh] = slot.emplace(key, out.size());
        if (fresh) {
            out.push_back({r.model, r.strategy, r.theta, 0, 0, r.best_utility, 0.0});
            counts.emplace_back();
        }
        AggregateRecord& a = out[it->second];
        ++a.trials;
        a.mean_elapsed_s += r.elapsed_s;
        ++counts[it->second][r.subs];
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].mean_elapsed_s /= out[i].trials;
        unsigned best = 0;
        for (const auto& [subs, n] : counts[i]) {
            if (n > best) {
                best = n;
                out[i].subs_mode = subs;
            }
        }
    }
    return out;
}

/// 0.01, 0.02, ..., 0.99
inline std::vector<double> theta_grid() {
    std::vector<double> t;
    for (int i = 1; i <= 99; ++i) t.push_back(i / 100.0);
    return t;
}

/// Survivors of a guarded search across a theta sweep; the band is the
/// min/max survivor utility (NaN when none survive).
struct ThetaSweepRecord {
    std::string model;
    std::string strategy;
    double theta = 0.0;
    double requirement = 0.0;
    std::size_t survivors = 0;
    double min_utility = kNoTheta;
    double max_utility = kNoTheta;
};

inline std::vector<ThetaSweepRecord> run_theta_sweep(const std::string& model, const KnowledgeBase& kb,
                                                     Strategy strategy, const std::vector<double>& thetas) {
    strategy.guarded = true;
    const NodeId failed = default_failed(kb);
    const SearchContext ctx(kb);
    std::vector<ThetaSweepRecord> out;
    for (double theta : thetas) {
        if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::ConfigError, "theta outside (0,1]");
        auto req = detail::annotate_requirement(kb, failed, theta);
        SearchOutcome o = ctx.search(strategy, failed, req);
        ThetaSweepRecord r{model, strategy.name(), theta, req->threshold, o.substitutions.size(), kNoTheta, kNoTheta};
        for (const auto& s : o.substitutions) {
            r.min_utility = std::isnan(r.min_utility) ? s.utility : std::min(r.min_utility, s.utility);
            r.max_utility = std::isnan(r.max_utility) ? s.utility : std::max(r.max_utility, s.utility);
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<ThetaSweepRecord> run_theta_sweep(const std::string& model, Strategy strategy,
                                                     const std::vector<double>& thetas, std::uint64_t seed = 1) {
    return run_theta_sweep(model, model_kb(model, seed), strategy, thetas);
}

struct DepthSweepConfig {
    unsigned branching = 2;
    std::vector<unsigned> depths{10, 11, 12, 13, 14};
    std::vector<Strategy> strategies{{Algorithm::Orr, true}, {Algorithm::Shpgsa, true}, {Algorithm::Dfs, true}};
    std::vector<double> thetas{0.9, 0.95, 0.99};
    unsigned trials = 20;
    unsigned warmup = 3;
    std::uint64_t seed = 1;
};

/// Random trees of growing depth. Every trial draws a new tree, shared by
/// all strategies and thetas of that trial; the model column reads
/// "random-b<B>-d<D>".
inline std::vector<BenchmarkRecord> run_depth_sweep(const DepthSweepConfig& c) {
    if (c.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
    std::vector<BenchmarkRecord> records;
    for (unsigned depth : c.depths) {
        const std::string model = "random-b" + std::to_string(c.branching) + "-d" + std::to_string(depth);
        for (unsigned t = 0; t < c.trials; ++t) {
            GeneratorSpec spec;
            spec.shape = TreeShape::Random;
            spec.branching = c.branching;
            spec.depth = depth;
            spec.seed = detail::trial_seed(c.seed, depth, t);
            spec.leaf_properties = sensor_bounds();
            const KnowledgeBase kb = gen_random(spec);
            const NodeId failed = default_failed(kb);
            const SearchContext ctx(kb);
            std::vector<std::optional<Requirement>> reqs;
            for (double theta : c.thetas) reqs.push_back(detail::annotate_requirement(kb, failed, theta));
            for (std::size_t i = 0; i < c.thetas.size(); ++i) {
                // rotate so no strategy always runs first on a cold cache
                for (std::size_t k = 0; k < c.strategies.size(); ++k) {
                    const Strategy& s = c.strategies[(k + t) % c.strategies.size()];
                    if (t == 0) {
                        for (unsigned w = 0; w < c.warmup; ++w) ctx.search(s, failed, reqs[i]);
                    }
                    records.push_back(detail::record_of(model, ctx.search(s, failed, reqs[i]),
                                                        s.guarded ? c.thetas[i] : kNoTheta, t));
                }
            }
        }
    }
    return records;
}

struct DecayRecord {
    unsigned branching = 3;
    unsigned depth = 0;
    double theta = 1.0;
    double guarantee = 0.0; ///< annotated root guarantee utility
    double expected = 0.0;  ///< theta^depth * u(leaf)
};

/// Uniform-leaf balanced trees; the root sits `depth` hops above the leaves.
inline std::vector<DecayRecord> run_decay(unsigned branching, const std::vector<unsigned>& depths,
                                          const std::vector<double>& thetas,
                                          const PropertyVector& leaf = lidar_properties()) {
    std::vector<DecayRecord> out;
    for (unsigned depth : depths) {
        GeneratorSpec spec;
        spec.branching = branching;
        spec.depth = depth;
        spec.leaf_properties = leaf;
        KnowledgeBase kb = gen_balanced(spec);
        const double u_leaf = kb.utility_model().node_utility(leaf);
        const NodeId root = default_failed(kb);
        for (double theta : thetas) {
            kb.clear_guarantees();
            annotate_all(kb, Theta(theta), GuaranteeMode::Inherit);
            out.push_back({branching, depth, theta, kb.node(root).guarantee->utility,
                           std::pow(theta, static_cast<double>(depth)) * u_leaf});
        }
    }
    return out;
}

inline void write_records_csv(std::ostream& os, const std::vector<BenchmarkRecord>& records) {
    os << "model,strategy,theta,trial,subs,best_utility,elapsed_s\n";
    for (const auto& r : records) {
        os << r.model << ',' << r.strategy << ',' << format_number(r.theta) << ',' << r.trial << ',' << r.subs << ','
           << format_number(r.best_utility) << ',' << format_number(r.elapsed_s) << '\n';
    }
}

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRecord>& rows) {
    os << "model,strategy,theta,trials,subs,best_utility,mean_elapsed_s\n";
    for (const auto& a : rows) {
        os << a.model << ',' << a.strategy << ',' << format_number(a.theta) << ',' << a.trials << ',' << a.subs_mode
           << ',' << format_number(a.best_utility) << ',' << format_number(a.mean_elapsed_s) << '\n';
    }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<ThetaSweepRecord>& rows) {
    os << "model,strategy,theta,requirement,survivors,min_utility,max_utility\n";
    for (const auto& r : rows) {
        os << r.model << ',' << r.strategy << ',' << format_number(r.theta) << ',' << format_number(r.requirement)
           << ',' << r.survivors << ',' << format_number(r.min_utility) << ',' << format_number(r.max_utility) << '\n';
    }
}

inline void write_decay_csv(std::ostream& os, const std::vector<DecayRecord>& rows) {
    os << "branching,depth,theta,guarantee,expected\n";
    for (const auto& r : rows) {
        os << r.branching << ',' << r.depth << ',' << format_number(r.theta) << ',' << format_number(r.guarantee)
           << ',' << format_number(r.expected) << '\n';
    }
}

} // namespace shcps
