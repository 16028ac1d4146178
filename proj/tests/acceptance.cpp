// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace shcps;
using namespace testing_support;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) why << what << "; ";
        ok = ok && cond;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Requirement requirement_at(const KnowledgeBase& base, const NodeId& failed, double theta) {
    KnowledgeBase kb = base;
    kb.clear_guarantees();
    annotate_all(kb, Theta(theta), GuaranteeMode::Inherit);
    return requirement_for(kb, failed);
}

KnowledgeBase random_tree(std::uint64_t seed, unsigned branching, unsigned depth) {
    GeneratorSpec spec;
    spec.shape = TreeShape::Random;
    spec.branching = branching;
    spec.depth = depth;
    spec.seed = seed;
    spec.leaf_properties = sensor_bounds();
    return gen_random(spec);
}

// Small random knowledge bases: trees from the generator alternating with
// layered DAGs that share providers.
std::vector<std::pair<KnowledgeBase, NodeId>> small_kbs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<KnowledgeBase, NodeId>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 2) out.emplace_back(random_tree(seed * 1000 + i, 2 + i % 2, 1 + i % 6), "n");
        else out.emplace_back(random_dag(rng, 1 + i % 6, 3, 2), "r");
    }
    return out;
}

void utility_reproduction(Check& c) {
    const auto m = UtilityModel::distance_sensing();
    const double lidar = m.node_utility(lidar_properties());
    const double camera = m.node_utility(camera_properties());
    const double sonar = m.node_utility(ultrasonic_properties());
    c.expect(std::abs(lidar - 0.93) <= 0.005, "LiDAR utility " + format_number(lidar));
    c.expect(std::abs(camera - 0.65) <= 0.005, "Camera utility " + format_number(camera));
    c.expect(std::abs(sonar - 0.52) <= 0.005, "Ultrasonic utility " + format_number(sonar));
    auto r = rank_nodes(m, {{"Camera", camera_properties()}, {"LiDAR", lidar_properties()},
                            {"Ultrasonic", ultrasonic_properties()}});
    c.expect(r[0].id == "LiDAR" && r[1].id == "Camera" && r[2].id == "Ultrasonic", "ranking order");
    c.why << "LiDAR " << format_number(lidar) << ", Camera " << format_number(camera) << ", Ultrasonic "
          << format_number(sonar);
}

void substitution_counts(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto balanced = enumerate_dfs(model_kb("balanced"), "n").substitutions.size();
    const double t = seconds_since(t0);
    const auto rover = enumerate_dfs(fixture_rover(), "obstacle_position").substitutions.size();
    const auto drive = enumerate_dfs(fixture_drivetrain(), "axle_pose").substitutions.size();
    c.expect(balanced == 32768, "balanced count " + std::to_string(balanced));
    c.expect(rover == 3, "rover count " + std::to_string(rover));
    c.expect(drive == 2, "drivetrain count " + std::to_string(drive));
    c.expect(t < 60.0, "balanced enumeration took " + format_number(t) + " s");
    c.why << "balanced " << balanced << " (" << format_number(std::round(t * 1e3) / 1e3) << " s), rover " << rover
          << ", drivetrain " << drive;
}

void theta_filter(Check& c) {
    const std::vector<std::pair<std::string, std::vector<std::size_t>>> expected{
        {"rover", {1, 1, 0}}, {"drivetrain", {1, 0, 0}}, {"balanced", {0, 0, 0}}};
    const double thetas[] = {0.9, 0.95, 0.99};
    for (const auto& [model, want] : expected) {
        const KnowledgeBase kb = model_kb(model);
        const NodeId failed = default_failed(kb);
        const SearchContext ctx(kb);
        std::vector<std::size_t> dfsg, orrg, shpg;
        for (double t : thetas) {
            const auto r = requirement_at(kb, failed, t);
            dfsg.push_back(ctx.enumerate_dfs(failed, r).substitutions.size());
            orrg.push_back(ctx.search_orr(failed, r).substitutions.size());
            shpg.push_back(ctx.search_shpgsa(failed, r).substitutions.size());
        }
        std::vector<std::size_t> one;
        for (auto n : want) one.push_back(n ? 1 : 0);
        c.expect(dfsg == want, model + " DFSG counts differ");
        c.expect(orrg == one, model + " ORRG counts differ");
        c.expect(shpg == one, model + " SHPGSAG counts differ");
        c.why << model << " (" << dfsg[0] << "," << dfsg[1] << "," << dfsg[2] << ") ";
    }
}

void depth_ordering(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    DepthSweepConfig cfg;
    cfg.depths = {10, 11, 12, 13, 14};
    cfg.trials = 20;
    auto recs = run_depth_sweep(cfg);
    const double total = seconds_since(t0);
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> mean;
    for (const auto& r : recs) {
        auto& [sum, n] = mean[{format_number(r.theta), r.strategy}];
        sum += r.elapsed_s;
        ++n;
    }
    auto avg = [&](const char* theta, const char* s) {
        const auto& [sum, n] = mean.at({theta, s});
        return sum / n;
    };
    for (const char* t : {"0.9", "0.95"}) {
        c.expect(avg(t, "DFSG") > avg(t, "SHPGSAG"), std::string("DFSG not slower than SHPGSAG at ") + t);
    }
    c.expect(avg("0.99", "SHPGSAG") < avg("0.99", "ORRG"), "SHPGSAG not faster than ORRG at 0.99");
    c.expect(avg("0.99", "SHPGSAG") < avg("0.99", "DFSG"), "SHPGSAG not faster than DFSG at 0.99");
    c.expect(total < 300.0, "sweep took " + format_number(total) + " s");
    c.why << "mean us";
    for (const char* t : {"0.9", "0.95", "0.99"}) {
        c.why << " | " << t;
        for (const char* s : {"DFSG", "ORRG", "SHPGSAG"}) {
            c.why << " " << s << "=" << format_number(std::round(avg(t, s) * 1e7) / 10.0);
        }
    }
}

void oracle_equivalence(Check& c) {
    std::size_t compared = 0;
    for (const auto& [kb, root] : small_kbs(200, 5)) {
        const SearchContext ctx(kb);
        const auto all = ctx.enumerate_dfs(root);
        for (double theta : {0.5, 0.9, 0.95, 0.99}) {
            const auto r = requirement_at(kb, root, theta);
            std::vector<Substitution> filtered;
            for (const auto& s : all.substitutions) {
                if (s.utility >= r.threshold - kUtilityEpsilon) filtered.push_back(s);
            }
            auto sorted = [](std::vector<Substitution> v) {
                std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.nodes < b.nodes || (a.nodes == b.nodes && a.edges < b.edges); });
                return v;
            };
            const auto dfsg = ctx.enumerate_dfs(root, r);
            c.expect(sorted(dfsg.substitutions) == sorted(filtered), "DFSG survivors differ from filter");
            const auto best = best_substitution(all, r);
            const auto shp = ctx.search_shpgsa(root, r);
            c.expect(shp.best == best, "SHPGSAG best differs from argmax");
            const auto orr = ctx.search_orr(root, r);
            if (filtered.empty()) {
                c.expect(!orr.best, "ORRG found a substitution where none qualifies");
            } else {
                c.expect(orr.best && std::find(filtered.begin(), filtered.end(), *orr.best) != filtered.end(),
                         "ORRG result not in survivor set");
            }
            ++compared;
        }
    }
    c.why << compared << " (KB, theta) cases";
}

void guarantee_decay(Check& c) {
    double worst = 0.0;
    const PropertyVector leaf = lidar_properties();
    for (const auto& r : run_decay(3, {1, 2, 3, 4, 5, 6, 7, 8}, {0.5, 0.9, 0.99}, leaf)) {
        worst = std::max(worst, std::abs(r.guarantee - r.expected));
    }
    c.expect(worst <= 1e-12, "deviation " + format_number(worst));
    c.why << "max deviation " << format_number(worst);
}

void monotone_shrinkage(Check& c) {
    std::vector<std::pair<std::string, KnowledgeBase>> kbs{
        {"rover", fixture_rover()}, {"drivetrain", fixture_drivetrain()}, {"balanced", model_kb("balanced")}};
    for (auto& [kb, root] : small_kbs(60, 9)) kbs.emplace_back("random", std::move(kb));
    for (const auto& [name, kb] : kbs) {
        const auto rows = run_theta_sweep(name, kb, {Algorithm::Dfs, true}, theta_grid());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            c.expect(rows[i].survivors <= rows[i - 1].survivors, name + " survivor count grew");
            if (rows[i].survivors == 0) continue;
            c.expect(rows[i].min_utility >= rows[i - 1].min_utility && rows[i].max_utility <= rows[i - 1].max_utility,
                     name + " band widened");
        }
    }
    c.why << kbs.size() << " KBs x 99 thetas";
}

void product_monotonicity(Check& c) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> len(0, 16);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> xs(len(rng));
        for (auto& x : xs) x = unit(rng);
        const double before = combined_utility(xs);
        xs.push_back(i % 10 == 0 ? (i % 20 == 0 ? 0.0 : 1.0) : unit(rng));
        c.expect(combined_utility(xs) <= before, "product grew on list " + std::to_string(i));
    }
    std::size_t aborted = 0, wrong = 0;
    for (const auto& [kb, root] : small_kbs(100, 13)) {
        const auto all = oracle_substitutions(kb, root);
        for (double theta : {0.5, 0.9, 0.99}) {
            const auto r = requirement_at(kb, root, theta);
            SearchTrace trace;
            search_shpgsa(kb, root, r, &trace);
            for (const auto& w : trace.aborted) {
                ++aborted;
                for (const auto& s : all) {
                    if (std::includes(s.edges.begin(), s.edges.end(), w.edges.begin(), w.edges.end()) &&
                        r.satisfied_by(s.utility)) {
                        ++wrong;
                        break;
                    }
                }
            }
        }
    }
    c.expect(wrong == 0, std::to_string(wrong) + " wrongly aborted workers");
    c.expect(aborted > 0, "replay saw no aborted workers");
    c.why << "10000 lists, " << aborted << " aborted workers replayed, " << wrong << " wrong";
}

void complexity_bound(Check& c) {
    std::mt19937_64 rng(23);
    std::size_t checked = 0;
    for (int i = 0; i < 100; ++i) {
        KnowledgeBase kb = i % 2 ? random_tree(7000 + i, 3, 2 + i % 6) : random_dag(rng, 2 + i % 6, 5, 3, 0.0);
        const auto r = annotate_all(kb, Theta(0.9), GuaranteeMode::Inherit);
        c.expect(r.nodes_touched == kb.node_count() && r.edges_traversed == kb.edge_count() &&
                     r.nodes_computed == kb.node_count(),
                 "full pass counters off on KB " + std::to_string(i));
        // incremental: drop one internal node's guarantee and recompute it
        for (const auto& [id, n] : kb.nodes()) {
            if (kb.is_leaf(id)) continue;
            KnowledgeBase k2 = kb;
            k2.set_guarantee(id, std::nullopt);
            AnnotationReport inc;
            const auto g = inherit_guarantee(k2, id, Theta(0.9), &inc);
            const std::size_t preds = kb.predecessor_set(id).size();
            c.expect(inc.nodes_computed == 1 && inc.nodes_touched == 1 + preds && inc.edges_traversed == preds &&
                         g == *kb.node(id).guarantee,
                     "incremental counters off at " + id);
            ++checked;
        }
    }
    c.why << "100 KBs, " << checked << " incremental re-annotations";
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
        {"AC1 utility reproduction", utility_reproduction},
        {"AC2 substitution counts", substitution_counts},
        {"AC3 theta filter", theta_filter},
        {"AC4 random-tree timing order", depth_ordering},
        {"AC5 oracle equivalence", oracle_equivalence},
        {"AC6 guarantee decay", guarantee_decay},
        {"AC7 monotone shrinkage", monotone_shrinkage},
        {"AC8 product monotonicity and pruning replay", product_monotonicity},
        {"AC9 annotation work bound", complexity_bound},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            run(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.why << " exception: " << e.what();
        }
        std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << name << ": " << c.why.str() << std::endl;
        failed += !c.ok;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
