#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace shcps;
using namespace testing_support;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::ConfigError;
}

// leaf -> p1 -> c1 -> p2
KnowledgeBase chain() {
    KnowledgeBase kb(UtilityModel::distance_sensing());
    kb.add_node(comp("leaf", perfect_sensor()));
    kb.add_node(param("p1"));
    kb.add_node(comp("c1"));
    kb.add_node(param("p2"));
    kb.add_edge("leaf", "p1");
    kb.add_edge("p1", "c1");
    kb.add_edge("c1", "p2");
    return kb;
}

KnowledgeBase sensor_trio() {
    KnowledgeBase kb(UtilityModel::distance_sensing());
    kb.add_node(param("distance"));
    kb.add_node(comp("lidar", lidar_properties()));
    kb.add_node(comp("ultrasonic", ultrasonic_properties()));
    kb.add_node(comp("camera", camera_properties()));
    for (const char* s : {"lidar", "ultrasonic", "camera"}) kb.add_edge(s, "distance");
    return kb;
}

} // namespace

TEST(Inherit, IntrinsicLeaf) {
    auto kb = sensor_trio();
    auto g = inherit_guarantee(kb, "lidar", Theta(0.5));
    EXPECT_EQ(g.hops, 0u);
    EXPECT_EQ(g.origin, GuaranteeOrigin::Intrinsic);
    EXPECT_NEAR(g.utility, 0.928, 1e-12);
}

TEST(Inherit, MinimumOverSensors) {
    auto kb = sensor_trio();
    auto g = inherit_guarantee(kb, "distance", Theta(1.0));
    EXPECT_EQ(g.vector, (PropertyVector{{"Range", 4.0}, {"Acc", 95.0}, {"HFOV", 21.0}, {"Freq", 40.0}, {"FPS", 60.0}}));
    EXPECT_EQ(g.hops, 1u);
    EXPECT_EQ(g.origin, GuaranteeOrigin::Inherited);
    EXPECT_DOUBLE_EQ(g.utility, UtilityModel::distance_sensing().node_utility(g.vector));
}

TEST(Inherit, ChainDecaysPerHop) {
    auto kb = chain();
    auto g = inherit_guarantee(kb, "p2", Theta(0.9));
    EXPECT_EQ(g.hops, 3u);
    EXPECT_NEAR(g.utility, 0.729, 1e-12);
    EXPECT_NEAR(kb.node("p1").guarantee->utility, 0.9, 1e-12);
}

TEST(Inherit, Errors) {
    auto kb = chain();
    inherit_guarantee(kb, "p2", Theta(0.9));
    EXPECT_EQ(code_of([&] { inherit_guarantee(kb, "p2", Theta(0.9)); }), ErrorCode::AlreadyAnnotated);
    KnowledgeBase bare;
    bare.add_node(param("lonely"));
    EXPECT_EQ(code_of([&] { inherit_guarantee(bare, "lonely", Theta(0.9)); }), ErrorCode::NoSource);
    EXPECT_EQ(code_of([&] { inherit_guarantee(bare, "ghost", Theta(0.9)); }), ErrorCode::UnknownNode);
}

TEST(Decompose, SingleHop) {
    KnowledgeBase kb(UtilityModel::distance_sensing());
    kb.add_node(param("need"));
    kb.add_node(comp("user", lidar_properties()));
    kb.add_edge("need", "user");
    auto g = decompose_guarantee(kb, "need", Theta(0.9));
    EXPECT_EQ(g.origin, GuaranteeOrigin::Decomposed);
    EXPECT_NEAR(g.utility, 0.9 * 0.928, 1e-12);
}

TEST(Decompose, MaximumOverConsumers) {
    KnowledgeBase kb(UtilityModel::distance_sensing());
    kb.add_node(param("need"));
    kb.add_node(comp("near", {{"Range", 4.0}}));
    kb.add_node(comp("far", {{"Range", 8.0}}));
    kb.add_edge("need", "near");
    kb.add_edge("need", "far");
    auto g = decompose_guarantee(kb, "need", Theta(1.0));
    EXPECT_EQ(g.vector, (PropertyVector{{"Range", 8.0}}));
}

TEST(Decompose, RootHasNoSource) {
    auto kb = chain();
    EXPECT_EQ(code_of([&] { decompose_guarantee(kb, "p2", Theta(0.9)); }), ErrorCode::NoSource);
}

TEST(AnnotateAll, BalancedTree) {
    GeneratorSpec spec;
    spec.branching = 2;
    spec.depth = 8;
    spec.leaf_properties = perfect_sensor();
    auto kb = gen_balanced(spec);
    annotate_all(kb, Theta(1.0), GuaranteeMode::Inherit);
    for (const auto& [id, n] : kb.nodes()) EXPECT_DOUBLE_EQ(n.guarantee->utility, 1.0) << id;
    kb.clear_guarantees();
    annotate_all(kb, Theta(0.9), GuaranteeMode::Inherit);
    EXPECT_NEAR(kb.node("n").guarantee->utility, std::pow(0.9, 8), 1e-12);
    EXPECT_NEAR(kb.node("n").guarantee->utility, 0.430, 5e-4);
}

TEST(AnnotateAll, FixturesFullyAnnotated) {
    for (auto kb : {fixture_rover(), fixture_drivetrain()}) {
        auto r = annotate_all(kb, Theta(0.9), GuaranteeMode::Inherit);
        EXPECT_TRUE(r.no_source.empty());
        for (const auto& [id, n] : kb.nodes()) EXPECT_TRUE(n.guarantee.has_value()) << id;
    }
}

TEST(AnnotateAll, IsolatedBareNodeReportedAndSkipped) {
    auto kb = chain();
    kb.add_node(param("island"));
    auto r = annotate_all(kb, Theta(0.9), GuaranteeMode::Inherit);
    EXPECT_EQ(r.no_source, (std::vector<NodeId>{"island"}));
    EXPECT_FALSE(kb.node("island").guarantee);
    EXPECT_TRUE(kb.node("p2").guarantee);
}

TEST(AnnotateAll, DecomposeFromRootRequirement) {
    // only the root carries a requirement; everything below inherits it top-down
    auto kb = chain();
    kb.set_properties("leaf", std::nullopt);
    kb.set_properties("p2", lidar_properties());
    auto r = annotate_all(kb, Theta(0.5), GuaranteeMode::Decompose);
    EXPECT_TRUE(r.no_source.empty());
    EXPECT_EQ(kb.node("leaf").guarantee->hops, 3u);
    EXPECT_NEAR(kb.node("leaf").guarantee->utility, 0.125 * 0.928, 1e-12);
}

TEST(Counters, AnnotateAllTouchesEachNodeAndEdgeOnce) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto kb = random_dag(rng, 6, 4, 3, 0.0);
        for (auto mode : {GuaranteeMode::Inherit, GuaranteeMode::Decompose}) {
            if (mode == GuaranteeMode::Decompose) {
                // requirements flow down from the root only
                kb.clear_guarantees();
                for (const auto& [id, n] : kb.nodes()) kb.set_properties(id, std::nullopt);
                kb.set_properties("r", q(90));
            }
            auto r = annotate_all(kb, Theta(0.9), mode);
            EXPECT_EQ(r.nodes_touched, kb.node_count());
            EXPECT_EQ(r.edges_traversed, kb.edge_count());
            EXPECT_LE(r.nodes_computed, kb.node_count());
        }
    }
}

TEST(Counters, IncrementalTouchesOnlyPredecessors) {
    GeneratorSpec spec;
    spec.branching = 3;
    spec.depth = 4;
    auto kb = gen_balanced(spec);
    for (const auto& p : kb.predecessors("n")) inherit_guarantee(kb, p, Theta(0.9));
    AnnotationReport r;
    inherit_guarantee(kb, "n", Theta(0.9), &r);
    EXPECT_EQ(r.nodes_computed, 1u);
    EXPECT_EQ(r.nodes_touched, 1u + kb.predecessors("n").size());
    EXPECT_EQ(r.edges_traversed, kb.predecessors("n").size());
}

TEST(GuaranteeProperties, VectorBoundsAndOrderIndependence) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto kb = random_dag(rng, 5, 4, 3, 0.0);
        auto all = kb;
        annotate_all(all, Theta(0.8), GuaranteeMode::Inherit);
        for (const auto& [id, n] : all.nodes()) {
            const auto& g = *n.guarantee;
            ASSERT_NEAR(g.utility, std::pow(0.8, g.hops) * all.utility_model().node_utility(g.vector), 1e-15);
            ASSERT_EQ(g.hops == 0, g.origin == GuaranteeOrigin::Intrinsic);
            for (const auto& p : all.predecessors(id)) {
                for (const auto& [name, v] : g.vector) {
                    auto pv = all.node(p).guarantee->vector.get(name);
                    if (pv) {
                        ASSERT_LE(v, *pv);
                    }
                }
            }
        }
        // annotate one node at a time in reverse topological order
        auto order = kb.topological_order();
        std::reverse(order.begin(), order.end());
        for (const auto& id : order) {
            if (!kb.node(id).guarantee) inherit_guarantee(kb, id, Theta(0.8));
        }
        ASSERT_EQ(kb, all);
    }
}

TEST(GuaranteeProperties, DecayOnUniformBalancedTrees) {
    for (double theta : {0.5, 0.9, 0.99}) {
        for (unsigned d = 1; d <= 6; ++d) {
            GeneratorSpec spec;
            spec.branching = 3;
            spec.depth = d;
            auto kb = gen_balanced(spec);
            annotate_all(kb, Theta(theta), GuaranteeMode::Inherit);
            EXPECT_NEAR(kb.node("n").guarantee->utility, std::pow(theta, d) * 0.928, 1e-12);
        }
    }
}

TEST(GuaranteeProperties, AnnotatedWith) {
    auto kb = chain();
    annotate_all(kb, Theta(0.9), GuaranteeMode::Inherit);
    EXPECT_TRUE(annotated_with(kb, *kb.node("p2").guarantee, Theta(0.9)));
    EXPECT_FALSE(annotated_with(kb, *kb.node("p2").guarantee, Theta(0.95)));
}
