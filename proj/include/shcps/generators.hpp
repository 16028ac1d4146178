#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shcps/error.hpp"
#include "shcps/kb.hpp"

namespace shcps {

enum class TreeShape { Balanced, Random };

/// Closed interval per property for randomly drawn leaf properties.
struct PropertyBounds {
    std::map<PropertyName, std::pair<double, double>> ranges;
};

using LeafProperties = std::variant<PropertyVector, PropertyBounds>;

/// LiDAR row of the distance-sensing table: 8 m, 97 %, 360 deg, 2.3 kHz.
inline PropertyVector lidar_properties() {
    return {{"Range", 8.0}, {"Acc", 97.0}, {"HFOV", 360.0}, {"Freq", 2300.0}};
}

inline PropertyVector ultrasonic_properties() {
    return {{"Range", 4.0}, {"Acc", 95.0}, {"HFOV", 21.0}, {"Freq", 40.0}};
}

inline PropertyVector camera_properties() {
    return {{"Range", 4.0}, {"Acc", 97.5}, {"HFOV", 70.0}, {"FPS", 60.0}};
}

/// Spans of the three distance sensors: the table's Min and Max rows.
inline PropertyBounds sensor_bounds() {
    return {{{"Range", {4.0, 8.0}}, {"Acc", {95.0, 97.5}}, {"HFOV", {21.0, 360.0}}, {"Freq", {40.0, 2300.0}}}};
}

struct GeneratorSpec {
    TreeShape shape = TreeShape::Balanced;
    unsigned branching = 2;
    unsigned depth = 1;
    std::uint64_t seed = 0;
    LeafProperties leaf_properties = lidar_properties();
    UtilityModel model = UtilityModel::distance_sensing();
};

namespace detail {

/// Portable draws on top of mt19937_64, whose output sequence is fixed by
/// the standard (the std distributions are not).
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    unsigned uniform_int(unsigned lo, unsigned hi) {
        const std::uint64_t span = std::uint64_t(hi) - lo + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do x = rng_();
        while (x >= limit);
        return lo + static_cast<unsigned>(x % span);
    }

    double uniform_real(double lo, double hi) {
        const double unit = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * unit;
    }

private:
    std::mt19937_64 rng_;
};

inline void check_spec(const GeneratorSpec& spec) {
    if (spec.depth < 1) throw Error(ErrorCode::InvalidSpec, "depth must be >= 1");
    if (spec.branching < 1) throw Error(ErrorCode::InvalidSpec, "branching must be >= 1");
    if (const auto* b = std::get_if<PropertyBounds>(&spec.leaf_properties)) {
        if (b->ranges.empty()) throw Error(ErrorCode::InvalidSpec, "leaf bounds are empty");
        for (const auto& [name, r] : b->ranges) {
            if (!(r.first >= 0.0 && r.first <= r.second)) {
                throw Error(ErrorCode::InvalidSpec, "bad bounds for '" + name + "'");
            }
        }
    } else if (std::get<PropertyVector>(spec.leaf_properties).empty()) {
        throw Error(ErrorCode::InvalidSpec, "leaf properties are empty");
    }
    // perfect-tree size; the random generator is bounded by the same figure
    double nodes = 0.0, level = 1.0;
    for (unsigned d = 0; d <= spec.depth; ++d) {
        nodes += level;
        level *= spec.branching;
    }
    if (nodes > 4e6) throw Error(ErrorCode::InvalidSpec, "tree would exceed 4M nodes");
}

inline PropertyVector leaf_vector(const LeafProperties& lp, Draw& draw) {
    if (const auto* v = std::get_if<PropertyVector>(&lp)) return *v;
    PropertyVector p;
    for (const auto& [name, r] : std::get<PropertyBounds>(lp).ranges) p.set(name, draw.uniform_real(r.first, r.second));
    return p;
}

// Level 0 is the root parameter; kinds alternate with depth.
inline NodeKind kind_at(unsigned level) { return level % 2 == 0 ? NodeKind::Parameter : NodeKind::Component; }

template <class ChildCount>
KnowledgeBase grow_tree(const GeneratorSpec& spec, ChildCount&& child_count) {
    check_spec(spec);
    Draw draw(spec.seed);
    KnowledgeBase kb(spec.model);
    struct Pending {
        NodeId id;
        unsigned level;
    };
    kb.add_node(Node{"n", kind_at(0), true, std::nullopt, std::nullopt});
    std::vector<Pending> stack{{"n", 0}};
    while (!stack.empty()) {
        Pending cur = std::move(stack.back());
        stack.pop_back();
        if (cur.level == spec.depth) {
            kb.set_properties(cur.id, leaf_vector(spec.leaf_properties, draw));
            continue;
        }
        const unsigned k = child_count(draw);
        std::vector<Pending> children;
        for (unsigned i = 0; i < k; ++i) {
            NodeId child = cur.id + "." + std::to_string(i);
            kb.add_node(Node{child, kind_at(cur.level + 1), true, std::nullopt, std::nullopt});
            kb.add_edge(child, cur.id);
            children.push_back({std::move(child), cur.level + 1});
        }
        // preorder: first child is processed next
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
    }
    return kb;
}

} // namespace detail

/// Perfect tree with `branching` children per internal node, root parameter
/// "n" at level 0 and property-bearing leaves at level `depth`. Node ids
/// encode the path from the root ("n.0.1").
inline KnowledgeBase gen_balanced(const GeneratorSpec& spec) {
    if (spec.shape != TreeShape::Balanced) throw Error(ErrorCode::InvalidSpec, "spec shape is not balanced");
    return detail::grow_tree(spec, [&](detail::Draw&) { return spec.branching; });
}

/// Tree whose internal nodes draw their child count uniformly from
/// 1..branching. Every root-to-leaf path has length `depth`; identical specs
/// give identical trees.
inline KnowledgeBase gen_random(const GeneratorSpec& spec) {
    if (spec.shape != TreeShape::Random) throw Error(ErrorCode::InvalidSpec, "spec shape is not random");
    return detail::grow_tree(spec, [&](detail::Draw& d) { return d.uniform_int(1, spec.branching); });
}

inline KnowledgeBase generate(const GeneratorSpec& spec) {
    return spec.shape == TreeShape::Balanced ? gen_balanced(spec) : gen_random(spec);
}

/// Nodes nobody consumes, lexicographic. Experiments fail the first one.
inline std::vector<NodeId> roots(const KnowledgeBase& kb) {
    std::vector<NodeId> out;
    for (const auto& [id, n] : kb.nodes()) {
        if (kb.successor_set(id).empty()) out.push_back(id);
    }
    return out;
}

inline NodeId default_failed(const KnowledgeBase& kb) {
    auto r = roots(kb);
    if (r.empty()) throw Error(ErrorCode::UnknownNode, "knowledge base has no root");
    return r.front();
}

/// Rover obstacle positioning. Three ranging processes can produce the
/// obstacle position, each fed by its own sensor:
///
///   lidar      -> lidar_scan  -> lidar_ranging  --+
///   ultrasonic -> echo_time   -> sonar_ranging  --+--> obstacle_position
///   camera     -> depth_image -> stereo_ranging --+
///
/// Failing obstacle_position leaves three substitutions. Only the lidar
/// chain stays within 5 % of the root's inherited guarantee (it reaches
/// about 95.7 % of it); the others are below 75 %.
inline KnowledgeBase fixture_rover() {
    KnowledgeBase kb(UtilityModel::distance_sensing());
    auto param = [&](const char* id) { kb.add_node(Node{id, NodeKind::Parameter, true, std::nullopt, std::nullopt}); };
    auto comp = [&](const char* id, PropertyVector p) {
        kb.add_node(Node{id, NodeKind::Component, true, std::move(p), std::nullopt});
    };
    param("obstacle_position");
    param("lidar_scan");
    param("echo_time");
    param("depth_image");
    comp("lidar", lidar_properties());
    comp("ultrasonic", ultrasonic_properties());
    comp("camera", camera_properties());
    comp("lidar_ranging", {{"Range", 4.0}, {"Acc", 96.0}, {"HFOV", 36.0}, {"Freq", 50.0}});
    comp("sonar_ranging", {{"Range", 4.0}, {"Acc", 95.0}, {"HFOV", 21.0}, {"Freq", 40.0}});
    comp("stereo_ranging", {{"Range", 4.5}, {"Acc", 96.0}, {"HFOV", 60.0}, {"Freq", 30.0}});
    for (auto [from, to] : {std::pair{"lidar", "lidar_scan"}, {"lidar_scan", "lidar_ranging"},
                            {"lidar_ranging", "obstacle_position"}, {"ultrasonic", "echo_time"},
                            {"echo_time", "sonar_ranging"}, {"sonar_ranging", "obstacle_position"},
                            {"camera", "depth_image"}, {"depth_image", "stereo_ranging"},
                            {"stereo_ranging", "obstacle_position"}}) {
        kb.add_edge(from, to);
    }
    return kb;
}

/// Steered-axle pose for a drivetrain: either steering kinematics over the
/// steering angle and wheel speed, or visual odometry over a camera stream.
///
///   steering_encoder -> steer_angle --+
///   wheel_encoder    -> wheel_speed --+--> steering_kinematics --+
///   camera           -> image_stream ----> visual_odometry ------+--> axle_pose
///
/// The kinematic substitution reaches about 91.6 % of the guarantee of
/// axle_pose, visual odometry 74 %.
inline KnowledgeBase fixture_drivetrain() {
    KnowledgeBase kb(UtilityModel({{"Acc", 0.6}, {"Freq", 0.4}}, {{"Acc", 100.0}, {"Freq", 100.0}}));
    auto param = [&](const char* id) { kb.add_node(Node{id, NodeKind::Parameter, true, std::nullopt, std::nullopt}); };
    auto comp = [&](const char* id, PropertyVector p) {
        kb.add_node(Node{id, NodeKind::Component, true, std::move(p), std::nullopt});
    };
    param("axle_pose");
    param("steer_angle");
    param("wheel_speed");
    param("image_stream");
    comp("steering_encoder", {{"Acc", 96.0}, {"Freq", 80.0}});
    comp("wheel_encoder", {{"Acc", 97.0}, {"Freq", 100.0}});
    comp("camera", {{"Acc", 97.0}, {"Freq", 30.0}});
    comp("steering_kinematics", {{"Acc", 95.0}, {"Freq", 50.0}});
    comp("visual_odometry", {{"Acc", 90.0}, {"Freq", 60.0}});
    for (auto [from, to] : {std::pair{"steering_encoder", "steer_angle"}, {"wheel_encoder", "wheel_speed"},
                            {"steer_angle", "steering_kinematics"}, {"wheel_speed", "steering_kinematics"},
                            {"steering_kinematics", "axle_pose"}, {"camera", "image_stream"},
                            {"image_stream", "visual_odometry"}, {"visual_odometry", "axle_pose"}}) {
        kb.add_edge(from, to);
    }
    return kb;
}

} // namespace shcps
