#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "shcps/error.hpp"
#include "shcps/kb.hpp"

namespace shcps {

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) schema_fail(path + "." + key, "unknown field");
    }
}

inline const json& field(const json& obj, const std::string& path, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) schema_fail(path + "." + name, "missing field");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_fail(path, "expected a number");
    return v.get<double>();
}

inline const std::string& string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_fail(path, "expected a string");
    return v.get_ref<const std::string&>();
}

inline std::map<PropertyName, double> number_map(const json& v, const std::string& path) {
    if (!v.is_object()) schema_fail(path, "expected an object of numbers");
    std::map<PropertyName, double> out;
    for (const auto& [k, x] : v.items()) out[k] = number(x, path + "." + k);
    return out;
}

inline PropertyVector property_vector(const json& v, const std::string& path) {
    PropertyVector p;
    for (const auto& [name, value] : number_map(v, path)) {
        if (value < 0.0) schema_fail(path + "." + name, "property values must be >= 0");
        p.set(name, value);
    }
    return p;
}

inline json to_json(const PropertyVector& p) {
    json out = json::object();
    for (const auto& [k, v] : p) out[k] = v;
    return out;
}

inline Edge edge_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) schema_fail(path, "expected [from, to]");
    return Edge{string(v[0], path + "[0]"), string(v[1], path + "[1]")};
}

inline GuaranteeOrigin origin_from(const std::string& s, const std::string& path) {
    if (s == "intrinsic") return GuaranteeOrigin::Intrinsic;
    if (s == "inherited") return GuaranteeOrigin::Inherited;
    if (s == "decomposed") return GuaranteeOrigin::Decomposed;
    schema_fail(path, "unknown origin '" + s + "'");
}

inline Guarantee guarantee_from(const json& v, const std::string& path) {
    if (!v.is_object()) schema_fail(path, "expected an object");
    reject_unknown(v, path, {"vector", "utility", "hops", "origin"});
    Guarantee g;
    g.vector = property_vector(field(v, path, "vector"), path + ".vector");
    g.utility = number(field(v, path, "utility"), path + ".utility");
    if (g.utility < 0.0 || g.utility > 1.0) schema_fail(path + ".utility", "must lie in [0,1]");
    const json& hops = field(v, path, "hops");
    if (!hops.is_number_unsigned()) schema_fail(path + ".hops", "expected a non-negative integer");
    g.hops = hops.get<unsigned>();
    g.origin = origin_from(string(field(v, path, "origin"), path + ".origin"), path + ".origin");
    if ((g.hops == 0) != (g.origin == GuaranteeOrigin::Intrinsic)) {
        schema_fail(path, "hops is 0 exactly for intrinsic guarantees");
    }
    return g;
}

} // namespace detail

/// Parses the knowledge-base document. Unknown fields, missing endpoints
/// and malformed values raise SchemaError with the offending field path;
/// cycles raise CycleDetected.
inline KnowledgeBase kb_from_json(const nlohmann::json& doc) {
    using namespace detail;
    if (!doc.is_object()) schema_fail("$", "expected an object");
    reject_unknown(doc, "$", {"utility_model", "nodes", "edges", "active_edges"});

    const json& um = field(doc, "$", "utility_model");
    if (!um.is_object()) schema_fail("$.utility_model", "expected an object");
    reject_unknown(um, "$.utility_model", {"weights", "references", "alternatives"});
    std::vector<std::vector<PropertyName>> alternatives;
    if (auto it = um.find("alternatives"); it != um.end()) {
        if (!it->is_array()) schema_fail("$.utility_model.alternatives", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "$.utility_model.alternatives[" + std::to_string(i) + "]";
            const json& g = (*it)[i];
            if (!g.is_array()) schema_fail(p, "expected an array of names");
            std::vector<PropertyName> group;
            for (std::size_t j = 0; j < g.size(); ++j) group.push_back(string(g[j], p + "[" + std::to_string(j) + "]"));
            alternatives.push_back(std::move(group));
        }
    }
    UtilityModel model;
    try {
        model = UtilityModel(number_map(field(um, "$.utility_model", "weights"), "$.utility_model.weights"),
                             number_map(field(um, "$.utility_model", "references"), "$.utility_model.references"),
                             std::move(alternatives));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) throw;
        schema_fail("$.utility_model", e.what());
    }
    if (model.empty()) schema_fail("$.utility_model.weights", "weights must sum to 1");

    KnowledgeBase kb(std::move(model));
    const json& nodes = field(doc, "$", "nodes");
    if (!nodes.is_array()) schema_fail("$.nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string p = "$.nodes[" + std::to_string(i) + "]";
        const json& n = nodes[i];
        if (!n.is_object()) schema_fail(p, "expected an object");
        reject_unknown(n, p, {"id", "kind", "available", "properties", "guarantee"});
        Node node;
        node.id = string(field(n, p, "id"), p + ".id");
        if (node.id.empty()) schema_fail(p + ".id", "must be non-empty");
        const std::string& kind = string(field(n, p, "kind"), p + ".kind");
        if (kind == "component") node.kind = NodeKind::Component;
        else if (kind == "parameter") node.kind = NodeKind::Parameter;
        else schema_fail(p + ".kind", "expected \"component\" or \"parameter\"");
        const json& avail = field(n, p, "available");
        if (!avail.is_boolean()) schema_fail(p + ".available", "expected a boolean");
        node.available = avail.get<bool>();
        const json& props = field(n, p, "properties");
        if (!props.is_null()) node.properties = property_vector(props, p + ".properties");
        if (auto it = n.find("guarantee"); it != n.end() && !it->is_null()) {
            node.guarantee = guarantee_from(*it, p + ".guarantee");
        }
        if (kb.contains(node.id)) throw Error(ErrorCode::DuplicateId, p + ".id: '" + node.id + "' repeated");
        kb.add_node(std::move(node));
    }

    const json& edges = field(doc, "$", "edges");
    if (!edges.is_array()) schema_fail("$.edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string p = "$.edges[" + std::to_string(i) + "]";
        Edge e = edge_pair(edges[i], p);
        if (!kb.contains(e.from)) schema_fail(p + "[0]", "unknown node '" + e.from + "'");
        if (!kb.contains(e.to)) schema_fail(p + "[1]", "unknown node '" + e.to + "'");
        kb.add_edge(e.from, e.to);
    }

    if (auto it = doc.find("active_edges"); it != doc.end()) {
        if (!it->is_array()) schema_fail("$.active_edges", "expected an array");
        std::vector<Edge> active;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "$.active_edges[" + std::to_string(i) + "]";
            Edge e = edge_pair((*it)[i], p);
            if (!kb.edges().count(e)) schema_fail(p, "not an edge of the knowledge base");
            active.push_back(std::move(e));
        }
        kb.activate(active);
    }

    kb.validate();
    return kb;
}

inline nlohmann::json kb_to_json(const KnowledgeBase& kb) {
    using detail::json;
    using detail::to_json;
    json doc;
    const UtilityModel& m = kb.utility_model();
    json um;
    um["weights"] = json::object();
    for (const auto& [k, v] : m.weights()) um["weights"][k] = v;
    um["references"] = json::object();
    for (const auto& [k, v] : m.references()) um["references"][k] = v;
    if (!m.alternatives().empty()) um["alternatives"] = m.alternatives();
    doc["utility_model"] = um;

    json nodes = json::array();
    for (const auto& [id, n] : kb.nodes()) {
        json jn;
        jn["id"] = id;
        jn["kind"] = std::string(to_string(n.kind));
        jn["available"] = n.available;
        jn["properties"] = n.properties ? to_json(*n.properties) : json(nullptr);
        if (n.guarantee) {
            jn["guarantee"] = {{"vector", to_json(n.guarantee->vector)},
                               {"utility", n.guarantee->utility},
                               {"hops", n.guarantee->hops},
                               {"origin", std::string(to_string(n.guarantee->origin))}};
        }
        nodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(nodes);

    json edges = json::array();
    for (const auto& e : kb.edges()) edges.push_back({e.from, e.to});
    doc["edges"] = std::move(edges);

    if (!kb.active_edges().empty()) {
        json active = json::array();
        for (const auto& e : kb.active_edges()) active.push_back({e.from, e.to});
        doc["active_edges"] = std::move(active);
    }
    return doc;
}

inline KnowledgeBase parse_kb(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("$: malformed document: ") + e.what());
    }
    return kb_from_json(doc);
}

inline std::string dump_kb(const KnowledgeBase& kb) { return kb_to_json(kb).dump(2) + "\n"; }

inline KnowledgeBase load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::SchemaError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kb(buf.str());
}

inline void save(const KnowledgeBase& kb, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::SchemaError, "cannot write '" + path.string() + "'");
    out << dump_kb(kb);
}

} // namespace shcps
