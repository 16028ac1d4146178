#pragma once

#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "shcps/healer.hpp"
#include "shcps/search.hpp"

namespace shcps {

/// Shortest round-trip decimal form; empty for NaN.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline nlohmann::json outcome_to_json(const SearchOutcome& o, std::optional<double> theta) {
    nlohmann::json j;
    j["strategy"] = o.strategy.name();
    j["theta"] = theta ? nlohmann::json(*theta) : nlohmann::json(nullptr);
    j["failed"] = o.failed;
    j["requirement"] = o.requirement ? nlohmann::json(o.requirement->threshold) : nlohmann::json(nullptr);
    j["substitutions"] = o.substitutions.size();
    j["explored"] = o.explored;
    j["elapsed_s"] = o.elapsed;
    if (o.best) {
        j["best_utility"] = o.best->utility;
        j["best_nodes"] = o.best->nodes;
    } else {
        j["best_utility"] = nullptr;
        j["best_nodes"] = nlohmann::json::array();
    }
    return j;
}

inline nlohmann::json report_to_json(const RecoveryReport& r) {
    nlohmann::json j = outcome_to_json(r.outcome, r.theta);
    j["fault"] = {{"node", r.fault.node}, {"timestamp", r.fault.timestamp}};
    j["requirement"] = r.requirement;
    j["compliant"] = r.compliant;
    j["applied_utility"] = r.applied ? nlohmann::json(r.applied->utility) : nlohmann::json(nullptr);
    j["applied_nodes"] = r.applied ? nlohmann::json(r.applied->nodes) : nlohmann::json::array();
    j["post_guarantee"] = r.post_guarantee ? nlohmann::json(*r.post_guarantee) : nlohmann::json(nullptr);
    j["search_elapsed_s"] = r.search_elapsed;
    return j;
}

namespace detail {

inline void row(std::ostream& os, const std::string& key, const std::string& value) {
    os << "  " << std::left << std::setw(16) << key << value << '\n';
}

inline std::string join(const std::vector<NodeId>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out;
}

} // namespace detail

inline void print_outcome(std::ostream& os, const SearchOutcome& o, std::optional<double> theta) {
    os << o.strategy.name() << " search for '" << o.failed << "'\n";
    if (theta) detail::row(os, "theta", format_number(*theta));
    detail::row(os, "requirement", o.requirement ? format_number(o.requirement->threshold) : "-");
    detail::row(os, "substitutions", std::to_string(o.substitutions.size()));
    detail::row(os, "explored", std::to_string(o.explored));
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(3) << o.elapsed * 1e3 << " ms";
    detail::row(os, "elapsed", ms.str());
    detail::row(os, "best utility", o.best ? format_number(o.best->utility) : "-");
    if (o.best) detail::row(os, "best nodes", detail::join(o.best->nodes));
}

inline void print_report(std::ostream& os, const RecoveryReport& r) {
    print_outcome(os, r.outcome, r.theta);
    detail::row(os, "compliant", r.compliant ? "yes" : "no");
    detail::row(os, "applied", r.applied ? detail::join(r.applied->nodes) : "-");
    detail::row(os, "post guarantee", r.post_guarantee ? format_number(*r.post_guarantee) : "-");
}

} // namespace shcps
