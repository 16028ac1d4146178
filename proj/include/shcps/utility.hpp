#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shcps/error.hpp"

namespace shcps {

using PropertyName = std::string;

/// Absolute tolerance for every utility comparison against a requirement.
inline constexpr double kUtilityEpsilon = 1e-9;

/// Named, non-negative property values of a node (range in metres, accuracy
/// in percent, field of view in degrees, polling rate in Hz, frame rate...).
class PropertyVector {
public:
    PropertyVector() = default;
    PropertyVector(std::initializer_list<std::pair<const PropertyName, double>> values) {
        for (const auto& [name, value] : values) set(name, value);
    }

    void set(const PropertyName& name, double value) {
        if (!std::isfinite(value) || value < 0.0) {
            throw Error(ErrorCode::InvalidValue,
                        "property '" + name + "' must be finite and >= 0");
        }
        values_[name] = value;
    }

    std::optional<double> get(const PropertyName& name) const {
        auto it = values_.find(name);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const PropertyName& name) const { return values_.count(name) != 0; }
    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    const std::map<PropertyName, double>& values() const { return values_; }

    bool operator==(const PropertyVector&) const = default;

private:
    std::map<PropertyName, double> values_;
};

/// Weighted multi-attribute utility over normalised property scores.
///
/// Weighted properties may be declared as mutually exclusive alternatives
/// (e.g. a polling frequency in Hz and a frame rate in FPS both measure the
/// update rate of a sensor). An alternatives group contributes the best of
/// its members' weighted scores, and counts once, with its largest weight,
/// towards the weight total. A property not listed in any group forms its own
/// group. The weight total must be 1 within 1e-9, which bounds every node
/// utility to [0, 1].
class UtilityModel {
public:
    UtilityModel() = default;
    UtilityModel(std::map<PropertyName, double> weights,
                 std::map<PropertyName, double> references,
                 std::vector<std::vector<PropertyName>> alternatives = {})
        : weights_(std::move(weights)), references_(std::move(references)),
          alternatives_(std::move(alternatives)) {
        validate();
        build_groups();
    }

    /// Distance-sensing model: range, accuracy, horizontal field of view,
    /// polling frequency and frame rate, referenced to 10 m, 100 %, 360 deg,
    /// 500 Hz and 30 FPS. Freq and FPS are alternatives.
    static UtilityModel distance_sensing() {
        return UtilityModel({{"Range", 0.3}, {"Acc", 0.4}, {"HFOV", 0.2}, {"Freq", 0.1}, {"FPS", 0.1}},
                            {{"Range", 10.0}, {"Acc", 100.0}, {"HFOV", 360.0}, {"Freq", 500.0}, {"FPS", 30.0}},
                            {{"Freq", "FPS"}});
    }

    const std::map<PropertyName, double>& weights() const { return weights_; }
    const std::map<PropertyName, double>& references() const { return references_; }
    const std::vector<std::vector<PropertyName>>& alternatives() const { return alternatives_; }

    bool empty() const { return weights_.empty(); }

    /// Effective weight total: sum over groups of the group's largest weight.
    double weight_total() const {
        double total = 0.0;
        for (const auto& group : groups_) {
            double w = 0.0;
            for (const auto& name : group) w = std::max(w, weights_.at(name));
            total += w;
        }
        return total;
    }

    double normalize(const PropertyName& name, double value) const {
        auto it = references_.find(name);
        if (it == references_.end()) {
            throw Error(ErrorCode::UnknownProperty, "no normalisation reference for '" + name + "'");
        }
        if (!std::isfinite(value) || value < 0.0) {
            throw Error(ErrorCode::InvalidValue, "property '" + name + "' must be finite and >= 0");
        }
        return std::min(value / it->second, 1.0);
    }

    /// Properties outside the weight set are ignored; weighted properties
    /// missing from `p` score 0.
    double node_utility(const PropertyVector& p) const {
        double u = 0.0;
        for (const auto& group : groups_) {
            double best = 0.0;
            for (const auto& name : group) {
                if (auto v = p.get(name)) best = std::max(best, weights_.at(name) * normalize(name, *v));
            }
            u += best;
        }
        return std::clamp(u, 0.0, 1.0);
    }

    bool operator==(const UtilityModel& other) const {
        return weights_ == other.weights_ && references_ == other.references_ &&
               alternatives_ == other.alternatives_;
    }

private:
    void validate() const {
        for (const auto& [name, w] : weights_) {
            if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
                throw Error(ErrorCode::InvalidModel, "weight of '" + name + "' must lie in [0,1]");
            }
            auto ref = references_.find(name);
            if (ref == references_.end()) {
                throw Error(ErrorCode::InvalidModel, "weighted property '" + name + "' has no reference");
            }
        }
        for (const auto& [name, r] : references_) {
            if (!std::isfinite(r) || r <= 0.0) {
                throw Error(ErrorCode::InvalidModel, "reference of '" + name + "' must be positive");
            }
        }
        std::set<PropertyName> seen;
        for (const auto& group : alternatives_) {
            if (group.size() < 2) {
                throw Error(ErrorCode::InvalidModel, "an alternatives group needs at least two properties");
            }
            for (const auto& name : group) {
                if (!weights_.count(name)) {
                    throw Error(ErrorCode::InvalidModel, "alternative '" + name + "' is not weighted");
                }
                if (!seen.insert(name).second) {
                    throw Error(ErrorCode::InvalidModel, "'" + name + "' appears in two alternatives groups");
                }
            }
        }
    }

    void build_groups() {
        groups_ = alternatives_;
        std::set<PropertyName> grouped;
        for (const auto& g : alternatives_) grouped.insert(g.begin(), g.end());
        for (const auto& [name, w] : weights_) {
            if (!grouped.count(name)) groups_.push_back({name});
        }
        if (!weights_.empty() && std::abs(weight_total() - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidModel,
                        "weights must sum to 1 (got " + std::to_string(weight_total()) + ")");
        }
    }

    std::map<PropertyName, double> weights_;
    std::map<PropertyName, double> references_;
    std::vector<std::vector<PropertyName>> alternatives_;
    std::vector<std::vector<PropertyName>> groups_;
};

inline double normalize(const UtilityModel& model, const PropertyName& name, double value) {
    return model.normalize(name, value);
}

inline double node_utility(const UtilityModel& model, const PropertyVector& p) {
    return model.node_utility(p);
}

/// Multiplicative aggregation; the empty product is 1.
inline double combined_utility(std::span<const double> utilities) {
    double product = 1.0;
    for (double u : utilities) {
        if (!(u >= 0.0 && u <= 1.0)) {
            throw Error(ErrorCode::OutOfRange, "utility " + std::to_string(u) + " outside [0,1]");
        }
        product *= u;
    }
    return product;
}

inline double combined_utility(std::initializer_list<double> utilities) {
    return combined_utility(std::span<const double>(utilities.begin(), utilities.size()));
}

struct RankedNode {
    std::string id;
    double utility = 0.0;
    int rank = 0;
};

/// Descending utility, ties broken by id; ranks are 1-based and distinct.
inline std::vector<RankedNode> rank_nodes(const UtilityModel& model,
                                          const std::vector<std::pair<std::string, PropertyVector>>& nodes) {
    std::vector<RankedNode> ranked;
    ranked.reserve(nodes.size());
    for (const auto& [id, p] : nodes) ranked.push_back({id, model.node_utility(p), 0});
    std::sort(ranked.begin(), ranked.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.utility != b.utility) return a.utility > b.utility;
        return a.id < b.id;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = static_cast<int>(i) + 1;
    return ranked;
}

/// Per-property min / mean / max over a set of vectors. A property absent
/// from a vector does not take part in that property's statistic.
struct PropertySummary {
    PropertyVector min;
    PropertyVector mean;
    PropertyVector max;
};

inline PropertySummary summarize(std::span<const PropertyVector> vectors) {
    std::map<PropertyName, std::vector<double>> columns;
    for (const auto& v : vectors) {
        for (const auto& [name, value] : v) columns[name].push_back(value);
    }
    PropertySummary s;
    for (const auto& [name, col] : columns) {
        double sum = 0.0;
        for (double x : col) sum += x;
        s.min.set(name, *std::min_element(col.begin(), col.end()));
        s.max.set(name, *std::max_element(col.begin(), col.end()));
        s.mean.set(name, sum / static_cast<double>(col.size()));
    }
    return s;
}

} // namespace shcps
