#include "gridrf/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridrf {

namespace {

// Accumulated means of scores can drift a hair past the endpoints under
// reassociation; pin the contract.
double clamp_score(double v) {
    return std::clamp(v, 0.0, 1.0);
}

} // namespace

double compute_spc(const SecurityProfile& profile) {
    double sum = 0.0;
    for (double factor : profile.factors()) {
        sum += factor;
    }
    // n comes from the profile itself, not a constant baked into the formula.
    return clamp_score(sum / static_cast<double>(profile.factors().size()));
}

double compute_weighted_spc(const SecurityProfile& profile,
                            const WeightTable& weights) {
    const auto& names = SecurityProfile::factor_names();
    if (weights.entries().size() != names.size()) {
        throw ConfigError("weight table covers " +
                          std::to_string(weights.entries().size()) +
                          " factors, profile has " + std::to_string(names.size()));
    }
    double weighted_sum = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        // weight_of throws ConfigError-adjacent LookupError on a missing
        // factor; surface it as the config problem it is.
        double w = 0.0;
        try {
            w = weights.weight_of(names[i]);
        } catch (const LookupError&) {
            throw ConfigError("weight table has no entry for factor " + names[i]);
        }
        weighted_sum += w * profile.factors()[i];
        weight_sum += w;
    }
    return clamp_score(weighted_sum / weight_sum);
}

double compute_node_utilization(std::span<const double> utilized_power,
                                double total_power_compute) {
    if (!std::isfinite(total_power_compute) || total_power_compute <= 0.0) {
        throw DomainError("total power compute must be > 0, got " +
                          std::to_string(total_power_compute));
    }
    double used = 0.0;
    for (double entry : utilized_power) {
        if (!std::isfinite(entry) || entry < 0.0) {
            throw DomainError("utilized power entries must be >= 0");
        }
        used += entry;
    }
    if (used > total_power_compute) {
        throw DomainError("utilized power " + std::to_string(used) +
                          " exceeds capacity " +
                          std::to_string(total_power_compute));
    }
    return clamp_score(used / total_power_compute);
}

std::optional<double> compute_node_reliability(std::uint64_t succeeded,
                                               std::uint64_t submitted) {
    if (succeeded > submitted) {
        throw DomainError("successes (" + std::to_string(succeeded) +
                          ") exceed submissions (" + std::to_string(submitted) +
                          ")");
    }
    if (submitted == 0) {
        return std::nullopt;
    }
    return clamp_score(static_cast<double>(succeeded) /
                       static_cast<double>(submitted));
}

double compute_rw(const FeedbackVector& feedback) {
    double sum = 0.0;
    for (const auto& [name, value] : feedback.attributes()) {
        sum += value;
    }
    return clamp_score(sum / static_cast<double>(feedback.size()));
}

FeedbackVector aggregate_feedback(std::span<const FeedbackVector> vectors) {
    if (vectors.empty()) {
        throw DomainError("cannot aggregate zero feedback vectors");
    }
    const auto& reference = vectors.front().attributes();
    for (const auto& vec : vectors.subspan(1)) {
        if (vec.size() != reference.size()) {
            throw DomainError("feedback vectors disagree on attribute count");
        }
        for (const auto& [name, value] : reference) {
            if (!vec.has(name)) {
                throw DomainError("feedback vectors disagree on attributes: '" +
                                  name + "' missing from one of them");
            }
        }
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(reference.size());
    for (const auto& [name, first_value] : reference) {
        double sum = 0.0;
        for (const auto& vec : vectors) {
            sum += vec.value_of(name);
        }
        out.emplace_back(name,
                         clamp_score(sum / static_cast<double>(vectors.size())));
    }
    return FeedbackVector(std::move(out));
}

double compute_rf(double spc, double rw) {
    require_score(spc, "spc");
    require_score(rw, "rw");
    // Midpoint of two values in [0,1] cannot leave [0,1], no clamp needed.
    return (spc + rw) / 2.0;
}

std::vector<RankedNode> rank_nodes(
    std::span<const std::pair<std::string, double>> scores) {
    std::set<std::string> seen;
    std::vector<RankedNode> ranking;
    ranking.reserve(scores.size());
    for (const auto& [node_id, rf] : scores) {
        if (node_id.empty()) {
            throw DomainError("cannot rank a node with an empty id");
        }
        if (!seen.insert(node_id).second) {
            throw DomainError("duplicate node id '" + node_id + "' in ranking");
        }
        require_score(rf, "rf of " + node_id);
        ranking.push_back(RankedNode{0, node_id, rf});
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankedNode& a, const RankedNode& b) {
                         if (a.rf != b.rf) {
                             return a.rf > b.rf;
                         }
                         return a.node_id < b.node_id;
                     });
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        ranking[i].rank = static_cast<int>(i) + 1;
    }
    return ranking;
}

std::string select_node(std::span<const RankedNode> ranking) {
    if (ranking.empty()) {
        throw NoResourceError("no nodes available for selection");
    }
    return ranking.front().node_id;
}

} // namespace gridrf
