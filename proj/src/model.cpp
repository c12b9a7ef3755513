#include "gridrf/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridrf {

bool is_score(double v) {
    return std::isfinite(v) && v >= 0.0 && v <= 1.0;
}

void require_score(double v, const std::string& what) {
    if (!is_score(v)) {
        throw DomainError(what + " must be a score in [0,1], got " +
                          std::to_string(v));
    }
}

SecurityProfile::SecurityProfile(double as, double avc, double fc, double am,
                                 double bf, double na, double ips)
    : factors_{as, avc, fc, am, bf, na, ips} {
    for (std::size_t i = 0; i < factor_count; ++i) {
        require_score(factors_[i], "security factor " + factor_names()[i]);
    }
}

const std::array<std::string, SecurityProfile::factor_count>&
SecurityProfile::factor_names() {
    static const std::array<std::string, factor_count> names = {
        "AS", "AVC", "FC", "AM", "BF", "NA", "IPS"};
    return names;
}

WeightTable::WeightTable()
    : WeightTable({{"AS", 0.82},
                   {"AVC", 0.85},
                   {"FC", 0.90},
                   {"AM", 0.80},
                   {"BF", 0.70},
                   {"NA", 0.60},
                   {"IPS", 0.75}}) {}

WeightTable::WeightTable(std::vector<std::pair<std::string, double>> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ConfigError("weight table must not be empty");
    }
    std::set<std::string> seen;
    for (const auto& [name, weight] : entries_) {
        if (name.empty()) {
            throw ConfigError("weight table entry with empty factor name");
        }
        if (!seen.insert(name).second) {
            throw ConfigError("duplicate factor '" + name + "' in weight table");
        }
        if (!std::isfinite(weight) || weight <= 0.0 || weight > 1.0) {
            throw ConfigError("weight for '" + name +
                              "' must be in (0,1], got " + std::to_string(weight));
        }
    }
}

WeightTable WeightTable::uniform(double weight) {
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& name : SecurityProfile::factor_names()) {
        entries.emplace_back(name, weight);
    }
    return WeightTable(std::move(entries));
}

double WeightTable::weight_of(const std::string& name) const {
    for (const auto& [entry_name, weight] : entries_) {
        if (entry_name == name) {
            return weight;
        }
    }
    throw LookupError("no weight for factor '" + name + "'");
}

FeedbackVector::FeedbackVector(
    std::vector<std::pair<std::string, double>> attributes)
    : attributes_(std::move(attributes)) {
    if (attributes_.empty()) {
        throw DomainError("feedback vector must have at least one attribute");
    }
    std::set<std::string> seen;
    for (const auto& [name, value] : attributes_) {
        if (name.empty()) {
            throw DomainError("feedback attribute with empty name");
        }
        if (!seen.insert(name).second) {
            throw DomainError("duplicate feedback attribute '" + name + "'");
        }
        require_score(value, "feedback attribute " + name);
    }
}

bool FeedbackVector::has(const std::string& name) const {
    return std::any_of(attributes_.begin(), attributes_.end(),
                       [&](const auto& a) { return a.first == name; });
}

double FeedbackVector::value_of(const std::string& name) const {
    for (const auto& [attr_name, value] : attributes_) {
        if (attr_name == name) {
            return value;
        }
    }
    throw LookupError("no feedback attribute '" + name + "'");
}

FeedbackVector FeedbackVector::with_value(const std::string& name,
                                          double value) const {
    auto attrs = attributes_;
    for (auto& [attr_name, attr_value] : attrs) {
        if (attr_name == name) {
            attr_value = value;
            return FeedbackVector(std::move(attrs));
        }
    }
    throw LookupError("no feedback attribute '" + name + "' to replace");
}

JobSpec::JobSpec(std::string job_id, double required_power, std::string metadata)
    : job_id_(std::move(job_id)),
      required_power_(required_power),
      metadata_(std::move(metadata)) {
    if (job_id_.empty()) {
        throw DomainError("job id must not be empty");
    }
    if (!std::isfinite(required_power_) || required_power_ <= 0.0) {
        throw DomainError("job " + job_id_ + ": required_power must be > 0, got " +
                          std::to_string(required_power_));
    }
}

void ExperimentResult::validate() const {
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) {
            throw DomainError("checkpoints must be strictly increasing");
        }
    }
    if (cum_failures.size() != node_ids.size() ||
        jobs_assigned.size() != node_ids.size()) {
        throw DomainError("per-node count rows do not match node list");
    }
    for (std::size_t n = 0; n < node_ids.size(); ++n) {
        if (n > 0 && !(node_ids[n - 1] < node_ids[n])) {
            throw DomainError("node ids must be ascending and unique");
        }
        if (cum_failures[n].size() != checkpoints.size() ||
            jobs_assigned[n].size() != checkpoints.size()) {
            throw DomainError("count row length does not match checkpoint list");
        }
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            if (cum_failures[n][c] > jobs_assigned[n][c]) {
                throw DomainError("node " + node_ids[n] +
                                  ": more failures than assignments");
            }
            if (c > 0 && (cum_failures[n][c] < cum_failures[n][c - 1] ||
                          jobs_assigned[n][c] < jobs_assigned[n][c - 1])) {
                throw DomainError("node " + node_ids[n] +
                                  ": cumulative counts decreased");
            }
        }
    }
}

} // namespace gridrf
