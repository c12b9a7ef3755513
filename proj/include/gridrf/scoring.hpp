#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridrf/model.hpp"

namespace gridrf {

// Self-protection capability: plain mean of the profile's seven factors.
double compute_spc(const SecurityProfile& profile);

// Weighted SPC variant: sum(w_i * a_i) / sum(w_i). The weight table must
// cover exactly the profile's factor set (ConfigError otherwise). With a
// uniform table this equals compute_spc.
double compute_weighted_spc(const SecurityProfile& profile,
                            const WeightTable& weights);

// Node utilization NU = sum(utilized power entries) / total capacity.
// Empty log means an idle node: NU 0. Throws DomainError when tpc <= 0 or
// the logged power exceeds capacity.
double compute_node_utilization(std::span<const double> utilized_power,
                                double total_power_compute);

// Node reliability NR = successes / submissions. No submissions means no
// evidence: nullopt, never a fake zero. succeeded > submitted is
// inconsistent telemetry (DomainError).
std::optional<double> compute_node_reliability(std::uint64_t succeeded,
                                               std::uint64_t submitted);

// Reputation weight: mean of a feedback vector's attribute scores.
double compute_rw(const FeedbackVector& feedback);

// Attribute-wise mean of several feedback vectors. All vectors must carry
// the same attribute set; the result keeps the (shared) attribute order of
// the first vector. Empty input or heterogeneous attribute sets are
// DomainErrors.
FeedbackVector aggregate_feedback(std::span<const FeedbackVector> vectors);

// Reliability factor: midpoint of self-assessment and reputation.
double compute_rf(double spc, double rw);

// One row of a ranking: 1-based rank, best node first.
struct RankedNode {
    int rank = 0;
    std::string node_id;
    double rf = 0.0;

    bool operator==(const RankedNode&) const = default;
};

// Order nodes by descending RF; ties break by ascending node id so equal
// scores still rank deterministically. Duplicate ids are a DomainError.
std::vector<RankedNode> rank_nodes(
    std::span<const std::pair<std::string, double>> scores);

// The dispatch choice: id of the rank-1 node. Empty ranking means there is
// nothing to run on (NoResourceError).
std::string select_node(std::span<const RankedNode> ranking);

} // namespace gridrf
