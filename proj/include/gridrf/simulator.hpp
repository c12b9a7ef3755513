#pragma once

#include <cstdint>
#include <vector>

#include "gridrf/gom.hpp"
#include "gridrf/model.hpp"

namespace gridrf {

// Linear failure model: p_fail = clamp(alpha * (1 - rf), 0, 1). This is
// harness plumbing, not a measured law — the reference experiment reports
// that higher-RF nodes fail less but never says how failures were drawn,
// so we use the minimal model with that property and expose alpha.
struct FailureModel {
    double alpha = 1.0;
};

// Probability that a job fails on a node with the given reliability
// factor. Strictly decreasing in rf while unclamped; alpha <= 0 is a
// ConfigError.
double failure_probability(double rf, const FailureModel& model);

enum class AssignmentMode {
    broker,      // every job goes through the manager's RF ranking
    round_robin, // stress every node evenly for per-node failure curves
};

struct SimConfig {
    std::uint64_t total_jobs = 1000;
    // Job-count marks at which cumulative counts are sampled; strictly
    // increasing, last <= total_jobs. Empty means quartile defaults.
    std::vector<std::uint64_t> checkpoints;
    std::uint64_t seed = 0;
    AssignmentMode assignment_mode = AssignmentMode::broker;
    FailureModel failure_model;
    // When on, each outcome flows through the manager (record_outcome), so
    // measured NR/NU drift RW and RF during the run. When off, the manager
    // keeps its initial scores and the harness tallies outcomes itself.
    bool feedback_loop = false;
};

// Deterministic workload: n jobs with ids J1..Jn and required_power drawn
// uniformly from [1, 10) power units by a generator seeded from `seed`.
std::vector<JobSpec> generate_workload(std::uint64_t n, std::uint64_t seed);

// Quartile marks for a run of `total_jobs` (deduplicated, zero dropped):
// 1000 -> {250, 500, 750, 1000}; 0 -> {}.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t total_jobs);

// Runs one seeded experiment over the given nodes and reports cumulative
// per-node failure and assignment counts at each checkpoint. Deterministic
// for a fixed (config, nodes) pair; the generator identity is recorded in
// the result.
ExperimentResult run_experiment(const SimConfig& config,
                                const std::vector<NodeFixture>& nodes);

} // namespace gridrf
