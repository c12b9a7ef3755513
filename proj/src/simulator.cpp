#include "gridrf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gridrf {

namespace {

constexpr const char* kRngName = "mt19937_64";

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    // Distinct streams (workload vs outcomes) from one user-facing seed.
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

// Uniform double in [0, 1) from the top 53 bits. std::uniform_real_distribution
// is implementation-defined; this keeps runs reproducible across compilers.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double effective_rf(const NodeRecord& rec) {
    return rec.rf ? *rec.rf : rec.spc;
}

void validate_config(const SimConfig& config,
                     const std::vector<NodeFixture>& nodes) {
    if (nodes.empty()) {
        throw ConfigError("experiment needs at least one node");
    }
    if (!std::isfinite(config.failure_model.alpha) ||
        config.failure_model.alpha <= 0.0) {
        throw ConfigError("failure model alpha must be > 0");
    }
    const auto& cps = config.checkpoints;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] == 0) {
            throw ConfigError("checkpoints must be positive job counts");
        }
        if (i > 0 && cps[i] <= cps[i - 1]) {
            throw ConfigError("checkpoints must be strictly increasing");
        }
    }
    if (!cps.empty() && cps.back() > config.total_jobs) {
        throw ConfigError("last checkpoint exceeds total_jobs");
    }
}

} // namespace

double failure_probability(double rf, const FailureModel& model) {
    if (!std::isfinite(model.alpha) || model.alpha <= 0.0) {
        throw ConfigError("failure model alpha must be > 0");
    }
    require_score(rf, "rf");
    return std::clamp(model.alpha * (1.0 - rf), 0.0, 1.0);
}

std::vector<JobSpec> generate_workload(std::uint64_t n, std::uint64_t seed) {
    auto rng = make_stream(seed, 0);
    std::vector<JobSpec> jobs;
    jobs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        double required = 1.0 + 9.0 * u01(rng);
        jobs.emplace_back("J" + std::to_string(i + 1), required);
    }
    return jobs;
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t total_jobs) {
    std::vector<std::uint64_t> marks;
    for (std::uint64_t quarter = 1; quarter <= 4; ++quarter) {
        // ceil(q * total / 4) without overflow at realistic job counts
        std::uint64_t mark = (quarter * total_jobs + 3) / 4;
        if (mark > 0 && (marks.empty() || mark > marks.back())) {
            marks.push_back(mark);
        }
    }
    return marks;
}

ExperimentResult run_experiment(const SimConfig& config,
                                const std::vector<NodeFixture>& nodes) {
    validate_config(config, nodes);

    Gom gom;
    for (const auto& fixture : nodes) {
        gom.register_node(fixture.id, fixture.profile, fixture.tpc,
                          fixture.feedback);
    }

    std::vector<std::string> node_ids;
    node_ids.reserve(nodes.size());
    for (const auto& [id, rec] : gom.nodes()) {
        node_ids.push_back(id);
    }

    std::vector<std::uint64_t> checkpoints =
        config.checkpoints.empty() ? default_checkpoints(config.total_jobs)
                                   : config.checkpoints;

    ExperimentResult result;
    result.checkpoints = checkpoints;
    result.node_ids = node_ids;
    result.cum_failures.assign(node_ids.size(), {});
    result.jobs_assigned.assign(node_ids.size(), {});
    result.seed = config.seed;
    result.alpha = config.failure_model.alpha;
    result.rng = kRngName;

    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
        node_index[node_ids[i]] = i;
    }

    auto workload = generate_workload(config.total_jobs, config.seed);
    auto outcome_rng = make_stream(config.seed, 1);

    std::vector<std::uint64_t> failures(node_ids.size(), 0);
    std::vector<std::uint64_t> assigned(node_ids.size(), 0);
    std::size_t next_checkpoint = 0;

    for (std::uint64_t j = 0; j < config.total_jobs; ++j) {
        const JobSpec& job = workload[j];

        std::string chosen;
        if (config.assignment_mode == AssignmentMode::round_robin) {
            chosen = node_ids[j % node_ids.size()];
            gom.dispatch_to(job, chosen);
        } else {
            chosen = gom.submit_job(job).node_id;
        }
        std::size_t idx = node_index.at(chosen);

        double p = failure_probability(effective_rf(gom.node(chosen)),
                                       config.failure_model);
        bool failed = u01(outcome_rng) < p;

        ++assigned[idx];
        if (failed) {
            ++failures[idx];
        }
        if (config.feedback_loop) {
            gom.record_outcome(JobOutcome{
                .job_id = job.job_id(),
                .node_id = chosen,
                .success = !failed,
                .utilized_power = failed ? 0.0 : job.required_power()});
        }

        while (next_checkpoint < checkpoints.size() &&
               checkpoints[next_checkpoint] == j + 1) {
            for (std::size_t i = 0; i < node_ids.size(); ++i) {
                result.cum_failures[i].push_back(failures[i]);
                result.jobs_assigned[i].push_back(assigned[i]);
            }
            ++next_checkpoint;
        }
    }

    result.validate();
    return result;
}

} // namespace gridrf
