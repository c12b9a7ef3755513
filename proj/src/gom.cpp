#include "gridrf/gom.hpp"

#include <algorithm>
#include <cmath>

namespace gridrf {

Gom::Gom(GomConfig config) : config_(std::move(config)) {
    if (config_.refresh_every == 0) {
        throw ConfigError("refresh_every must be at least 1");
    }
}

const NodeRecord& Gom::register_node(
    const std::string& node_id, const SecurityProfile& profile, double tpc,
    const std::optional<FeedbackVector>& seed_feedback) {
    if (node_id.empty()) {
        throw DomainError("node id must not be empty");
    }
    if (nodes_.contains(node_id)) {
        throw LookupError("node '" + node_id + "' is already registered");
    }
    if (!std::isfinite(tpc) || tpc <= 0.0) {
        throw DomainError("node " + node_id + ": total power compute must be > 0");
    }

    NodeRecord rec{.node_id = node_id,
                   .profile = profile,
                   .aggregated_feedback = std::nullopt,
                   .spc = spc_of(profile),
                   .rw = std::nullopt,
                   .rf = std::nullopt,
                   .jobs_submitted = 0,
                   .jobs_succeeded = 0,
                   .utilized_power_log = {},
                   .total_power_compute = tpc};
    auto [it, inserted] = nodes_.emplace(node_id, std::move(rec));
    outstanding_[node_id] = 0;
    feedback_store_[node_id] = {};

    if (seed_feedback) {
        feedback_store_[node_id].push_back(*seed_feedback);
        it->second.aggregated_feedback = *seed_feedback;
        // Bootstrap scores right away; seeding is not a lagging event.
        refresh_node(it->second);
    }
    return it->second;
}

bool Gom::has_node(const std::string& node_id) const {
    return nodes_.contains(node_id);
}

const NodeRecord& Gom::node(const std::string& node_id) const {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end()) {
        throw LookupError("unknown node '" + node_id + "'");
    }
    return it->second;
}

NodeRecord& Gom::node_mut(const std::string& node_id) {
    auto it = nodes_.find(node_id);
    if (it == nodes_.end()) {
        throw LookupError("unknown node '" + node_id + "'");
    }
    return it->second;
}

double Gom::spc_of(const SecurityProfile& profile) const {
    return config_.spc_weights ? compute_weighted_spc(profile, *config_.spc_weights)
                               : compute_spc(profile);
}

double Gom::report_spc(const std::string& node_id,
                       const SecurityProfile& profile) {
    NodeRecord& rec = node_mut(node_id);
    rec.profile = profile;
    rec.spc = spc_of(profile);
    // Self-assessment feeds RF directly; keep the midpoint identity intact
    // instead of waiting on the next reputation event.
    if (rec.rw) {
        rec.rf = compute_rf(rec.spc, *rec.rw);
    }
    return rec.spc;
}

const DispatchEntry& Gom::submit_job(const JobSpec& job) {
    std::vector<std::pair<std::string, double>> scores;
    scores.reserve(nodes_.size());
    for (const auto& [id, rec] : nodes_) {
        if (rec.rf) {
            scores.emplace_back(id, *rec.rf);
        } else if (config_.include_provisional) {
            scores.emplace_back(id, rec.spc);
        }
    }
    auto ranking = rank_nodes(scores);
    std::string chosen = select_node(ranking);
    return book_dispatch(job, node_mut(chosen));
}

const DispatchEntry& Gom::dispatch_to(const JobSpec& job,
                                      const std::string& node_id) {
    return book_dispatch(job, node_mut(node_id));
}

const DispatchEntry& Gom::book_dispatch(const JobSpec& job, NodeRecord& rec) {
    if (in_flight_.contains(job.job_id()) ||
        completed_jobs_.contains(job.job_id())) {
        throw DomainError("job '" + job.job_id() + "' was already dispatched");
    }
    // A dispatch to an idle node opens a fresh assignment window: NU then
    // measures this assignment, not the node's whole service history.
    if (outstanding_[rec.node_id] == 0) {
        rec.utilized_power_log.clear();
    }
    dispatch_log_.push_back(
        DispatchEntry{job.job_id(), rec.node_id, job.required_power()});
    in_flight_[job.job_id()] = rec.node_id;
    ++outstanding_[rec.node_id];
    ++rec.jobs_submitted;
    return dispatch_log_.back();
}

void Gom::record_outcome(const JobOutcome& outcome) {
    auto it = in_flight_.find(outcome.job_id);
    if (it == in_flight_.end()) {
        if (completed_jobs_.contains(outcome.job_id)) {
            throw DomainError("outcome for job '" + outcome.job_id +
                              "' was already recorded");
        }
        throw LookupError("no dispatched job '" + outcome.job_id + "'");
    }
    if (outcome.node_id != it->second) {
        throw DomainError("job '" + outcome.job_id + "' ran on '" + it->second +
                          "', outcome claims '" + outcome.node_id + "'");
    }
    NodeRecord& rec = node_mut(it->second);

    if (!std::isfinite(outcome.utilized_power) || outcome.utilized_power < 0.0) {
        throw DomainError("job '" + outcome.job_id +
                          "': utilized power must be >= 0");
    }
    double window = outcome.utilized_power;
    for (double used : rec.utilized_power_log) {
        window += used;
    }
    if (window > rec.total_power_compute) {
        throw DomainError("job '" + outcome.job_id + "': node " + rec.node_id +
                          " window would exceed capacity");
    }

    // Validated; commit atomically.
    if (outcome.success) {
        ++rec.jobs_succeeded;
    }
    rec.utilized_power_log.push_back(outcome.utilized_power);
    --outstanding_[rec.node_id];
    in_flight_.erase(it);
    completed_jobs_.insert(outcome.job_id);
    note_reputation_event(rec.node_id);
}

void Gom::record_feedback(const std::string& node_id,
                          const FeedbackVector& feedback) {
    NodeRecord& rec = node_mut(node_id);
    if (rec.jobs_submitted == 0) {
        throw DomainError("node '" + node_id +
                          "' has served no jobs; feedback rejected");
    }
    auto& store = feedback_store_[node_id];
    if (!store.empty()) {
        // Schema must match the node's first feedback; check before mutating.
        const auto& first = store.front();
        if (feedback.size() != first.size()) {
            throw DomainError("feedback for '" + node_id +
                              "' disagrees on attribute count");
        }
        for (const auto& [name, value] : first.attributes()) {
            if (!feedback.has(name)) {
                throw DomainError("feedback for '" + node_id +
                                  "' is missing attribute '" + name + "'");
            }
        }
    }
    store.push_back(feedback);
    rec.aggregated_feedback = aggregate_feedback(store);
    note_reputation_event(node_id);
}

const std::vector<FeedbackVector>& Gom::feedback_for(
    const std::string& node_id) const {
    auto it = feedback_store_.find(node_id);
    if (it == feedback_store_.end()) {
        throw LookupError("unknown node '" + node_id + "'");
    }
    return it->second;
}

std::optional<FeedbackVector> Gom::effective_feedback(
    const std::string& node_id) const {
    const NodeRecord& rec = node(node_id);
    if (!rec.aggregated_feedback) {
        return std::nullopt;
    }
    FeedbackVector effective = *rec.aggregated_feedback;
    // Once the manager has seen real outcomes it trusts its own telemetry
    // for reliability and utilization over user-reported figures.
    std::uint64_t resolved = rec.jobs_submitted - outstanding_.at(node_id);
    if (resolved > 0) {
        if (effective.has("NR")) {
            auto nr = compute_node_reliability(rec.jobs_succeeded,
                                               rec.jobs_submitted);
            effective = effective.with_value("NR", *nr);
        }
        if (effective.has("NU")) {
            double nu = compute_node_utilization(rec.utilized_power_log,
                                                 rec.total_power_compute);
            effective = effective.with_value("NU", nu);
        }
    }
    return effective;
}

void Gom::note_reputation_event(const std::string& node_id) {
    dirty_nodes_.insert(node_id);
    if (++events_since_refresh_ >= config_.refresh_every) {
        for (const auto& id : dirty_nodes_) {
            refresh_node(node_mut(id));
        }
        dirty_nodes_.clear();
        events_since_refresh_ = 0;
    }
}

void Gom::refresh_node(NodeRecord& rec) {
    auto effective = effective_feedback(rec.node_id);
    if (!effective) {
        return; // still provisional; nothing to score
    }
    rec.rw = compute_rw(*effective);
    rec.rf = compute_rf(rec.spc, *rec.rw);
}

std::vector<SnapshotRow> Gom::snapshot() const {
    std::vector<std::pair<std::string, double>> scores;
    std::vector<const NodeRecord*> benched;
    for (const auto& [id, rec] : nodes_) {
        if (rec.rf) {
            scores.emplace_back(id, *rec.rf);
        } else if (config_.include_provisional) {
            scores.emplace_back(id, rec.spc);
        } else {
            benched.push_back(&rec);
        }
    }

    std::vector<SnapshotRow> rows;
    rows.reserve(nodes_.size());
    for (const auto& ranked : rank_nodes(scores)) {
        const NodeRecord& rec = node(ranked.node_id);
        rows.push_back(SnapshotRow{.rank = ranked.rank,
                                   .node_id = ranked.node_id,
                                   .spc = rec.spc,
                                   .rw = rec.rw,
                                   .rf = ranked.rf,
                                   .provisional = !rec.rf.has_value()});
    }

    // Excluded provisional nodes trail the ranking, best SPC first, so the
    // snapshot still covers the whole registry.
    std::sort(benched.begin(), benched.end(),
              [](const NodeRecord* a, const NodeRecord* b) {
                  if (a->spc != b->spc) {
                      return a->spc > b->spc;
                  }
                  return a->node_id < b->node_id;
              });
    for (const NodeRecord* rec : benched) {
        rows.push_back(SnapshotRow{.rank = static_cast<int>(rows.size()) + 1,
                                   .node_id = rec->node_id,
                                   .spc = rec->spc,
                                   .rw = std::nullopt,
                                   .rf = rec->spc,
                                   .provisional = true});
    }
    return rows;
}

std::uint64_t Gom::outstanding_jobs(const std::string& node_id) const {
    auto it = outstanding_.find(node_id);
    if (it == outstanding_.end()) {
        throw LookupError("unknown node '" + node_id + "'");
    }
    return it->second;
}

} // namespace gridrf
