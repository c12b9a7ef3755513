#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridrf/model.hpp"
#include "gridrf/scoring.hpp"

namespace gridrf {

// Manager behaviour knobs.
struct GomConfig {
    // Refresh RW/RF after every k-th reputation event (outcome or feedback).
    // 1 means scores never lag telemetry.
    std::uint64_t refresh_every = 1;

    // Nodes without any feedback have no reputation; by default they are
    // kept out of the ranking. Setting this admits them at RF = SPC.
    bool include_provisional = false;

    // When set, SPC uses the weighted mean with this table instead of the
    // plain mean.
    std::optional<WeightTable> spc_weights;
};

// One dispatch decision, in order of occurrence.
struct DispatchEntry {
    std::string job_id;
    std::string node_id;
    double required_power = 0.0;

    bool operator==(const DispatchEntry&) const = default;
};

// One row of a manager snapshot. Provisional nodes (no feedback yet) carry
// no rw and report rf = spc; they are listed after the ranked nodes unless
// the config admits them into the ranking proper.
struct SnapshotRow {
    int rank = 0;
    std::string node_id;
    double spc = 0.0;
    std::optional<double> rw;
    double rf = 0.0;
    bool provisional = false;

    bool operator==(const SnapshotRow&) const = default;
};

// Grid organization manager: owns the node registry, folds self-assessment
// and user feedback into per-node reliability factors, and places jobs on
// the top-ranked node. Fully deterministic: the same event sequence always
// produces the same state and snapshot. Membership is fixed once
// registered — absence is modelled by loading a filtered fixture, not by
// removal.
class Gom {
public:
    explicit Gom(GomConfig config = {});

    const GomConfig& config() const { return config_; }

    // -- registry ---------------------------------------------------------

    // Adds a node. SPC is computed immediately; RW stays provisional until
    // feedback arrives. seed_feedback, used when loading fixtures, counts
    // as one already-recorded feedback vector and bootstraps RW/RF in the
    // same call. Duplicate or empty ids and non-positive capacity are
    // rejected without touching the registry.
    const NodeRecord& register_node(
        const std::string& node_id, const SecurityProfile& profile, double tpc,
        const std::optional<FeedbackVector>& seed_feedback = std::nullopt);

    bool has_node(const std::string& node_id) const;
    std::size_t node_count() const { return nodes_.size(); }

    // Read-only record access; LookupError for unknown ids.
    const NodeRecord& node(const std::string& node_id) const;
    const std::map<std::string, NodeRecord>& nodes() const { return nodes_; }

    // -- self-assessment --------------------------------------------------

    // Replaces a node's security profile with a fresh self-report and
    // recomputes SPC (and RF, when reputation exists) immediately.
    // Returns the updated SPC.
    double report_spc(const std::string& node_id, const SecurityProfile& profile);

    // -- dispatch ---------------------------------------------------------

    // Ranks eligible nodes by RF and dispatches to rank 1. Returns the
    // ledger entry (job id, chosen node id). NoResourceError when nothing
    // is eligible.
    const DispatchEntry& submit_job(const JobSpec& job);

    // Directed dispatch, bypassing the ranking (operator override and the
    // round-robin baseline use this). Same ledger bookkeeping as submit_job.
    const DispatchEntry& dispatch_to(const JobSpec& job,
                                     const std::string& node_id);

    // Records the terminal outcome of a dispatched job, exactly once.
    // The outcome's node must match the dispatch ledger. Utilized power
    // lands in the node's current assignment window; replays, unknown jobs
    // and mismatched nodes are rejected without changing any counter.
    void record_outcome(const JobOutcome& outcome);

    // -- reputation -------------------------------------------------------

    // Appends one user feedback vector to the node's store and refolds the
    // aggregate. Feedback is only accepted for nodes that have served at
    // least one job; the first vector fixes the node's attribute schema.
    void record_feedback(const std::string& node_id,
                         const FeedbackVector& feedback);

    // Every feedback vector recorded for a node, oldest first (seed
    // feedback included).
    const std::vector<FeedbackVector>& feedback_for(
        const std::string& node_id) const;

    // Aggregated feedback as the scoring actually sees it: the user
    // aggregate with NR and NU replaced by measured values once the node
    // has resolved outcomes. Empty for nodes without feedback.
    std::optional<FeedbackVector> effective_feedback(
        const std::string& node_id) const;

    // -- observation ------------------------------------------------------

    // Ranked view of the registry, computed from current stored scores.
    std::vector<SnapshotRow> snapshot() const;

    // Every dispatch since construction, oldest first.
    const std::vector<DispatchEntry>& dispatch_log() const {
        return dispatch_log_;
    }

    // Dispatched jobs with no outcome yet, per node.
    std::uint64_t outstanding_jobs(const std::string& node_id) const;

private:
    NodeRecord& node_mut(const std::string& node_id);
    double spc_of(const SecurityProfile& profile) const;
    const DispatchEntry& book_dispatch(const JobSpec& job, NodeRecord& rec);
    void note_reputation_event(const std::string& node_id);
    void refresh_node(NodeRecord& rec);

    GomConfig config_;
    std::map<std::string, NodeRecord> nodes_;
    std::map<std::string, std::vector<FeedbackVector>> feedback_store_;
    std::map<std::string, std::uint64_t> outstanding_;
    std::map<std::string, std::string> in_flight_;   // job id -> node id
    std::set<std::string> completed_jobs_;
    std::vector<DispatchEntry> dispatch_log_;
    std::uint64_t events_since_refresh_ = 0;
    std::set<std::string> dirty_nodes_;
};

} // namespace gridrf
