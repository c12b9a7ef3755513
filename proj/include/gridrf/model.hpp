#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridrf/errors.hpp"

namespace gridrf {

// True iff v is a finite score in [0, 1]. All scores in this codebase
// (security factors, feedback attributes, SPC/RW/RF) live on that range.
bool is_score(double v);

// Throws DomainError naming `what` if v is not a valid score.
void require_score(double v, const std::string& what);

// Result of the node's own monitoring stack: one self-assessed score per
// protection capability. Factor order is fixed; everything downstream
// (mean, weighted mean, fixture parsing) relies on it.
//
//   AS  - antispyware coverage
//   AVC - antivirus coverage
//   FC  - firewall capability
//   AM  - authentication mechanism strength
//   BF  - browser security features
//   NA  - network analyzer / traffic inspection
//   IPS - interference (intrusion) prevention system
class SecurityProfile {
public:
    static constexpr std::size_t factor_count = 7;

    // Order matches factor_names().
    SecurityProfile(double as, double avc, double fc, double am,
                    double bf, double na, double ips);

    // Factor values in declaration order.
    const std::array<double, factor_count>& factors() const { return factors_; }

    // Short factor symbols, same order as factors().
    static const std::array<std::string, factor_count>& factor_names();

    double as() const  { return factors_[0]; }
    double avc() const { return factors_[1]; }
    double fc() const  { return factors_[2]; }
    double am() const  { return factors_[3]; }
    double bf() const  { return factors_[4]; }
    double na() const  { return factors_[5]; }
    double ips() const { return factors_[6]; }

    bool operator==(const SecurityProfile&) const = default;

private:
    std::array<double, factor_count> factors_;
};

// Per-factor weights for the weighted SPC variant. Defaults to the
// administrator weighting the reference deployment used; uniform() gives
// the degenerate table that reduces the weighted mean to the plain mean.
class WeightTable {
public:
    // Reference weights: AS .82, AVC .85, FC .90, AM .80, BF .70,
    // NA .60, IPS .75.
    WeightTable();

    // Explicit table. Names must be unique and non-empty, weights in (0, 1].
    explicit WeightTable(std::vector<std::pair<std::string, double>> entries);

    // Same weight for every profile factor.
    static WeightTable uniform(double weight = 1.0);

    const std::vector<std::pair<std::string, double>>& entries() const {
        return entries_;
    }

    // Weight for a factor name; throws LookupError when absent.
    double weight_of(const std::string& name) const;

private:
    std::vector<std::pair<std::string, double>> entries_;
};

// One user's post-execution rating of a node: named attributes, each a
// score. Attribute names are free-form but must be unique within a vector;
// the canonical set used by the reference tables is
//   NC NI NT NP NP2 NU NR NA
// (confidentiality, integrity, int. check time, processing power, backup
// power, utilization, reliability, authentication).
class FeedbackVector {
public:
    explicit FeedbackVector(std::vector<std::pair<std::string, double>> attributes);

    const std::vector<std::pair<std::string, double>>& attributes() const {
        return attributes_;
    }

    std::size_t size() const { return attributes_.size(); }

    bool has(const std::string& name) const;

    // Throws LookupError when the attribute is absent.
    double value_of(const std::string& name) const;

    // Copy with one attribute replaced (attribute must exist).
    FeedbackVector with_value(const std::string& name, double value) const;

    bool operator==(const FeedbackVector&) const = default;

private:
    std::vector<std::pair<std::string, double>> attributes_;
};

// A unit of work to place on some node.
class JobSpec {
public:
    JobSpec(std::string job_id, double required_power,
            std::string metadata = {});

    const std::string& job_id() const { return job_id_; }
    double required_power() const { return required_power_; }
    const std::string& metadata() const { return metadata_; }

private:
    std::string job_id_;
    double required_power_;
    std::string metadata_;
};

// Terminal report for a dispatched job. node_id must match the node the
// job was dispatched to; utilized_power is the capacity the job actually
// consumed there (zero for runs that never got going).
struct JobOutcome {
    std::string job_id;
    std::string node_id;
    bool success = false;
    double utilized_power = 0.0;
};

// Everything the manager tracks per registered node. Kept as plain data:
// the manager owns all mutation.
struct NodeRecord {
    std::string node_id;
    SecurityProfile profile;

    // Folded user feedback (running aggregate, not per-event history).
    std::optional<FeedbackVector> aggregated_feedback;

    double spc = 0.0;              // self-protection capability, mean of factors
    std::optional<double> rw;      // reputation weight; empty until first feedback
    std::optional<double> rf;      // reliability factor; empty while provisional

    std::uint64_t jobs_submitted = 0;
    std::uint64_t jobs_succeeded = 0;

    // Utilized power of outcomes in the current assignment window (cleared
    // when a job lands on an idle node), feeding the NU measurement.
    std::vector<double> utilized_power_log;

    double total_power_compute = 0.0; // TPC, capacity denominator for NU
};

// Parsed fixture entry: a node as described on disk, before registration.
struct NodeFixture {
    std::string id;
    SecurityProfile profile;
    std::optional<FeedbackVector> feedback;
    double tpc = 0.0;
};

// Output of one simulation run: cumulative failure and assignment counts
// per node at each checkpoint, plus enough provenance to rerun it.
struct ExperimentResult {
    std::vector<std::uint64_t> checkpoints;        // strictly increasing
    std::vector<std::string> node_ids;             // ascending
    // counts[node_index][checkpoint_index]
    std::vector<std::vector<std::uint64_t>> cum_failures;
    std::vector<std::vector<std::uint64_t>> jobs_assigned;

    std::uint64_t seed = 0;
    double alpha = 1.0;
    std::string rng; // generator identity, e.g. "mt19937_64"

    // Shape and monotonicity checks; throws DomainError on violation.
    void validate() const;
};

} // namespace gridrf
