#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gridrf/gom.hpp"
#include "gridrf/model.hpp"

namespace gridrf {

// -- node fixtures ---------------------------------------------------------

// Loads a node fixture file (JSON; see README for the schema). The magic
// path "paper_nodes" resolves to the bundled reference fixture instead of
// the filesystem. Scores are bound-checked at parse time; errors carry the
// path plus line or field location.
std::vector<NodeFixture> load_node_fixture(const std::string& path);

// The bundled reference fixture, byte-identical to fixtures/paper_nodes.json.
const std::string& paper_nodes_text();

// FNV-1a 64-bit, used to pin the bundled fixture against silent drift.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t paper_fixture_digest();

// -- experiment results ----------------------------------------------------

// CSV with header `checkpoint,node_id,cum_failures,jobs_assigned`, rows
// sorted by (checkpoint, node_id), LF endings, plain decimal numbers.
std::string results_csv(const ExperimentResult& result);
void write_results_csv(const ExperimentResult& result, const std::string& path);
ExperimentResult parse_results_csv(const std::string& text);
ExperimentResult load_results_csv(const std::string& path);

// -- manager snapshots -------------------------------------------------------

// CSV with header `rank,node_id,spc,rw,rf,provisional`; scores printed to
// 4 decimals (printf rounding, i.e. half-even on the binary value); rw is
// empty for provisional nodes.
std::string snapshot_csv(const std::vector<SnapshotRow>& rows);
void write_snapshot_csv(const std::vector<SnapshotRow>& rows,
                        const std::string& path);
std::vector<SnapshotRow> parse_snapshot_csv(const std::string& text);
std::vector<SnapshotRow> load_snapshot_csv(const std::string& path);

// -- reference table values --------------------------------------------------

// SPC/RW/RF exactly as printed in the reference tables (3 decimals,
// truncated). Three entries are known errata of the source — kept verbatim
// here; comparison logic decides what to flag.
struct PublishedScores {
    double spc = 0.0;
    double rw = 0.0;
    double rf = 0.0;
};
const std::map<std::string, PublishedScores>& paper_published_scores();

// Truncation to 3 decimals, matching how the reference tables print values
// (.5325 is listed as .532). The epsilon nudge keeps values that are exact
// in decimal from landing one bucket low in binary.
double truncate_to_3dp(double v);

} // namespace gridrf
