#include "gridrf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gridrf {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 7> kSecurityKeys = {
    "as", "avc", "fc", "am", "bf", "na", "ips"};

// Fixture key -> canonical attribute symbol. `na_auth` disambiguates
// node-authorization feedback from the security profile's network analyzer.
constexpr std::array<std::pair<const char*, const char*>, 8> kFeedbackKeys = {{
    {"nc", "NC"},
    {"ni", "NI"},
    {"nt", "NT"},
    {"np", "NP"},
    {"np2", "NP2"},
    {"nu", "NU"},
    {"nr", "NR"},
    {"na_auth", "NA"},
}};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out.good()) {
        throw ParseError("cannot write '" + path + "'");
    }
}

std::string location_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double number_field(const json& obj, const char* key, const std::string& ctx) {
    if (!obj.contains(key)) {
        throw ParseError(ctx + ": missing field '" + std::string(key) + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ParseError(ctx + ": field '" + std::string(key) +
                         "' must be a number");
    }
    return v.get<double>();
}

double score_field(const json& obj, const char* key, const std::string& ctx) {
    double v = number_field(obj, key, ctx);
    if (!is_score(v)) {
        throw ParseError(ctx + ": field '" + std::string(key) + "' = " +
                         std::to_string(v) + " is outside [0,1]");
    }
    return v;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& ctx) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ParseError(ctx + ": unknown field '" + item.key() + "'");
        }
    }
}

NodeFixture parse_node(const json& node, const std::string& path,
                       std::size_t index) {
    std::string ctx = path + ": node[" + std::to_string(index) + "]";
    if (!node.is_object()) {
        throw ParseError(ctx + ": must be an object");
    }
    reject_unknown_keys(node, {"id", "tpc", "security", "feedback"}, ctx);

    if (!node.contains("id") || !node.at("id").is_string()) {
        throw ParseError(ctx + ": missing string field 'id'");
    }
    std::string id = node.at("id").get<std::string>();
    if (id.empty()) {
        throw ParseError(ctx + ": 'id' must not be empty");
    }
    ctx = path + ": node " + id;

    double tpc = number_field(node, "tpc", ctx);
    if (!std::isfinite(tpc) || tpc <= 0.0) {
        throw ParseError(ctx + ": 'tpc' must be > 0");
    }

    if (!node.contains("security") || !node.at("security").is_object()) {
        throw ParseError(ctx + ": missing object field 'security'");
    }
    const json& sec = node.at("security");
    reject_unknown_keys(
        sec, {kSecurityKeys.begin(), kSecurityKeys.end()}, ctx + ": security");
    std::array<double, SecurityProfile::factor_count> factors{};
    for (std::size_t i = 0; i < kSecurityKeys.size(); ++i) {
        factors[i] = score_field(sec, kSecurityKeys[i], ctx + ": security");
    }
    SecurityProfile profile(factors[0], factors[1], factors[2], factors[3],
                            factors[4], factors[5], factors[6]);

    std::optional<FeedbackVector> feedback;
    if (node.contains("feedback")) {
        const json& fb = node.at("feedback");
        if (!fb.is_object()) {
            throw ParseError(ctx + ": 'feedback' must be an object");
        }
        std::set<std::string> allowed;
        for (const auto& [key, symbol] : kFeedbackKeys) {
            allowed.insert(key);
        }
        reject_unknown_keys(fb, allowed, ctx + ": feedback");
        std::vector<std::pair<std::string, double>> attrs;
        for (const auto& [key, symbol] : kFeedbackKeys) {
            if (fb.contains(key)) {
                attrs.emplace_back(symbol,
                                   score_field(fb, key, ctx + ": feedback"));
            }
        }
        if (attrs.empty()) {
            throw ParseError(ctx +
                             ": feedback must list at least one attribute");
        }
        feedback = FeedbackVector(std::move(attrs));
    }

    return NodeFixture{.id = std::move(id),
                       .profile = profile,
                       .feedback = std::move(feedback),
                       .tpc = tpc};
}

std::vector<std::string> split_lines(const std::string& text,
                                     const std::string& what) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\r') {
            throw ParseError(what + ": CR line endings are not supported");
        }
        if (c == '\n') {
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        lines.push_back(std::move(current));
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::uint64_t parse_u64(const std::string& field, const std::string& ctx) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                     value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(ctx + ": '" + field + "' is not a count");
    }
    return value;
}

double parse_double(const std::string& field, const std::string& ctx) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                     value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(ctx + ": '" + field + "' is not a number");
    }
    return value;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

constexpr const char* kResultsHeader = "checkpoint,node_id,cum_failures,jobs_assigned";
constexpr const char* kSnapshotHeader = "rank,node_id,spc,rw,rf,provisional";

} // namespace

std::vector<NodeFixture> load_node_fixture(const std::string& path) {
    const std::string text =
        (path == "paper_nodes") ? paper_nodes_text() : slurp(path);

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path + " (" + location_of(text, e.byte) +
                         "): " + e.what());
    }

    if (!root.is_object()) {
        throw ParseError(path + ": top level must be an object");
    }
    reject_unknown_keys(root, {"nodes"}, path);
    if (!root.contains("nodes") || !root.at("nodes").is_array()) {
        throw ParseError(path + ": missing array field 'nodes'");
    }

    std::vector<NodeFixture> fixtures;
    std::set<std::string> ids;
    std::size_t index = 0;
    for (const json& node : root.at("nodes")) {
        NodeFixture fixture = parse_node(node, path, index++);
        if (!ids.insert(fixture.id).second) {
            throw ParseError(path + ": duplicate node id '" + fixture.id + "'");
        }
        fixtures.push_back(std::move(fixture));
    }
    return fixtures;
}

const std::string& paper_nodes_text() {
    // Byte-identical to fixtures/paper_nodes.json; the digest test keeps the
    // two from drifting apart.
    static const std::string text = R"json({
  "nodes": [
    {
      "id": "N1",
      "tpc": 100,
      "security": {"as": 0.25, "avc": 0.54, "fc": 0.66, "am": 0.6, "bf": 0.6, "na": 0.7, "ips": 0.6},
      "feedback": {"nc": 0.25, "ni": 0.29, "nt": 0.3, "np": 0.35, "np2": 0.4, "nu": 0.31, "nr": 0.12, "na_auth": 0.35}
    },
    {
      "id": "N2",
      "tpc": 100,
      "security": {"as": 0.2, "avc": 0.5, "fc": 0.7, "am": 0.59, "bf": 0.59, "na": 0.8, "ips": 0.87},
      "feedback": {"nc": 0.68, "ni": 0.69, "nt": 1, "np": 0.4, "np2": 0.1, "nu": 0.35, "nr": 0.21, "na_auth": 0.7}
    },
    {
      "id": "N3",
      "tpc": 100,
      "security": {"as": 0.6, "avc": 0.37, "fc": 0.89, "am": 0.51, "bf": 0.67, "na": 0.73, "ips": 0.79},
      "feedback": {"nc": 0.6, "ni": 0.7, "nt": 0.8, "np": 0.25, "np2": 0, "nu": 0.21, "nr": 0.6, "na_auth": 0.58}
    },
    {
      "id": "N4",
      "tpc": 100,
      "security": {"as": 0.15, "avc": 0.21, "fc": 0.45, "am": 0.57, "bf": 0.39, "na": 0.23, "ips": 0.38},
      "feedback": {"nc": 0.71, "ni": 0.77, "nt": 0.85, "np": 0.52, "np2": 0.23, "nu": 0.58, "nr": 0.15, "na_auth": 0.67}
    },
    {
      "id": "N5",
      "tpc": 100,
      "security": {"as": 0.145, "avc": 0.7725, "fc": 0.7775, "am": 0.675, "bf": 0.7075, "na": 0.675, "ips": 0.7},
      "feedback": {"nc": 0.46, "ni": 0.463, "nt": 0.47, "np": 0.43, "np2": 0.3, "nu": 0.44, "nr": 0.19, "na_auth": 0.44}
    },
    {
      "id": "N6",
      "tpc": 100,
      "security": {"as": 0.6, "avc": 0.37, "fc": 0.89, "am": 0.51, "bf": 0.67, "na": 0.73, "ips": 0.79},
      "feedback": {"nc": 0.54, "ni": 0.725, "nt": 0.75, "np": 0.465, "np2": 0.4, "nu": 0.5, "nr": 0.5, "na_auth": 0.6}
    },
    {
      "id": "N7",
      "tpc": 100,
      "security": {"as": 0.51, "avc": 0.42, "fc": 0.5, "am": 0.56, "bf": 0.7, "na": 0.4, "ips": 0.61},
      "feedback": {"nc": 0.75, "ni": 0.8, "nt": 0.9, "np": 0.28, "np2": 0.15, "nu": 0.32, "nr": 0.51, "na_auth": 0.55}
    }
  ]
}
)json";
    return text;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t paper_fixture_digest() {
    return fnv1a64(paper_nodes_text());
}

std::string results_csv(const ExperimentResult& result) {
    result.validate();
    std::string out = kResultsHeader;
    out += '\n';
    for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        for (std::size_t n = 0; n < result.node_ids.size(); ++n) {
            out += std::to_string(result.checkpoints[c]);
            out += ',';
            out += result.node_ids[n];
            out += ',';
            out += std::to_string(result.cum_failures[n][c]);
            out += ',';
            out += std::to_string(result.jobs_assigned[n][c]);
            out += '\n';
        }
    }
    return out;
}

void write_results_csv(const ExperimentResult& result, const std::string& path) {
    spill(path, results_csv(result));
}

ExperimentResult parse_results_csv(const std::string& text) {
    auto lines = split_lines(text, "results csv");
    if (lines.empty() || lines.front() != kResultsHeader) {
        throw ParseError("results csv: missing header '" +
                         std::string(kResultsHeader) + "'");
    }

    // checkpoint -> node -> (failures, assigned)
    std::map<std::uint64_t,
             std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>>
        cells;
    std::set<std::string> all_nodes;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string ctx = "results csv line " + std::to_string(i + 1);
        auto fields = split_fields(lines[i]);
        if (fields.size() != 4) {
            throw ParseError(ctx + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        std::uint64_t cp = parse_u64(fields[0], ctx);
        const std::string& node = fields[1];
        if (node.empty()) {
            throw ParseError(ctx + ": empty node id");
        }
        auto [it, inserted] = cells[cp].emplace(
            node, std::make_pair(parse_u64(fields[2], ctx),
                                 parse_u64(fields[3], ctx)));
        if (!inserted) {
            throw ParseError(ctx + ": duplicate row for checkpoint " +
                             fields[0] + ", node " + node);
        }
        all_nodes.insert(node);
    }

    ExperimentResult result;
    result.node_ids.assign(all_nodes.begin(), all_nodes.end());
    result.cum_failures.assign(result.node_ids.size(), {});
    result.jobs_assigned.assign(result.node_ids.size(), {});
    for (const auto& [cp, row] : cells) {
        if (row.size() != all_nodes.size()) {
            throw ParseError("results csv: checkpoint " + std::to_string(cp) +
                             " does not cover every node");
        }
        result.checkpoints.push_back(cp);
        std::size_t n = 0;
        for (const auto& [node, counts] : row) {
            result.cum_failures[n].push_back(counts.first);
            result.jobs_assigned[n].push_back(counts.second);
            ++n;
        }
    }
    result.validate();
    return result;
}

ExperimentResult load_results_csv(const std::string& path) {
    return parse_results_csv(slurp(path));
}

std::string snapshot_csv(const std::vector<SnapshotRow>& rows) {
    std::string out = kSnapshotHeader;
    out += '\n';
    for (const auto& row : rows) {
        out += std::to_string(row.rank);
        out += ',';
        out += row.node_id;
        out += ',';
        out += fmt4(row.spc);
        out += ',';
        if (row.rw) {
            out += fmt4(*row.rw);
        }
        out += ',';
        out += fmt4(row.rf);
        out += ',';
        out += row.provisional ? "true" : "false";
        out += '\n';
    }
    return out;
}

void write_snapshot_csv(const std::vector<SnapshotRow>& rows,
                        const std::string& path) {
    spill(path, snapshot_csv(rows));
}

std::vector<SnapshotRow> parse_snapshot_csv(const std::string& text) {
    auto lines = split_lines(text, "snapshot csv");
    if (lines.empty() || lines.front() != kSnapshotHeader) {
        throw ParseError("snapshot csv: missing header '" +
                         std::string(kSnapshotHeader) + "'");
    }
    std::vector<SnapshotRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string ctx = "snapshot csv line " + std::to_string(i + 1);
        auto fields = split_fields(lines[i]);
        if (fields.size() != 6) {
            throw ParseError(ctx + ": expected 6 fields, got " +
                             std::to_string(fields.size()));
        }
        SnapshotRow row;
        std::uint64_t rank = parse_u64(fields[0], ctx);
        if (rank == 0) {
            throw ParseError(ctx + ": ranks start at 1");
        }
        row.rank = static_cast<int>(rank);
        row.node_id = fields[1];
        if (row.node_id.empty()) {
            throw ParseError(ctx + ": empty node id");
        }
        row.spc = parse_double(fields[2], ctx);
        if (!fields[3].empty()) {
            row.rw = parse_double(fields[3], ctx);
        }
        row.rf = parse_double(fields[4], ctx);
        if (fields[5] == "true") {
            row.provisional = true;
        } else if (fields[5] == "false") {
            row.provisional = false;
        } else {
            throw ParseError(ctx + ": provisional must be true or false");
        }
        if (!is_score(row.spc) || (row.rw && !is_score(*row.rw)) ||
            !is_score(row.rf)) {
            throw ParseError(ctx + ": scores must lie in [0,1]");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SnapshotRow> load_snapshot_csv(const std::string& path) {
    return parse_snapshot_csv(slurp(path));
}

const std::map<std::string, PublishedScores>& paper_published_scores() {
    static const std::map<std::string, PublishedScores> table = {
        {"N1", {0.564, 0.281, 0.422}},
        {"N2", {0.607, 0.516, 0.561}},
        {"N3", {0.651, 0.467, 0.599}},
        {"N4", {0.34, 0.565, 0.452}},
        {"N5", {0.636, 0.399, 0.517}},
        {"N6", {0.654, 0.56, 0.607}},
        {"N7", {0.528, 0.532, 0.53}},
    };
    return table;
}

double truncate_to_3dp(double v) {
    return std::floor(v * 1000.0 + 1e-9) / 1000.0;
}

} // namespace gridrf
