#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridrf/gom.hpp"
#include "gridrf/io.hpp"
#include "gridrf/model.hpp"
#include "gridrf/scoring.hpp"
#include "gridrf/simulator.hpp"

namespace {

using namespace gridrf;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNoResource = 3;

Gom build_gom(const std::vector<NodeFixture>& fixtures, GomConfig config) {
    Gom gom(std::move(config));
    for (const auto& fixture : fixtures) {
        gom.register_node(fixture.id, fixture.profile, fixture.tpc,
                          fixture.feedback);
    }
    return gom;
}

std::optional<WeightTable> weights_for(const std::string& mode) {
    if (mode.empty()) {
        return std::nullopt;
    }
    if (mode == "default") {
        return WeightTable();
    }
    if (mode == "uniform") {
        return WeightTable::uniform();
    }
    throw ConfigError("unknown weight table '" + mode + "'");
}

void cmd_score(const std::string& nodes_path, const std::string& weights_mode,
               bool include_provisional) {
    GomConfig config;
    config.include_provisional = include_provisional;
    config.spc_weights = weights_for(weights_mode);
    Gom gom = build_gom(load_node_fixture(nodes_path), std::move(config));

    std::printf("%4s  %-8s %8s %8s %8s  %s\n", "rank", "node", "spc", "rw",
                "rf", "status");
    for (const auto& row : gom.snapshot()) {
        char rw_buf[16] = "-";
        if (row.rw) {
            std::snprintf(rw_buf, sizeof rw_buf, "%.4f", *row.rw);
        }
        std::printf("%4d  %-8s %8.4f %8s %8.4f  %s\n", row.rank,
                    row.node_id.c_str(), row.spc, rw_buf, row.rf,
                    row.provisional ? "provisional" : "");
    }
}

void cmd_rank(const std::string& nodes_path, bool include_provisional) {
    GomConfig config;
    config.include_provisional = include_provisional;
    Gom gom = build_gom(load_node_fixture(nodes_path), std::move(config));
    std::fputs(snapshot_csv(gom.snapshot()).c_str(), stdout);
}

void cmd_simulate(const std::string& nodes_path, std::uint64_t jobs,
                  std::uint64_t seed, double alpha, const std::string& mode,
                  const std::string& out_path, bool feedback_loop) {
    auto fixtures = load_node_fixture(nodes_path);

    SimConfig config;
    config.total_jobs = jobs;
    config.seed = seed;
    config.failure_model.alpha = alpha;
    config.assignment_mode = (mode == "round_robin") ? AssignmentMode::round_robin
                                                     : AssignmentMode::broker;
    config.feedback_loop = feedback_loop;

    ExperimentResult result = run_experiment(config, fixtures);
    write_results_csv(result, out_path);

    // Initial scores give the summary its reference column.
    GomConfig summary_config;
    summary_config.include_provisional = true;
    Gom gom = build_gom(fixtures, summary_config);

    std::printf("%-8s %10s %10s %10s %10s\n", "node", "jobs", "failures",
                "fail_rate", "rf_initial");
    for (std::size_t n = 0; n < result.node_ids.size(); ++n) {
        const auto& id = result.node_ids[n];
        std::uint64_t assigned =
            result.checkpoints.empty() ? 0 : result.jobs_assigned[n].back();
        std::uint64_t failures =
            result.checkpoints.empty() ? 0 : result.cum_failures[n].back();
        double rate = assigned == 0
                          ? 0.0
                          : static_cast<double>(failures) /
                                static_cast<double>(assigned);
        const NodeRecord& rec = gom.node(id);
        double rf = rec.rf ? *rec.rf : rec.spc;
        std::printf("%-8s %10llu %10llu %10.4f %10.4f\n", id.c_str(),
                    static_cast<unsigned long long>(assigned),
                    static_cast<unsigned long long>(failures), rate, rf);
    }
}

// Independent recomputation of the reference tables: straight loops over
// the fixture values, long-double accumulation in reverse order, entirely
// separate from the scoring module's code path.
struct OracleScores {
    double spc = 0.0;
    double rw = 0.0;
    double rf = 0.0;
};

OracleScores oracle_for(const NodeFixture& fixture) {
    const auto& factors = fixture.profile.factors();
    long double spc_sum = 0.0L;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        spc_sum += *it;
    }
    OracleScores oracle;
    oracle.spc = static_cast<double>(spc_sum /
                                     static_cast<long double>(factors.size()));
    const auto& attrs = fixture.feedback->attributes();
    long double rw_sum = 0.0L;
    for (auto it = attrs.rbegin(); it != attrs.rend(); ++it) {
        rw_sum += it->second;
    }
    oracle.rw =
        static_cast<double>(rw_sum / static_cast<long double>(attrs.size()));
    oracle.rf = static_cast<double>(
        (static_cast<long double>(oracle.spc) + oracle.rw) / 2.0L);
    return oracle;
}

int cmd_replicate_paper() {
    constexpr double kSpcTol = 5e-4; // published tables print 3 decimals
    constexpr double kRwTol = 1e-3;
    constexpr double kOracleTol = 1e-12;

    auto fixtures = load_node_fixture("paper_nodes");
    Gom gom = build_gom(fixtures, GomConfig{});
    const auto& published = paper_published_scores();

    std::printf("%-6s %9s %7s %9s %7s %9s %7s  %s\n", "node", "spc", "paper",
                "rw", "paper", "rf", "paper", "notes");

    int flagged = 0;
    bool oracle_ok = true;
    for (const auto& fixture : fixtures) {
        const NodeRecord& rec = gom.node(fixture.id);
        OracleScores oracle = oracle_for(fixture);
        const PublishedScores& paper = published.at(fixture.id);

        if (std::fabs(rec.spc - oracle.spc) > kOracleTol ||
            std::fabs(*rec.rw - oracle.rw) > kOracleTol ||
            std::fabs(*rec.rf - oracle.rf) > kOracleTol) {
            oracle_ok = false;
        }

        std::string notes;
        if (std::fabs(truncate_to_3dp(rec.spc) - paper.spc) > kSpcTol) {
            ++flagged;
            char buf[96];
            std::snprintf(buf, sizeof buf, "SPC erratum: computed %.4f, published %.3f",
                          rec.spc, paper.spc);
            notes = buf;
        }
        if (std::fabs(truncate_to_3dp(*rec.rw) - paper.rw) > kRwTol) {
            ++flagged;
            char buf[96];
            std::snprintf(buf, sizeof buf, "RW erratum: computed %.4f, published %.3f",
                          *rec.rw, paper.rw);
            if (!notes.empty()) {
                notes += "; ";
            }
            notes += buf;
        }

        std::printf("%-6s %9.4f %7.3f %9.4f %7.3f %9.4f %7.3f  %s\n",
                    fixture.id.c_str(), rec.spc, paper.spc, *rec.rw, paper.rw,
                    *rec.rf, paper.rf, notes.c_str());
    }
    std::printf("discrepancies flagged: %d\n", flagged);

    if (!oracle_ok) {
        std::fprintf(stderr,
                     "error: pipeline disagrees with independent recomputation\n");
        return kExitInputError;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reliability-factor resource selection for grid nodes"};
    app.require_subcommand(1);

    std::string nodes_path;
    std::string weights_mode;
    bool include_provisional = false;

    auto* score = app.add_subcommand(
        "score", "Print the scored snapshot table for a node fixture");
    score->add_option("--nodes", nodes_path, "node fixture path or 'paper_nodes'")
        ->required();
    score->add_flag_callback(
        "--weighted", [&] { weights_mode = "default"; },
        "use the reference weight table for SPC");
    score->add_option("--weights", weights_mode,
                      "weight table for SPC: 'default' or 'uniform'")
        ->check(CLI::IsMember({"default", "uniform"}));
    score->add_flag("--include-provisional", include_provisional,
                    "rank feedback-less nodes at RF = SPC");

    auto* rank = app.add_subcommand(
        "rank", "Print the ranking as snapshot CSV (descending RF)");
    rank->add_option("--nodes", nodes_path, "node fixture path or 'paper_nodes'")
        ->required();
    rank->add_flag("--include-provisional", include_provisional,
                   "rank feedback-less nodes at RF = SPC");

    std::uint64_t jobs = 1000;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    std::string mode = "broker";
    std::string out_path;
    bool feedback_loop = false;

    auto* simulate = app.add_subcommand(
        "simulate", "Run a seeded failure experiment and write results CSV");
    simulate->add_option("--nodes", nodes_path,
                         "node fixture path or 'paper_nodes'")
        ->required();
    simulate->add_option("--jobs", jobs, "total jobs to submit");
    simulate->add_option("--seed", seed, "experiment seed");
    simulate->add_option("--alpha", alpha, "failure model scale (> 0)");
    simulate->add_option("--mode", mode, "assignment mode")
        ->check(CLI::IsMember({"broker", "round_robin"}));
    simulate->add_option("--out", out_path, "results CSV path")->required();
    simulate->add_flag("--feedback-loop", feedback_loop,
                       "let outcomes drift NR/RW/RF during the run");

    auto* replicate = app.add_subcommand(
        "replicate-paper",
        "Recompute the reference tables and flag published errata");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (score->parsed()) {
            cmd_score(nodes_path, weights_mode, include_provisional);
        } else if (rank->parsed()) {
            cmd_rank(nodes_path, include_provisional);
        } else if (simulate->parsed()) {
            cmd_simulate(nodes_path, jobs, seed, alpha, mode, out_path,
                         feedback_loop);
        } else if (replicate->parsed()) {
            return cmd_replicate_paper();
        }
    } catch (const NoResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNoResource;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
    return kExitOk;
}
