#ifndef SDP_EXPERIMENT_HPP
#define SDP_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdp/algorithms.hpp"
#include "sdp/metrics.hpp"
#include "sdp/suite.hpp"

namespace sdp {

struct MetricToggles {
    bool igd = true;
    bool hvd = true;
    bool mdt = true;
    bool igd_curve = false;
};

struct AlgorithmEntry {
    std::string label; ///< column name in tables, defaults to the algorithm name
    AlgorithmConfig config;
};

struct ExperimentConfig {
    std::vector<ProblemSpec> problems;
    std::vector<AlgorithmEntry> algorithms;
    std::size_t runs = 1;
    std::uint64_t base_seed = 1;
    std::size_t changes = 30;
    std::filesystem::path output_dir = "results";
    MetricToggles metrics;
    std::size_t refset_count = 1000;
    bool include_initial_state = true;
};

/// Strict parser: problems, algorithms and runs are required; unknown fields throw.
ExperimentConfig experiment_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// One row of metrics.csv.
struct MetricRow {
    std::string run_id; ///< "<algorithm>/<problem label>/<run>"
    std::string problem;
    int M = 0;          ///< active objective count at t
    double t = 0.0;
    std::optional<double> igd;
    std::optional<double> hvd;
    std::optional<double> dt; ///< empty for the initial state

    std::string algorithm() const;
    std::string label() const;
};

struct RunOutcome {
    std::string algorithm;
    std::string label;
    std::size_t run = 0;
    std::optional<RunRecord> record;
    std::vector<MetricRow> rows;
    std::vector<double> curve; ///< per-generation IGD when requested
    std::string error;
};

struct ExperimentResult {
    std::vector<RunOutcome> runs;
    std::size_t failures() const;
};

struct RunOptions {
    std::size_t threads = 1;
    std::filesystem::path cache_dir; ///< empty: <output_dir>/refsets
    std::ostream* log = nullptr;
};

/// Precedence: explicit option, then SDP_CACHE_DIR, then <output_dir>/refsets.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& option, const std::filesystem::path& output_dir);

/// Runs the whole matrix and writes every output file under config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

void write_metrics_csv(const std::vector<MetricRow>& rows, const std::filesystem::path& path);
std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path);

enum class TableKind { migd, mhvd, mdt, rank };
TableKind parse_table_kind(const std::string& name);

/// Builds one table (as CSV text) from metric rows.
std::string build_table(const std::vector<MetricRow>& rows, TableKind kind, bool include_initial_state);
std::string build_summary(const std::vector<MetricRow>& rows, bool include_initial_state);

/// Regenerates a table from a results directory; returns the written path.
std::filesystem::path cli_table(const std::filesystem::path& results_dir, TableKind kind);

/// "9.3261E-2" style: four decimals, unpadded signed exponent.
std::string format_sci(double v);
/// "%.17g", or "NA" for an empty value.
std::string format_number(std::optional<double> v);

} // namespace sdp

#endif
