#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dgca/mga.hpp"
#include "dgca/stats.hpp"

namespace dgca {

struct ExperimentConfig {
  int runs = 150;
  MgaConfig mga;
  std::vector<int> narma_orders{10, 20, 30};  // orders scored on each best reservoir
  std::uint64_t rng_seed = 0;
  std::filesystem::path output_dir;  // empty: keep everything in memory
  bool write_trial_logs = true;
  bool write_best_graphs = true;
  bool resume = false;  // skip run ids already present in records.csv

  void validate() const;
};

nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ExperimentRecord {
  int run_id = 0;
  double best_fitness = 0.0;
  std::map<int, double> nrmse;  // NARMA order -> test NRMSE
  std::size_t nodes = 0;
  double budget_pct = 0.0;
  std::string structure_class = "None";
  MetricSuite metrics;
  StateGraph best_graph;  // not part of the CSV
};

inline constexpr std::string_view kRecordsHeader =
    "run_id,best_fitness,nrmse_10,nrmse_20,nrmse_30,nodes,budget_pct,class,kr,gr,lmc,sr";

std::string record_row(const ExperimentRecord& r);
std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path);
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path);

/// NRMSE on each requested order, metric suite, structure class and budget
/// usage for one reservoir graph.
ExperimentRecord score_reservoir(const StateGraph& g, int id, double fitness, std::size_t budget,
                                 const std::vector<int>& narma_orders, const EvalConfig& eval,
                                 const MetricConfig& metrics, std::uint64_t seed);

using RunCallback = std::function<void(const ExperimentRecord&, const MgaResult&)>;

/// Independent MGA runs with per-run derived seeds. When output_dir is set,
/// writes manifest.json, records.csv (appended and flushed per run),
/// trial_logs/run_XXXX.csv and best_graphs/run_XXXX.json.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const RunCallback& on_run = {});

/// Random directed graph: every ordered pair (self-loops included) is an edge
/// with probability `density`; states uniform over [0, S-1].
/// Throws std::invalid_argument unless density is in (0, 1].
StateGraph control_esn(std::size_t n, double density, int num_states, Rng& rng);

double mean_edge_density(const std::vector<StateGraph>& graphs);

/// Scores `count` control reservoirs under `cfg`'s fitness objective.
std::vector<ExperimentRecord> control_cohort(std::size_t count, std::size_t n, double density,
                                             const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Post-processing behind the comparison tables.

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> columns{"best_fitness", "nrmse_10", "nrmse_20", "nrmse_30",
                                                "nodes",        "budget_pct", "kr",     "gr",
                                                "lmc",          "sr"};
  return columns;
}

/// Numeric column of a record by name (NaN when absent).
double record_value(const ExperimentRecord& r, std::string_view column);

struct SummaryRow {
  std::string group;
  std::string column;
  MedianIqr stats;
};

/// Median and IQR (linear-interpolation quartiles) of each column per group.
/// Empty groups are skipped; non-finite values are ignored.
std::vector<SummaryRow> summarize(const std::map<std::string, std::vector<ExperimentRecord>>& groups,
                                  const std::vector<std::string>& columns = summary_columns());

std::map<std::string, std::vector<ExperimentRecord>> group_by_class(
    const std::vector<ExperimentRecord>& records);

struct PairwiseTest {
  std::string group_a;
  std::string group_b;
  UTestResult test;
  bool significant = false;
};

/// Two-sided U tests for every pair of groups on one column, Bonferroni-corrected.
std::vector<PairwiseTest> pairwise_u_tests(
    const std::map<std::string, std::vector<ExperimentRecord>>& groups, std::string_view column,
    double alpha = 0.05);

}  // namespace dgca
