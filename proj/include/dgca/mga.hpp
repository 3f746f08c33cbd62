#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgca/dgca.hpp"
#include "dgca/metrics.hpp"
#include "dgca/reservoir.hpp"

namespace dgca {

/// Objective driving the search: a NARMA-N task or a reservoir metric.
struct FitnessSpec {
  enum class Kind { Narma, Metric };

  Kind kind = Kind::Narma;
  int narma_order = 10;
  MetricKind metric = MetricKind::All;

  /// "narma:N" or "metric:{kr|gr|lmc|sr|all}".
  static FitnessSpec parse(std::string_view text);
  std::string to_string() const;
};

struct MgaConfig {
  std::size_t mlp_pool = 10;
  std::size_t slp_pool = 10;
  int iterations = 1000;
  double transfer_rate = 0.5;
  double mutation_rate = 0.02;
  double mutation_scale = 0.1;
  double init_scale = 1.0;
  int num_states = 3;
  GrowthConfig growth;  // growth.budget is the node budget
  FitnessSpec fitness;
  EvalConfig eval;
  MetricConfig metrics;
  bool use_cache = true;
  std::uint64_t rng_seed = 0;

  std::size_t budget() const noexcept { return growth.budget; }
  void validate() const;
};

/// Two independent chromosome pools. Any (mlp, slp) pair is a complete individual.
struct Population {
  int num_states = 3;
  std::vector<std::vector<double>> mlp_pool;
  std::vector<std::vector<double>> slp_pool;

  Genome genome(std::size_t mlp_index, std::size_t slp_index) const;
};

/// Weights i.i.d. uniform on [-init_scale, init_scale].
Population init_population(const MgaConfig& cfg, Rng& rng);

struct Evaluation {
  double fitness = 0.0;
  FailureReason reason = FailureReason::None;
  StateGraph graph;
  double nrmse = 0.0;  // task objectives only
};

/// Grows the genome and scores it. Graphs that die out, hit the hard cap or
/// exceed the budget score exactly 0.
Evaluation evaluate_genome(const Genome& genome, const MgaConfig& cfg, std::uint64_t eval_seed);

using Individual = std::pair<std::size_t, std::size_t>;  // (mlp index, slp index)

struct TrialRecord {
  int run_id = 0;
  int trial = 0;
  Individual winner;
  Individual loser;
  double winner_fitness = 0.0;
  double loser_fitness = 0.0;
  std::size_t winner_nodes = 0;
  std::string structure_class;
  FailureReason winner_reason = FailureReason::None;
  FailureReason loser_reason = FailureReason::None;
  bool tie = false;
  double best_fitness = 0.0;  // best seen so far in the run, including this trial

  std::string reason_flags() const;
};

/// Steady-state microbial GA over a two-chromosome population.
class MicrobialGA {
 public:
  explicit MicrobialGA(MgaConfig cfg, int run_id = 0);

  /// One tournament: two distinct individuals compete, the loser takes genes
  /// from the winner and is mutated.
  const TrialRecord& trial();

  const MgaConfig& config() const noexcept { return cfg_; }
  const Population& population() const noexcept { return population_; }
  const std::vector<TrialRecord>& history() const noexcept { return history_; }

  double best_fitness() const noexcept { return best_fitness_; }
  const Genome& best_genome() const noexcept { return best_genome_; }
  const StateGraph& best_graph() const noexcept { return best_graph_; }
  FailureReason best_reason() const noexcept { return best_reason_; }
  std::uint64_t eval_seed() const noexcept { return eval_seed_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  const Evaluation& evaluate(const Individual& ind, Evaluation& scratch);
  void inherit(std::vector<double>& loser, const std::vector<double>& winner);
  void invalidate(std::optional<std::size_t> mlp, std::optional<std::size_t> slp);

  MgaConfig cfg_;
  int run_id_;
  Rng rng_;
  std::uint64_t eval_seed_;
  Population population_;
  std::map<Individual, Evaluation> cache_;
  std::vector<TrialRecord> history_;
  bool has_best_ = false;
  double best_fitness_ = 0.0;
  Genome best_genome_;
  StateGraph best_graph_;
  FailureReason best_reason_ = FailureReason::Invalid;
  std::size_t evaluations_ = 0;
};

struct MgaResult {
  Genome best_genome;
  StateGraph best_graph;
  double best_fitness = 0.0;
  FailureReason best_reason = FailureReason::Invalid;
  std::uint64_t eval_seed = 0;
  std::vector<TrialRecord> history;
};

MgaResult mga_run(const MgaConfig& cfg, int run_id = 0);

inline constexpr std::string_view kTrialLogHeader =
    "run_id,trial,winner_fitness,loser_fitness,winner_nodes,structure_class,reason_flags";

std::string trial_log_row(const TrialRecord& r);
void write_trial_log(const std::vector<TrialRecord>& history, const std::filesystem::path& path);

}  // namespace dgca
