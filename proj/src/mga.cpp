#include "dgca/mga.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "dgca/classify.hpp"
#include "dgca/csv.hpp"

namespace dgca {

FitnessSpec FitnessSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("fitness spec must look like narma:N or metric:NAME");
  }
  const std::string_view head = text.substr(0, colon);
  const std::string_view tail = text.substr(colon + 1);
  FitnessSpec spec;
  if (head == "narma") {
    spec.kind = Kind::Narma;
    std::size_t used = 0;
    const std::string digits(tail);
    try {
      spec.narma_order = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != digits.size() || digits.empty() || spec.narma_order < 1) {
      throw std::invalid_argument("invalid NARMA order '" + digits + "'");
    }
  } else if (head == "metric") {
    spec.kind = Kind::Metric;
    spec.metric = metric_kind_from_string(tail);
  } else {
    throw std::invalid_argument("unknown fitness kind '" + std::string(head) + "'");
  }
  return spec;
}

std::string FitnessSpec::to_string() const {
  if (kind == Kind::Narma) return "narma:" + std::to_string(narma_order);
  return "metric:" + std::string(dgca::to_string(metric));
}

void MgaConfig::validate() const {
  if (mlp_pool < 1 || slp_pool < 1 || mlp_pool * slp_pool < 2) {
    throw std::invalid_argument("mga: pools must hold at least two distinct individuals");
  }
  if (iterations < 1) throw std::invalid_argument("mga: iterations must be >= 1");
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate(transfer_rate) || !rate(mutation_rate)) {
    throw std::invalid_argument("mga: rates must lie in [0, 1]");
  }
  if (!(mutation_scale >= 0.0) || !(init_scale >= 0.0)) {
    throw std::invalid_argument("mga: scales must be nonnegative");
  }
  growth.validate(num_states);
  eval.validate();
}

Genome Population::genome(std::size_t mlp_index, std::size_t slp_index) const {
  return {num_states, mlp_pool.at(mlp_index), slp_pool.at(slp_index)};
}

Population init_population(const MgaConfig& cfg, Rng& rng) {
  Population pop;
  pop.num_states = cfg.num_states;
  const std::size_t mlp_len = Genome::mlp_size(cfg.num_states);
  const std::size_t slp_len = Genome::slp_size(cfg.num_states);
  pop.mlp_pool.assign(cfg.mlp_pool, std::vector<double>(mlp_len));
  pop.slp_pool.assign(cfg.slp_pool, std::vector<double>(slp_len));
  for (auto& chromosome : pop.mlp_pool) {
    for (double& w : chromosome) w = rng.uniform(-cfg.init_scale, cfg.init_scale);
  }
  for (auto& chromosome : pop.slp_pool) {
    for (double& w : chromosome) w = rng.uniform(-cfg.init_scale, cfg.init_scale);
  }
  return pop;
}

Evaluation evaluate_genome(const Genome& genome, const MgaConfig& cfg, std::uint64_t eval_seed) {
  Evaluation out;
  GrowthResult grown = grow(genome, cfg.growth);
  out.graph = std::move(grown.graph);
  out.nrmse = std::numeric_limits<double>::infinity();
  if (grown.trace.extinct || out.graph.empty()) {
    out.reason = FailureReason::Extinct;
    return out;
  }
  if (grown.trace.overgrown) {
    out.reason = FailureReason::Overgrown;
    return out;
  }
  if (out.graph.node_count() > cfg.budget()) {
    out.reason = FailureReason::OverBudget;
    return out;
  }

  if (cfg.fitness.kind == FitnessSpec::Kind::Narma) {
    EvalConfig eval = cfg.eval;
    eval.rng_seed = eval_seed;
    eval.budget = cfg.budget();
    const TaskFitness f = evaluate_task(out.graph, NarmaTask{cfg.fitness.narma_order}, eval);
    out.fitness = f.fitness;
    out.reason = f.reason;
    out.nrmse = f.nrmse;
  } else {
    MetricConfig metrics = cfg.metrics;
    metrics.rng_seed = eval_seed;
    out.fitness = metric_fitness(cfg.fitness.metric, out.graph, metrics);
    out.reason = FailureReason::None;
  }
  if (!std::isfinite(out.fitness)) {
    out.fitness = 0.0;
    out.reason = FailureReason::Invalid;
  }
  return out;
}

std::string TrialRecord::reason_flags() const {
  std::string flags = "winner=" + std::string(to_string(winner_reason)) +
                      ";loser=" + std::string(to_string(loser_reason));
  if (tie) flags += ";tie";
  return flags;
}

MicrobialGA::MicrobialGA(MgaConfig cfg, int run_id)
    : cfg_(std::move(cfg)),
      run_id_(run_id),
      rng_(derive_seed(cfg_.rng_seed, stream::kTrials)),
      eval_seed_(derive_seed(cfg_.rng_seed, stream::kEvaluation)),
      best_genome_(Genome::zeros(cfg_.num_states)),
      best_graph_(cfg_.num_states) {
  cfg_.validate();
  Rng init_rng(derive_seed(cfg_.rng_seed, stream::kPopulation));
  population_ = init_population(cfg_, init_rng);
}

const Evaluation& MicrobialGA::evaluate(const Individual& ind, Evaluation& scratch) {
  if (cfg_.use_cache) {
    if (auto it = cache_.find(ind); it != cache_.end()) return it->second;
  }
  ++evaluations_;
  Evaluation e = evaluate_genome(population_.genome(ind.first, ind.second), cfg_, eval_seed_);
  if (!cfg_.use_cache) {
    scratch = std::move(e);
    return scratch;
  }
  return cache_.emplace(ind, std::move(e)).first->second;
}

void MicrobialGA::inherit(std::vector<double>& loser, const std::vector<double>& winner) {
  for (std::size_t i = 0; i < loser.size(); ++i) {
    if (rng_.bernoulli(cfg_.transfer_rate)) loser[i] = winner[i];
  }
  for (double& w : loser) {
    if (rng_.bernoulli(cfg_.mutation_rate)) w += cfg_.mutation_scale * rng_.normal();
  }
}

void MicrobialGA::invalidate(std::optional<std::size_t> mlp, std::optional<std::size_t> slp) {
  std::erase_if(cache_, [&](const auto& entry) {
    return (mlp && entry.first.first == *mlp) || (slp && entry.first.second == *slp);
  });
}

const TrialRecord& MicrobialGA::trial() {
  const Individual first{rng_.index(cfg_.mlp_pool), rng_.index(cfg_.slp_pool)};
  Individual second;
  do {
    second = {rng_.index(cfg_.mlp_pool), rng_.index(cfg_.slp_pool)};
  } while (second == first);

  // Copies: the cache entries may be invalidated below.
  Evaluation scratch_a, scratch_b;
  const Evaluation eval_first = evaluate(first, scratch_a);
  const Evaluation eval_second = evaluate(second, scratch_b);

  const bool first_wins = eval_first.fitness >= eval_second.fitness;
  const Individual& winner = first_wins ? first : second;
  const Individual& loser = first_wins ? second : first;
  const Evaluation& win_eval = first_wins ? eval_first : eval_second;
  const Evaluation& lose_eval = first_wins ? eval_second : eval_first;

  TrialRecord rec;
  rec.run_id = run_id_;
  rec.trial = static_cast<int>(history_.size());
  rec.winner = winner;
  rec.loser = loser;
  rec.winner_fitness = win_eval.fitness;
  rec.loser_fitness = lose_eval.fitness;
  rec.winner_nodes = win_eval.graph.node_count();
  rec.structure_class =
      win_eval.graph.empty() ? "None" : std::string(to_string(classify_structure(win_eval.graph).structure));
  rec.winner_reason = win_eval.reason;
  rec.loser_reason = lose_eval.reason;
  rec.tie = eval_first.fitness == eval_second.fitness;

  // Over-budget graphs score 0 anyway; keeping them out means the recorded
  // best reservoir always fits the budget.
  for (const auto* candidate : {&eval_first, &eval_second}) {
    const Individual& who = candidate == &eval_first ? first : second;
    if (candidate->graph.node_count() > cfg_.budget()) continue;
    if (!has_best_ || candidate->fitness > best_fitness_) {
      has_best_ = true;
      best_fitness_ = candidate->fitness;
      best_genome_ = population_.genome(who.first, who.second);
      best_graph_ = candidate->graph;
      best_reason_ = candidate->reason;
    }
  }
  rec.best_fitness = best_fitness_;

  // A chromosome shared by both competitors belongs to the winner and is left alone.
  std::optional<std::size_t> changed_mlp, changed_slp;
  if (loser.first != winner.first) {
    inherit(population_.mlp_pool[loser.first], population_.mlp_pool[winner.first]);
    changed_mlp = loser.first;
  }
  if (loser.second != winner.second) {
    inherit(population_.slp_pool[loser.second], population_.slp_pool[winner.second]);
    changed_slp = loser.second;
  }
  invalidate(changed_mlp, changed_slp);

  history_.push_back(std::move(rec));
  return history_.back();
}

MgaResult mga_run(const MgaConfig& cfg, int run_id) {
  MicrobialGA ga(cfg, run_id);
  for (int i = 0; i < cfg.iterations; ++i) ga.trial();
  MgaResult result;
  result.best_genome = ga.best_genome();
  result.best_graph = ga.best_graph();
  result.best_fitness = ga.best_fitness();
  result.best_reason = ga.best_reason();
  result.eval_seed = ga.eval_seed();
  result.history = ga.history();
  return result;
}

std::string trial_log_row(const TrialRecord& r) {
  return std::to_string(r.run_id) + ',' + std::to_string(r.trial) + ',' +
         format_number(r.winner_fitness) + ',' + format_number(r.loser_fitness) + ',' +
         std::to_string(r.winner_nodes) + ',' + r.structure_class + ',' + r.reason_flags();
}

void write_trial_log(const std::vector<TrialRecord>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kTrialLogHeader << '\n';
  for (const TrialRecord& r : history) out << trial_log_row(r) << '\n';
}

}  // namespace dgca
