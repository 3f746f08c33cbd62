#include "dgca/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "dgca/classify.hpp"
#include "dgca/csv.hpp"
#include "dgca/graph_io.hpp"

namespace dgca {
namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string run_file(int run_id, std::string_view ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%04d", run_id);
  return std::string(buf) + std::string(ext);
}

nlohmann::json activations_json(const ReservoirOptions& r) {
  if (!r.activations) return nullptr;
  nlohmann::json out = nlohmann::json::array();
  for (Activation a : r.activations->by_state) out.push_back(to_string(a));
  return out;
}

std::optional<ActivationMap> activations_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  ActivationMap map;
  for (const auto& name : j) {
    const auto s = name.get<std::string>();
    if (s == "tanh") {
      map.by_state.push_back(Activation::Tanh);
    } else if (s == "linear") {
      map.by_state.push_back(Activation::Linear);
    } else {
      throw std::invalid_argument("unknown activation '" + s + "'");
    }
  }
  return map;
}

double parse_number(const std::string& field) {
  if (field.empty() || field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(field);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  for (int order : narma_orders) {
    if (order < 1) throw std::invalid_argument("experiment: NARMA orders must be >= 1");
  }
  mga.validate();
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg) {
  const MgaConfig& m = cfg.mga;
  return {
      {"runs", cfg.runs},
      {"iterations", m.iterations},
      {"budget", m.growth.budget},
      {"fitness", m.fitness.to_string()},
      {"seed", cfg.rng_seed},
      {"narma_orders", cfg.narma_orders},
      {"output_dir", cfg.output_dir.string()},
      {"write_trial_logs", cfg.write_trial_logs},
      {"write_best_graphs", cfg.write_best_graphs},
      {"mga",
       {{"mlp_pool", m.mlp_pool},
        {"slp_pool", m.slp_pool},
        {"transfer_rate", m.transfer_rate},
        {"mutation_rate", m.mutation_rate},
        {"mutation_scale", m.mutation_scale},
        {"init_scale", m.init_scale},
        {"num_states", m.num_states},
        {"use_cache", m.use_cache}}},
      {"growth",
       {{"steps", m.growth.steps},
        {"hard_cap", m.growth.effective_hard_cap()},
        {"seed_state", m.growth.seed_state}}},
      {"eval",
       {{"washout", m.eval.washout},
        {"train_len", m.eval.train_len},
        {"test_len", m.eval.test_len},
        {"repeats", m.eval.repeats},
        {"ridge_max_iter", m.eval.ridge.max_iter},
        {"ridge_tol", m.eval.ridge.tol},
        {"input_gain", m.eval.reservoir.input_gain},
        {"feedback_gain", m.eval.reservoir.feedback_gain},
        {"activations", activations_json(m.eval.reservoir)}}},
      {"metrics",
       {{"rank_streams", m.metrics.rank_streams},
        {"stream_length", m.metrics.stream_length},
        {"stream_washout", m.metrics.stream_washout},
        {"gr_noise", m.metrics.gr_noise},
        {"rank_tolerance", m.metrics.rank_tolerance},
        {"lmc_length", m.metrics.lmc_length},
        {"lmc_washout", m.metrics.lmc_washout},
        {"lmc_test", m.metrics.lmc_test},
        {"lmc_max_delay", m.metrics.lmc_max_delay},
        {"sr_tolerance", m.metrics.sr_tolerance}}},
  };
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  MgaConfig& m = cfg.mga;
  read_opt(j, "runs", cfg.runs);
  read_opt(j, "iterations", m.iterations);
  read_opt(j, "budget", m.growth.budget);
  if (j.contains("fitness")) m.fitness = FitnessSpec::parse(j.at("fitness").get<std::string>());
  read_opt(j, "seed", cfg.rng_seed);
  read_opt(j, "narma_orders", cfg.narma_orders);
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  read_opt(j, "write_trial_logs", cfg.write_trial_logs);
  read_opt(j, "write_best_graphs", cfg.write_best_graphs);
  if (j.contains("mga")) {
    const auto& g = j.at("mga");
    read_opt(g, "mlp_pool", m.mlp_pool);
    read_opt(g, "slp_pool", m.slp_pool);
    read_opt(g, "transfer_rate", m.transfer_rate);
    read_opt(g, "mutation_rate", m.mutation_rate);
    read_opt(g, "mutation_scale", m.mutation_scale);
    read_opt(g, "init_scale", m.init_scale);
    read_opt(g, "num_states", m.num_states);
    read_opt(g, "use_cache", m.use_cache);
  }
  if (j.contains("growth")) {
    const auto& g = j.at("growth");
    read_opt(g, "steps", m.growth.steps);
    read_opt(g, "hard_cap", m.growth.hard_cap);
    read_opt(g, "seed_state", m.growth.seed_state);
  }
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    read_opt(e, "washout", m.eval.washout);
    read_opt(e, "train_len", m.eval.train_len);
    read_opt(e, "test_len", m.eval.test_len);
    read_opt(e, "repeats", m.eval.repeats);
    read_opt(e, "ridge_max_iter", m.eval.ridge.max_iter);
    read_opt(e, "ridge_tol", m.eval.ridge.tol);
    read_opt(e, "input_gain", m.eval.reservoir.input_gain);
    read_opt(e, "feedback_gain", m.eval.reservoir.feedback_gain);
    if (e.contains("activations")) {
      m.eval.reservoir.activations = activations_from_json(e.at("activations"));
    }
  }
  if (j.contains("metrics")) {
    const auto& k = j.at("metrics");
    read_opt(k, "rank_streams", m.metrics.rank_streams);
    read_opt(k, "stream_length", m.metrics.stream_length);
    read_opt(k, "stream_washout", m.metrics.stream_washout);
    read_opt(k, "gr_noise", m.metrics.gr_noise);
    read_opt(k, "rank_tolerance", m.metrics.rank_tolerance);
    read_opt(k, "lmc_length", m.metrics.lmc_length);
    read_opt(k, "lmc_washout", m.metrics.lmc_washout);
    read_opt(k, "lmc_test", m.metrics.lmc_test);
    read_opt(k, "lmc_max_delay", m.metrics.lmc_max_delay);
    read_opt(k, "sr_tolerance", m.metrics.sr_tolerance);
  }
  // The metric protocol shares the reservoir construction of task evaluation.
  m.metrics.reservoir = m.eval.reservoir;
  m.metrics.ridge = m.eval.ridge;
  return cfg;
}

// ---------------------------------------------------------------------------

std::string record_row(const ExperimentRecord& r) {
  auto nrmse_field = [&r](int order) {
    auto it = r.nrmse.find(order);
    return it == r.nrmse.end() ? std::string() : format_number(it->second);
  };
  return std::to_string(r.run_id) + ',' + format_number(r.best_fitness) + ',' + nrmse_field(10) +
         ',' + nrmse_field(20) + ',' + nrmse_field(30) + ',' + std::to_string(r.nodes) + ',' +
         format_number(r.budget_pct) + ',' + r.structure_class + ',' + format_number(r.metrics.kr) +
         ',' + format_number(r.metrics.gr) + ',' + format_number(r.metrics.lmc) + ',' +
         format_number(r.metrics.sr);
}

std::vector<ExperimentRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    ExperimentRecord r;
    r.run_id = std::stoi(f[0]);
    r.best_fitness = parse_number(f[1]);
    const int orders[] = {10, 20, 30};
    for (int k = 0; k < 3; ++k) {
      if (!f[2 + k].empty()) r.nrmse[orders[k]] = parse_number(f[2 + k]);
    }
    r.nodes = static_cast<std::size_t>(std::stoul(f[5]));
    r.budget_pct = parse_number(f[6]);
    r.structure_class = f[7];
    r.metrics.n = r.nodes;
    r.metrics.kr = parse_number(f[8]);
    r.metrics.gr = parse_number(f[9]);
    r.metrics.lmc = parse_number(f[10]);
    r.metrics.sr = parse_number(f[11]);
    r.metrics.valid = r.nodes > 0;
    records.push_back(std::move(r));
  }
  return records;
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kRecordsHeader << '\n';
  for (const auto& r : records) out << record_row(r) << '\n';
}

ExperimentRecord score_reservoir(const StateGraph& g, int id, double fitness, std::size_t budget,
                                 const std::vector<int>& narma_orders, const EvalConfig& eval,
                                 const MetricConfig& metrics, std::uint64_t seed) {
  ExperimentRecord r;
  r.run_id = id;
  r.best_fitness = fitness;
  r.nodes = g.node_count();
  r.budget_pct = budget > 0 ? 100.0 * static_cast<double>(r.nodes) / static_cast<double>(budget) : 0.0;
  r.best_graph = g;
  for (int order : narma_orders) {
    EvalConfig e = eval;
    e.budget = 0;
    e.rng_seed = derive_seed(seed, stream::kTaskData, static_cast<std::uint64_t>(order));
    r.nrmse[order] = evaluate_task(g, NarmaTask{order}, e).nrmse;
  }
  MetricConfig m = metrics;
  m.rng_seed = derive_seed(seed, stream::kMetrics);
  r.metrics = metric_suite(g, m);
  if (!g.empty()) r.structure_class = std::string(to_string(classify_structure(g).structure));
  return r;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, const RunCallback& on_run) {
  cfg.validate();
  namespace fs = std::filesystem;
  const bool persist = !cfg.output_dir.empty();
  const fs::path records_path = cfg.output_dir / "records.csv";

  std::vector<ExperimentRecord> records;
  std::set<int> done;
  if (persist) {
    fs::create_directories(cfg.output_dir);
    if (cfg.write_trial_logs) fs::create_directories(cfg.output_dir / "trial_logs");
    if (cfg.write_best_graphs) fs::create_directories(cfg.output_dir / "best_graphs");

    nlohmann::json manifest;
    manifest["config"] = experiment_config_to_json(cfg);
    nlohmann::json seeds = nlohmann::json::array();
    for (int run = 0; run < cfg.runs; ++run) {
      seeds.push_back({{"run_id", run},
                       {"mga_seed", derive_seed(cfg.rng_seed, stream::kRun, static_cast<std::uint64_t>(run))},
                       {"record_seed", derive_seed(cfg.rng_seed, stream::kRecord, static_cast<std::uint64_t>(run))}});
    }
    manifest["seeds"] = std::move(seeds);
    manifest["records_header"] = kRecordsHeader;
    manifest["quartiles"] = "linear interpolation between closest ranks";
    manifest["started_at"] = std::chrono::duration_cast<std::chrono::seconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count();
    std::ofstream(cfg.output_dir / "manifest.json") << manifest.dump(2) << '\n';

    if (cfg.resume && fs::exists(records_path)) {
      records = read_records_csv(records_path);
      for (const auto& r : records) done.insert(r.run_id);
    } else {
      std::ofstream(records_path) << kRecordsHeader << '\n';
    }
  }

  for (int run = 0; run < cfg.runs; ++run) {
    if (done.contains(run)) continue;
    const auto run_key = static_cast<std::uint64_t>(run);
    MgaConfig mga = cfg.mga;
    mga.rng_seed = derive_seed(cfg.rng_seed, stream::kRun, run_key);
    const MgaResult result = mga_run(mga, run);

    ExperimentRecord rec =
        score_reservoir(result.best_graph, run, result.best_fitness, mga.budget(), cfg.narma_orders,
                        mga.eval, mga.metrics, derive_seed(cfg.rng_seed, stream::kRecord, run_key));

    if (persist) {
      if (cfg.write_trial_logs) {
        write_trial_log(result.history, cfg.output_dir / "trial_logs" / run_file(run, ".csv"));
      }
      if (cfg.write_best_graphs) {
        save_graph(result.best_graph, cfg.output_dir / "best_graphs" / run_file(run, ".json"));
        std::ofstream(cfg.output_dir / "best_graphs" / run_file(run, ".genome.json"))
            << genome_to_json(result.best_genome).dump() << '\n';
      }
      std::ofstream out(records_path, std::ios::app);
      out << record_row(rec) << '\n';
      out.flush();
    }
    if (on_run) on_run(rec, result);
    records.push_back(std::move(rec));
  }
  return records;
}

StateGraph control_esn(std::size_t n, double density, int num_states, Rng& rng) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("control_esn: density must be in (0, 1]");
  }
  StateGraph g(num_states);
  for (std::size_t i = 0; i < n; ++i) {
    g.add_node(static_cast<int>(rng.index(static_cast<std::uint64_t>(num_states))));
  }
  for (const Node& src : g.nodes()) {
    for (const Node& dst : g.nodes()) {
      if (rng.bernoulli(density)) g.add_edge(src.id, dst.id);
    }
  }
  return g;
}

double mean_edge_density(const std::vector<StateGraph>& graphs) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& g : graphs) {
    if (g.empty()) continue;
    total += edge_density(g);
    ++count;
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

std::vector<ExperimentRecord> control_cohort(std::size_t count, std::size_t n, double density,
                                             const ExperimentConfig& cfg) {
  const MgaConfig& mga = cfg.mga;
  std::vector<ExperimentRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto key = static_cast<std::uint64_t>(i);
    Rng rng(derive_seed(cfg.rng_seed, stream::kControl, key));
    const StateGraph g = control_esn(n, density, mga.num_states, rng);
    const std::uint64_t eval_seed = derive_seed(cfg.rng_seed, stream::kEvaluation, key);
    double fitness = 0.0;
    if (mga.fitness.kind == FitnessSpec::Kind::Narma) {
      EvalConfig e = mga.eval;
      e.budget = 0;
      e.rng_seed = eval_seed;
      fitness = evaluate_task(g, NarmaTask{mga.fitness.narma_order}, e).fitness;
    } else {
      MetricConfig m = mga.metrics;
      m.rng_seed = eval_seed;
      fitness = metric_fitness(mga.fitness.metric, g, m);
    }
    out.push_back(score_reservoir(g, static_cast<int>(i), fitness, n, cfg.narma_orders, mga.eval,
                                  mga.metrics, derive_seed(cfg.rng_seed, stream::kRecord, key)));
  }
  return out;
}

// ---------------------------------------------------------------------------

double record_value(const ExperimentRecord& r, std::string_view column) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto order = [&](int k) {
    auto it = r.nrmse.find(k);
    return it == r.nrmse.end() ? nan : it->second;
  };
  if (column == "best_fitness") return r.best_fitness;
  if (column == "nrmse_10") return order(10);
  if (column == "nrmse_20") return order(20);
  if (column == "nrmse_30") return order(30);
  if (column == "nodes") return static_cast<double>(r.nodes);
  if (column == "budget_pct") return r.budget_pct;
  if (column == "kr") return r.metrics.kr;
  if (column == "gr") return r.metrics.gr;
  if (column == "lmc") return r.metrics.lmc;
  if (column == "sr") return r.metrics.sr;
  throw std::invalid_argument("unknown record column '" + std::string(column) + "'");
}

namespace {

std::vector<double> column_values(const std::vector<ExperimentRecord>& records,
                                  std::string_view column) {
  std::vector<double> values;
  for (const auto& r : records) {
    const double v = record_value(r, column);
    if (std::isfinite(v)) values.push_back(v);
  }
  return values;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::map<std::string, std::vector<ExperimentRecord>>& groups,
                                  const std::vector<std::string>& columns) {
  std::vector<SummaryRow> rows;
  for (const auto& [group, records] : groups) {
    for (const auto& column : columns) {
      const auto values = column_values(records, column);
      if (values.empty()) continue;
      rows.push_back({group, column, median_iqr(values)});
    }
  }
  return rows;
}

std::map<std::string, std::vector<ExperimentRecord>> group_by_class(
    const std::vector<ExperimentRecord>& records) {
  std::map<std::string, std::vector<ExperimentRecord>> groups;
  for (const auto& r : records) groups[r.structure_class].push_back(r);
  return groups;
}

std::vector<PairwiseTest> pairwise_u_tests(
    const std::map<std::string, std::vector<ExperimentRecord>>& groups, std::string_view column,
    double alpha) {
  std::vector<PairwiseTest> tests;
  for (auto a = groups.begin(); a != groups.end(); ++a) {
    const auto va = column_values(a->second, column);
    if (va.empty()) continue;
    for (auto b = std::next(a); b != groups.end(); ++b) {
      const auto vb = column_values(b->second, column);
      if (vb.empty()) continue;
      tests.push_back({a->first, b->first, mann_whitney_u(va, vb), false});
    }
  }
  if (tests.empty()) return tests;
  std::vector<double> pvals;
  for (const auto& t : tests) pvals.push_back(t.test.p);
  const BonferroniResult corrected = bonferroni(pvals, alpha);
  for (std::size_t i = 0; i < tests.size(); ++i) tests[i].significant = corrected.significant[i];
  return tests;
}

}  // namespace dgca
