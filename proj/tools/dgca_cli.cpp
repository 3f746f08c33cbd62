#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgca/classify.hpp"
#include "dgca/csv.hpp"
#include "dgca/dgca.hpp"
#include "dgca/experiment.hpp"
#include "dgca/graph_io.hpp"
#include "dgca/metrics.hpp"
#include "dgca/mga.hpp"
#include "dgca/narma.hpp"
#include "dgca/reservoir.hpp"
#include "dgca/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Emits to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

// Options shared by evolve / experiment / control. Unset flags keep the
// config-file (or built-in) value.
struct SearchFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> iterations;
  std::optional<std::size_t> budget;
  std::optional<std::string> fitness;
  std::optional<int> repeats;
  std::optional<std::size_t> washout, train, test;

  void attach(CLI::App* app, bool with_runs) {
    app->add_option("--config", config, "ExperimentConfig JSON")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Base seed");
    if (with_runs) app->add_option("--runs", runs, "Number of independent runs");
    app->add_option("--iterations", iterations, "MGA trials per run");
    app->add_option("--budget", budget, "Node budget");
    app->add_option("--fitness", fitness, "narma:N or metric:{kr,gr,lmc,sr,all}");
    app->add_option("--repeats", repeats, "Evaluation repeats");
    app->add_option("--washout", washout);
    app->add_option("--train", train);
    app->add_option("--test", test);
  }

  dgca::ExperimentConfig resolve() const {
    dgca::ExperimentConfig cfg;
    if (!config.empty()) cfg = dgca::experiment_config_from_json(read_json(config));
    auto& m = cfg.mga;
    if (seed) cfg.rng_seed = *seed;
    if (runs) cfg.runs = *runs;
    if (iterations) m.iterations = *iterations;
    if (budget) m.growth.budget = *budget;
    if (fitness) m.fitness = dgca::FitnessSpec::parse(*fitness);
    if (repeats) m.eval.repeats = *repeats;
    if (washout) m.eval.washout = *washout;
    if (train) m.eval.train_len = *train;
    if (test) m.eval.test_len = *test;
    return cfg;
  }
};

std::string metrics_csv(const dgca::MetricSuite& s) {
  using dgca::format_number;
  return "n,kr,gr,lmc,sr,kr_norm,gr_norm,lmc_norm,sr_fitness\n" + std::to_string(s.n) + ',' +
         std::to_string(s.kernel_rank) + ',' + std::to_string(s.generalization_rank) + ',' +
         format_number(s.memory_capacity) + ',' + format_number(s.sr) + ',' + format_number(s.kr) +
         ',' + format_number(s.gr) + ',' + format_number(s.lmc) + ',' +
         format_number(dgca::sr_fitness(s.sr)) + '\n';
}

std::string label_of(const fs::path& records) {
  const fs::path parent = records.parent_path();
  return parent.empty() ? records.stem().string() : parent.filename().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grow, evolve and analyse graph-cellular-automaton reservoirs"};
  app.require_subcommand(1);

  // grow ---------------------------------------------------------------------
  auto* grow_cmd = app.add_subcommand("grow", "Grow a graph from a single seed node");
  std::string grow_genome, grow_out, grow_trace;
  std::optional<std::uint64_t> grow_seed;
  int grow_states = 3;
  double grow_scale = 1.0;
  dgca::GrowthConfig growth;
  grow_cmd->add_option("--genome", grow_genome, "Genome JSON")->check(CLI::ExistingFile);
  grow_cmd->add_option("--random-seed", grow_seed, "Draw random weights instead of --genome");
  grow_cmd->add_option("--states", grow_states, "Number of node states (random genome)");
  grow_cmd->add_option("--scale", grow_scale, "Uniform weight range (random genome)");
  grow_cmd->add_option("--steps", growth.steps);
  grow_cmd->add_option("--budget", growth.budget);
  grow_cmd->add_option("--hard-cap", growth.hard_cap, "0: four times the budget");
  grow_cmd->add_option("--seed-state", growth.seed_state);
  grow_cmd->add_option("--out", grow_out, "Graph JSON (stdout if omitted)");
  grow_cmd->add_option("--trace", grow_trace, "Per-step JSONL trace");

  // evaluate -----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a graph as a reservoir on a task");
  std::string eval_graph, eval_task = "narma", eval_series, eval_reservoir;
  int eval_order = 10;
  dgca::EvalConfig eval;
  eval_cmd->add_option("--graph", eval_graph)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--task", eval_task)->check(CLI::IsMember({"narma"}));
  eval_cmd->add_option("--order", eval_order, "NARMA order");
  eval_cmd->add_option("--washout", eval.washout);
  eval_cmd->add_option("--train", eval.train_len);
  eval_cmd->add_option("--test", eval.test_len);
  eval_cmd->add_option("--repeats", eval.repeats);
  eval_cmd->add_option("--seed", eval.rng_seed);
  eval_cmd->add_option("--dump-series", eval_series, "CSV t,u,y of the first repeat's data");
  eval_cmd->add_option("--dump-reservoir", eval_reservoir, "JSON of the first repeat's reservoir");

  // metrics ------------------------------------------------------------------
  auto* metrics_cmd = app.add_subcommand("metrics", "KR, GR, LMC and SR of a graph");
  std::string metrics_graph, metrics_kind, metrics_out;
  bool metrics_all = false;
  dgca::MetricConfig metric_cfg;
  metrics_cmd->add_option("--graph", metrics_graph)->required()->check(CLI::ExistingFile);
  auto* all_flag = metrics_cmd->add_flag("--all", metrics_all, "One-row CSV of every metric");
  metrics_cmd->add_option("--kind", metrics_kind, "Print one fitness value")
      ->check(CLI::IsMember({"kr", "gr", "lmc", "sr", "all"}))
      ->excludes(all_flag);
  metrics_cmd->add_option("--seed", metric_cfg.rng_seed);
  metrics_cmd->add_option("--out", metrics_out);

  // classify -----------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand("classify", "Structure class of a graph");
  std::string classify_graph, classify_out;
  classify_cmd->add_option("--graph", classify_graph)->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--out", classify_out);

  // evolve -------------------------------------------------------------------
  auto* evolve_cmd = app.add_subcommand("evolve", "One microbial GA run");
  SearchFlags evolve_flags;
  std::string evolve_out;
  int evolve_run_id = 0;
  evolve_flags.attach(evolve_cmd, false);
  evolve_cmd->add_option("--run-id", evolve_run_id);
  evolve_cmd->add_option("--out", evolve_out, "Output directory")->required();

  // experiment ---------------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "Independent MGA runs with scored best reservoirs");
  SearchFlags exp_flags;
  std::string exp_out;
  bool exp_resume = false, exp_quiet = false;
  exp_flags.attach(exp_cmd, true);
  exp_cmd->get_option("--seed")->required();
  exp_cmd->add_option("--out", exp_out, "Output directory (overrides the config)");
  exp_cmd->add_flag("--resume", exp_resume, "Skip run ids already in records.csv");
  exp_cmd->add_flag("--quiet", exp_quiet);

  // control ------------------------------------------------------------------
  auto* control_cmd = app.add_subcommand("control", "Score random control reservoirs");
  SearchFlags control_flags;
  std::size_t control_count = 20, control_nodes = 200;
  std::optional<double> control_density;
  std::string control_match, control_out;
  control_flags.attach(control_cmd, false);
  control_cmd->add_option("--count", control_count);
  control_cmd->add_option("--nodes", control_nodes);
  auto* density_opt = control_cmd->add_option("--density", control_density, "Edge probability");
  control_cmd->add_option("--match", control_match, "Experiment directory whose best graphs set the density")
      ->check(CLI::ExistingDirectory)
      ->excludes(density_opt);
  control_cmd->add_option("--out", control_out, "records.csv path (stdout if omitted)");

  // stats --------------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "Median (IQR) tables and pairwise U tests");
  std::vector<std::string> stats_inputs, stats_labels;
  std::string stats_group = "auto", stats_out;
  std::vector<std::string> stats_columns;
  double stats_alpha = 0.05;
  stats_cmd->add_option("records", stats_inputs, "records.csv files")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--labels", stats_labels, "Group label per file")->delimiter(',');
  stats_cmd->add_option("--group-by", stats_group)->check(CLI::IsMember({"auto", "file", "class"}));
  stats_cmd->add_option("--columns", stats_columns, "Columns to test")->delimiter(',');
  stats_cmd->add_option("--alpha", stats_alpha);
  stats_cmd->add_option("--out", stats_out, "Output directory (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grow_cmd) {
      dgca::Genome genome;
      if (!grow_genome.empty()) {
        genome = dgca::genome_from_json(read_json(grow_genome));
      } else if (grow_seed) {
        dgca::Rng rng(*grow_seed);
        genome = dgca::Genome::random(grow_states, grow_scale, rng);
      } else {
        throw std::invalid_argument("grow needs --genome or --random-seed");
      }
      const auto result = dgca::grow(genome, growth);
      emit(grow_out, dgca::graph_to_string(result.graph) + '\n');
      if (!grow_trace.empty()) write_text(grow_trace, result.trace.to_jsonl());
      std::cerr << "nodes=" << result.graph.node_count() << " edges=" << result.graph.edge_count()
                << (result.trace.extinct ? " extinct" : "") << (result.trace.overgrown ? " overgrown" : "")
                << '\n';
    } else if (*eval_cmd) {
      const auto g = dgca::load_graph(eval_graph);
      const auto fit = dgca::evaluate_task(g, dgca::NarmaTask{eval_order}, eval);
      json out{{"task", eval_task},
               {"order", eval_order},
               {"nodes", g.node_count()},
               {"fitness", fit.fitness},
               {"nrmse", std::isfinite(fit.nrmse) ? json(fit.nrmse) : json(nullptr)},
               {"reason", dgca::to_string(fit.reason)},
               {"repeat_nrmse", fit.repeat_nrmse}};
      std::cout << out.dump(2) << '\n';
      // Same seeds as repeat 0 of evaluate_task.
      if (!eval_series.empty()) {
        const auto series =
            dgca::narma_series(eval_order, eval.washout + eval.train_len + eval.test_len,
                               dgca::derive_seed(eval.rng_seed, dgca::stream::kTaskData, 0));
        dgca::write_series_csv(series, eval_series);
      }
      if (!eval_reservoir.empty() && !g.empty()) {
        dgca::Rng rng(dgca::derive_seed(eval.rng_seed, dgca::stream::kInputWeights, 0));
        const auto sys = dgca::build_reservoir(g, rng, eval.reservoir);
        write_text(eval_reservoir, dgca::reservoir_to_json(sys).dump() + '\n');
      }
    } else if (*metrics_cmd) {
      const auto g = dgca::load_graph(metrics_graph);
      if (!metrics_kind.empty()) {
        const double v =
            dgca::metric_fitness(dgca::metric_kind_from_string(metrics_kind), g, metric_cfg);
        emit(metrics_out, dgca::format_number(v) + '\n');
      } else {
        emit(metrics_out, metrics_csv(dgca::metric_suite(g, metric_cfg)));
      }
    } else if (*classify_cmd) {
      const auto g = dgca::load_graph(classify_graph);
      emit(classify_out, dgca::classify_structure(g).to_json().dump(2) + '\n');
    } else if (*evolve_cmd) {
      dgca::ExperimentConfig cfg = evolve_flags.resolve();
      dgca::MgaConfig mga = cfg.mga;
      mga.rng_seed = cfg.rng_seed;
      const auto result = dgca::mga_run(mga, evolve_run_id);
      const fs::path dir(evolve_out);
      fs::create_directories(dir);
      dgca::write_trial_log(result.history, dir / "trial_log.csv");
      write_text(dir / "best_genome.json", dgca::genome_to_json(result.best_genome).dump() + '\n');
      dgca::save_graph(result.best_graph, dir / "best_graph.json");
      json summary{{"config", dgca::experiment_config_to_json(cfg)},
                   {"best_fitness", result.best_fitness},
                   {"best_reason", dgca::to_string(result.best_reason)},
                   {"best_nodes", result.best_graph.node_count()},
                   {"eval_seed", result.eval_seed}};
      write_text(dir / "summary.json", summary.dump(2) + '\n');
      std::cout << "best_fitness=" << dgca::format_number(result.best_fitness)
                << " nodes=" << result.best_graph.node_count() << '\n';
    } else if (*exp_cmd) {
      dgca::ExperimentConfig cfg = exp_flags.resolve();
      if (!exp_out.empty()) cfg.output_dir = exp_out;
      if (cfg.output_dir.empty()) throw std::invalid_argument("experiment needs --out or output_dir");
      cfg.resume = exp_resume;
      dgca::run_experiment(cfg, [&](const dgca::ExperimentRecord& r, const dgca::MgaResult&) {
        if (!exp_quiet) {
          std::cerr << "run " << r.run_id << ": fitness=" << dgca::format_number(r.best_fitness)
                    << " nodes=" << r.nodes << " class=" << r.structure_class << '\n';
        }
      });
    } else if (*control_cmd) {
      dgca::ExperimentConfig cfg = control_flags.resolve();
      double density = control_density.value_or(0.0);
      if (!control_match.empty()) {
        std::vector<dgca::StateGraph> graphs;
        for (const auto& entry : fs::directory_iterator(fs::path(control_match) / "best_graphs")) {
          const auto name = entry.path().filename().string();
          if (entry.path().extension() == ".json" && name.find(".genome") == std::string::npos) {
            graphs.push_back(dgca::load_graph(entry.path()));
          }
        }
        density = dgca::mean_edge_density(graphs);
        std::cerr << "matched density " << dgca::format_number(density) << " over "
                  << graphs.size() << " graphs\n";
      }
      if (!control_density && control_match.empty()) {
        throw std::invalid_argument("control needs --density or --match");
      }
      const auto records = dgca::control_cohort(control_count, control_nodes, density, cfg);
      std::string text = std::string(dgca::kRecordsHeader) + '\n';
      for (const auto& r : records) text += dgca::record_row(r) + '\n';
      emit(control_out, text);
    } else if (*stats_cmd) {
      if (!stats_labels.empty() && stats_labels.size() != stats_inputs.size()) {
        throw std::invalid_argument("--labels needs one label per records file");
      }
      const bool by_file =
          stats_group == "file" || (stats_group == "auto" && stats_inputs.size() > 1);
      std::map<std::string, std::vector<dgca::ExperimentRecord>> groups;
      for (std::size_t i = 0; i < stats_inputs.size(); ++i) {
        auto records = dgca::read_records_csv(stats_inputs[i]);
        if (by_file) {
          const std::string label = stats_labels.empty() ? label_of(stats_inputs[i]) : stats_labels[i];
          auto& dst = groups[label];
          dst.insert(dst.end(), records.begin(), records.end());
        } else {
          for (auto& [cls, rs] : dgca::group_by_class(records)) {
            auto& dst = groups[cls];
            dst.insert(dst.end(), rs.begin(), rs.end());
          }
        }
      }
      for (const auto& [name, rs] : groups) {
        if (rs.empty()) std::cerr << "warning: group " << name << " is empty\n";
      }
      const auto columns = stats_columns.empty() ? dgca::summary_columns() : stats_columns;

      std::string summary = "# quartiles: linear interpolation between closest ranks\n"
                            "group,column,count,median,iqr,formatted\n";
      for (const auto& row : dgca::summarize(groups, columns)) {
        summary += row.group + ',' + row.column + ',' + std::to_string(row.stats.count) + ',' +
                   dgca::format_number(row.stats.median) + ',' + dgca::format_number(row.stats.iqr) +
                   ',' + dgca::format_median_iqr(row.stats) + '\n';
      }
      std::string tests = "column,group_a,group_b,u,p,exact,threshold,significant\n";
      for (const auto& column : columns) {
        const auto pairs = dgca::pairwise_u_tests(groups, column, stats_alpha);
        const double threshold = pairs.empty() ? stats_alpha : stats_alpha / static_cast<double>(pairs.size());
        for (const auto& t : pairs) {
          tests += column + ',' + t.group_a + ',' + t.group_b + ',' + dgca::format_number(t.test.u) +
                   ',' + dgca::format_number(t.test.p) + ',' + (t.test.exact ? "1" : "0") + ',' +
                   dgca::format_number(threshold) + ',' + (t.significant ? "1" : "0") + '\n';
        }
      }
      if (stats_out.empty()) {
        std::cout << summary << '\n' << tests;
      } else {
        write_text(fs::path(stats_out) / "summary.csv", summary);
        write_text(fs::path(stats_out) / "u_tests.csv", tests);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
