#include "dgca/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dgca/narma.hpp"

namespace dgca {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Linear: return "linear";
  }
  return "unknown";
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "ok";
    case FailureReason::Extinct: return "extinct";
    case FailureReason::OverBudget: return "over_budget";
    case FailureReason::Overgrown: return "overgrown";
    case FailureReason::Diverged: return "diverged";
    case FailureReason::Invalid: return "invalid";
  }
  return "unknown";
}

ActivationMap ActivationMap::standard(int num_states) {
  ActivationMap map;
  map.by_state.assign(static_cast<std::size_t>(num_states), Activation::Tanh);
  if (num_states > 1) map.by_state.back() = Activation::Linear;
  return map;
}

nlohmann::json reservoir_to_json(const ReservoirSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.size());
  std::vector<int> w;
  w.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) w.push_back(static_cast<int>(sys.weights(i, j)));
  }
  std::vector<std::string> act;
  for (Activation a : sys.activations) act.emplace_back(to_string(a));
  std::vector<int> w_in;
  for (Eigen::Index i = 0; i < n; ++i) w_in.push_back(static_cast<int>(sys.input_weights[i]));
  return {{"n", n},        {"W", w},
          {"act", act},    {"W_in", w_in},
          {"alpha", sys.feedback_gain}, {"beta", sys.input_gain}};
}

Eigen::MatrixXd bipolarize(const StateGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const auto& nodes = g.nodes();
  for (const auto& [src, dst] : g.edges()) {
    const std::size_t s = *g.index_of(src);
    const std::size_t d = *g.index_of(dst);
    w(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(s)) =
        nodes[s].state == nodes[d].state ? 1.0 : -1.0;
  }
  return w;
}

ReservoirSystem build_reservoir(const StateGraph& g, Rng& rng, const ReservoirOptions& options) {
  if (g.empty()) throw GraphError("build_reservoir: empty graph");
  const ActivationMap map = options.activations.value_or(ActivationMap::standard(g.num_states()));
  if (map.by_state.size() != static_cast<std::size_t>(g.num_states())) {
    throw std::invalid_argument("build_reservoir: activation map does not cover every state");
  }
  ReservoirSystem sys;
  sys.weights = bipolarize(g);
  sys.activations.reserve(g.node_count());
  for (const Node& n : g.nodes()) sys.activations.push_back(map(n.state));
  sys.input_weights.resize(static_cast<Eigen::Index>(g.node_count()));
  for (Eigen::Index i = 0; i < sys.input_weights.size(); ++i) {
    sys.input_weights[i] = static_cast<double>(rng.index(3)) - 1.0;
  }
  sys.input_gain = options.input_gain;
  sys.feedback_gain = options.feedback_gain;
  return sys;
}

ReservoirRun run_reservoir(const ReservoirSystem& sys, std::span<const double> input,
                           std::size_t washout) {
  const std::size_t n = sys.size();
  const std::size_t steps = input.size();
  ReservoirRun run;
  const std::size_t kept = steps > washout ? steps - washout : 0;
  run.states.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(n));

  // Sparse rows: W is bipolar and usually sparse.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = sys.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (w != 0.0) rows[i].emplace_back(j, w);
    }
  }

  std::vector<double> x(n, 0.0), next(n, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    bool bad = false;
    for (std::size_t i = 0; i < n; ++i) {
      double recurrent = 0.0;
      for (const auto& [j, w] : rows[i]) recurrent += w * x[j];
      const double pre = sys.feedback_gain * recurrent +
                         sys.input_gain * sys.input_weights[static_cast<Eigen::Index>(i)] * input[t];
      const double v = sys.activations[i] == Activation::Tanh ? std::tanh(pre) : pre;
      if (!(std::abs(v) <= kDivergenceBound)) bad = true;
      next[i] = v;
    }
    std::swap(x, next);
    if (bad) {
      run.diverged = true;
      run.states.resize(0, static_cast<Eigen::Index>(n));
      return run;
    }
    if (t >= washout) {
      const auto row = static_cast<Eigen::Index>(t - washout);
      for (std::size_t i = 0; i < n; ++i) run.states(row, static_cast<Eigen::Index>(i)) = x[i];
    }
  }
  return run;
}

void EvalConfig::validate() const {
  if (train_len < 2 || test_len < 2) throw std::invalid_argument("eval: train/test too short");
  if (repeats < 1) throw std::invalid_argument("eval: repeats must be >= 1");
}

double fitness_from_nrmse(double nrmse) {
  if (!std::isfinite(nrmse)) return 0.0;
  return 1.0 / (1.0 + nrmse);
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

TaskFitness failed(FailureReason reason) {
  TaskFitness f;
  f.fitness = 0.0;
  f.nrmse = std::numeric_limits<double>::infinity();
  f.reason = reason;
  return f;
}

}  // namespace

TaskFitness evaluate_task(const StateGraph& g, const NarmaTask& task, const EvalConfig& cfg) {
  cfg.validate();
  if (g.empty()) return failed(FailureReason::Extinct);
  if (cfg.budget > 0 && g.node_count() > cfg.budget) return failed(FailureReason::OverBudget);

  const std::size_t total = cfg.washout + cfg.train_len + cfg.test_len;
  TaskFitness result;
  std::vector<double> fitness;
  for (int r = 0; r < cfg.repeats; ++r) {
    const auto rep = static_cast<std::uint64_t>(r);
    Rng weight_rng(derive_seed(cfg.rng_seed, stream::kInputWeights, rep));
    const ReservoirSystem sys = build_reservoir(g, weight_rng, cfg.reservoir);
    const NarmaSeries data =
        narma_series(task.order, total, derive_seed(cfg.rng_seed, stream::kTaskData, rep));

    const ReservoirRun run = run_reservoir(sys, data.u, cfg.washout);
    if (run.diverged) return failed(FailureReason::Diverged);

    const auto train = static_cast<Eigen::Index>(cfg.train_len);
    const auto test = static_cast<Eigen::Index>(cfg.test_len);
    const std::span<const double> y(data.y);
    const auto y_train = y.subspan(cfg.washout, cfg.train_len);
    const auto y_test = y.subspan(cfg.washout + cfg.train_len, cfg.test_len);

    const LinearReadout readout = train_readout(run.states.topRows(train), y_train, cfg.ridge);
    const Eigen::VectorXd pred = readout.predict(run.states.bottomRows(test));
    const double e = nrmse(std::span<const double>(pred.data(), static_cast<std::size_t>(test)), y_test);
    result.repeat_nrmse.push_back(e);
    fitness.push_back(fitness_from_nrmse(e));
  }
  result.fitness = median_of(fitness);
  result.nrmse = median_of(result.repeat_nrmse);
  result.reason = FailureReason::None;
  return result;
}

}  // namespace dgca
