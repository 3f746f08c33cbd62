#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dgca/graph.hpp"
#include "dgca/readout.hpp"
#include "dgca/rng.hpp"

namespace dgca {

enum class Activation { Tanh, Linear };

std::string_view to_string(Activation a);

/// Activation function assigned to each node state.
struct ActivationMap {
  std::vector<Activation> by_state;

  /// States 0..S-2 are tanh and the last state is linear (for S = 3:
  /// {0,1} -> tanh, 2 -> linear). A single-state system is all tanh.
  static ActivationMap standard(int num_states);

  Activation operator()(int state) const { return by_state.at(static_cast<std::size_t>(state)); }
};

struct ReservoirOptions {
  double input_gain = 0.1;
  double feedback_gain = 0.95;
  std::optional<ActivationMap> activations;  // defaults to ActivationMap::standard(S)
};

/// Echo state network derived from a grown graph.
struct ReservoirSystem {
  Eigen::MatrixXd weights;  // weights(i, j): edge j -> i, entries in {-1, 0, +1}
  std::vector<Activation> activations;
  Eigen::VectorXd input_weights;  // entries in {-1, 0, +1}
  double input_gain = 0.1;
  double feedback_gain = 0.95;

  std::size_t size() const noexcept { return activations.size(); }
};

nlohmann::json reservoir_to_json(const ReservoirSystem& sys);

/// +1 for edges between equal states, -1 otherwise. Row = target, column = source.
Eigen::MatrixXd bipolarize(const StateGraph& g);

/// Input weights are drawn i.i.d. from {-1, 0, +1} with equal probability,
/// so about two thirds of the nodes receive the input. Throws GraphError on an
/// empty graph.
ReservoirSystem build_reservoir(const StateGraph& g, Rng& rng, const ReservoirOptions& options = {});

/// Any state magnitude above this aborts a run as diverged.
inline constexpr double kDivergenceBound = 1e6;

struct ReservoirRun {
  Eigen::MatrixXd states;  // (T - washout) x n; row t holds the state after input t
  bool diverged = false;
};

/// x(t+1)_i = f_i(feedback_gain * (W x(t))_i + input_gain * w_in_i * u(t)), x(0) = 0.
ReservoirRun run_reservoir(const ReservoirSystem& sys, std::span<const double> input,
                           std::size_t washout = 0);

// ---------------------------------------------------------------------------
// Task evaluation

enum class FailureReason { None, Extinct, OverBudget, Overgrown, Diverged, Invalid };

std::string_view to_string(FailureReason r);

struct EvalConfig {
  std::size_t washout = 100;
  std::size_t train_len = 2000;
  std::size_t test_len = 1000;
  int repeats = 5;
  BayesianRidgeOptions ridge;
  ReservoirOptions reservoir;
  std::size_t budget = 0;  // 0: no node limit
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct NarmaTask {
  int order = 10;
};

struct TaskFitness {
  double fitness = 0.0;  // median over repeats of 1 / (1 + NRMSE)
  double nrmse = 0.0;    // median test NRMSE (infinity when the evaluation failed)
  FailureReason reason = FailureReason::None;
  std::vector<double> repeat_nrmse;
};

/// 1 / (1 + NRMSE).
double fitness_from_nrmse(double nrmse);

TaskFitness evaluate_task(const StateGraph& g, const NarmaTask& task, const EvalConfig& cfg);

}  // namespace dgca
