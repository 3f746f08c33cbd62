#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgca/graph.hpp"
#include "dgca/rng.hpp"

namespace dgca {

// Developmental graph cellular automaton: each step aggregates every node's
// neighbourhood, picks an action (remove / divide / stasis) plus edge options
// for the daughter node, rewires the graph synchronously, and finally assigns
// new node states from the recomputed neighbourhood.

inline constexpr std::size_t kHiddenUnits = 64;
inline constexpr std::size_t kActionCount = 3;
inline constexpr std::size_t kFromExistingOptions = 3;
inline constexpr std::size_t kToExistingOptions = 3;
inline constexpr std::size_t kToNewOptions = 2;
inline constexpr std::size_t kActionOutputs =
    kActionCount + kFromExistingOptions + kToExistingOptions + kToNewOptions;

enum class Action { Remove = 0, Divide = 1, Stasis = 2 };

/// Edges from existing nodes into the daughter X'.
enum class FromExisting { None = 0, ParentToNew = 1, CopyInEdges = 2 };
/// Edges from the daughter X' into existing nodes.
enum class ToExisting { None = 0, NewToParent = 1, CopyOutEdges = 2 };
/// Edges among new nodes.
enum class ToNew { None = 0, SelfLoop = 1 };

struct ActionDecision {
  Action action = Action::Stasis;
  FromExisting from_existing = FromExisting::None;
  ToExisting to_existing = ToExisting::None;
  ToNew to_new = ToNew::None;

  friend bool operator==(const ActionDecision&, const ActionDecision&) = default;
};

/// Input width of both networks for S states: one-hot own state, in-neighbour
/// state counts, out-neighbour state counts, constant bias.
constexpr std::size_t neighborhood_width(int num_states) {
  return 3 * static_cast<std::size_t>(num_states) + 1;
}

/// Rule weights. The action network is a 2-layer perceptron
/// (D -> 64 tanh -> 11 linear); the state network is a single linear layer
/// (D -> S). The bias of the first layer and of the state layer comes from the
/// constant entry of the neighbourhood vector.
///
/// mlp layout: W1 (64 x D, row-major) | W2 (11 x 64, row-major) | b2 (11)
/// slp layout: W (S x D, row-major)
struct Genome {
  int num_states = 3;
  std::vector<double> mlp;
  std::vector<double> slp;

  static std::size_t mlp_size(int num_states);
  static std::size_t slp_size(int num_states);

  static Genome zeros(int num_states = 3);
  static Genome random(int num_states, double scale, Rng& rng);

  /// Throws if sizes mismatch or any weight is non-finite.
  void validate() const;

  // Views into the mlp chromosome.
  double hidden_weight(std::size_t unit, std::size_t input) const;
  double output_weight(std::size_t output, std::size_t unit) const;
  double output_bias(std::size_t output) const;
  std::size_t output_weight_offset() const;
  std::size_t output_bias_offset() const;

  friend bool operator==(const Genome&, const Genome&) = default;
};

nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& j);

struct NeighborhoodVector {
  int num_states = 3;
  std::vector<double> values;  // length 3S+1

  std::span<const double> own_state() const { return {values.data(), width()}; }
  std::span<const double> in_counts() const { return {values.data() + width(), width()}; }
  std::span<const double> out_counts() const {
    return {values.data() + 2 * width(), width()};
  }
  double bias() const { return values.back(); }

 private:
  std::size_t width() const { return static_cast<std::size_t>(num_states); }
};

NeighborhoodVector aggregate_neighborhood(const StateGraph& g, NodeId node);

/// Neighbourhood vectors for every node, in StateGraph::nodes() order.
std::vector<NeighborhoodVector> aggregate_all(const StateGraph& g);

ActionDecision action_forward(const Genome& genome, std::span<const double> input);

/// Applies one synchronous rewiring step. Every node in `g` must have a
/// decision; edge replication reads the parent's pre-step edges only.
StateGraph restructure(const StateGraph& g, const std::map<NodeId, ActionDecision>& decisions);

/// Recomputes neighbourhoods on `g` and assigns every node argmax of the
/// state layer (ties to the lowest state).
StateGraph state_forward(const Genome& genome, const StateGraph& g);

struct GrowthConfig {
  int steps = 100;
  std::size_t budget = 200;
  std::size_t hard_cap = 0;  // 0 means 4 * budget
  int seed_state = 0;

  std::size_t effective_hard_cap() const { return hard_cap == 0 ? 4 * budget : hard_cap; }
  void validate(int num_states) const;
};

struct GrowthStep {
  int step = 0;
  std::size_t nodes = 0;
  std::size_t removed = 0;
  std::size_t divided = 0;
  std::size_t stasis = 0;
};

struct GrowthTrace {
  std::vector<GrowthStep> steps;
  bool extinct = false;
  bool overgrown = false;

  /// One JSON object per step followed by a final {"extinct", "overgrown"} line.
  std::string to_jsonl() const;
};

struct GrowthResult {
  StateGraph graph;
  GrowthTrace trace;
};

GrowthResult grow(const Genome& genome, const GrowthConfig& cfg);

}  // namespace dgca
