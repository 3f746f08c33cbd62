#include "dgca/dgca.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace dgca {
namespace {

// Lowest index wins ties.
std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::size_t Genome::mlp_size(int num_states) {
  const std::size_t d = neighborhood_width(num_states);
  return kHiddenUnits * d + kActionOutputs * kHiddenUnits + kActionOutputs;
}

std::size_t Genome::slp_size(int num_states) {
  return static_cast<std::size_t>(num_states) * neighborhood_width(num_states);
}

Genome Genome::zeros(int num_states) {
  if (num_states < 1) throw std::invalid_argument("number of states must be positive");
  return {num_states, std::vector<double>(mlp_size(num_states), 0.0),
          std::vector<double>(slp_size(num_states), 0.0)};
}

Genome Genome::random(int num_states, double scale, Rng& rng) {
  Genome g = zeros(num_states);
  for (double& w : g.mlp) w = rng.uniform(-scale, scale);
  for (double& w : g.slp) w = rng.uniform(-scale, scale);
  return g;
}

void Genome::validate() const {
  if (num_states < 1) throw std::invalid_argument("genome: number of states must be positive");
  if (mlp.size() != mlp_size(num_states)) {
    throw std::invalid_argument("genome: action chromosome has " + std::to_string(mlp.size()) +
                                " weights, expected " + std::to_string(mlp_size(num_states)));
  }
  if (slp.size() != slp_size(num_states)) {
    throw std::invalid_argument("genome: state chromosome has " + std::to_string(slp.size()) +
                                " weights, expected " + std::to_string(slp_size(num_states)));
  }
  auto finite = [](double w) { return std::isfinite(w); };
  if (!std::all_of(mlp.begin(), mlp.end(), finite) ||
      !std::all_of(slp.begin(), slp.end(), finite)) {
    throw std::invalid_argument("genome: non-finite weight");
  }
}

double Genome::hidden_weight(std::size_t unit, std::size_t input) const {
  return mlp[unit * neighborhood_width(num_states) + input];
}

std::size_t Genome::output_weight_offset() const {
  return kHiddenUnits * neighborhood_width(num_states);
}

std::size_t Genome::output_bias_offset() const {
  return output_weight_offset() + kActionOutputs * kHiddenUnits;
}

double Genome::output_weight(std::size_t output, std::size_t unit) const {
  return mlp[output_weight_offset() + output * kHiddenUnits + unit];
}

double Genome::output_bias(std::size_t output) const { return mlp[output_bias_offset() + output]; }

nlohmann::json genome_to_json(const Genome& genome) {
  return {{"num_states", genome.num_states},
          {"input_dim", neighborhood_width(genome.num_states)},
          {"hidden", kHiddenUnits},
          {"action_dim", kActionOutputs},
          {"mlp", genome.mlp},
          {"slp", genome.slp}};
}

Genome genome_from_json(const nlohmann::json& j) {
  Genome g;
  g.num_states = j.at("num_states").get<int>();
  if (j.contains("hidden") && j.at("hidden").get<std::size_t>() != kHiddenUnits) {
    throw std::invalid_argument("genome: unsupported hidden width");
  }
  g.mlp = j.at("mlp").get<std::vector<double>>();
  g.slp = j.at("slp").get<std::vector<double>>();
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------

std::vector<NeighborhoodVector> aggregate_all(const StateGraph& g) {
  const int s = g.num_states();
  const std::size_t width = neighborhood_width(s);
  const auto& nodes = g.nodes();
  std::vector<NeighborhoodVector> result(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    result[i].num_states = s;
    result[i].values.assign(width, 0.0);
    result[i].values[static_cast<std::size_t>(nodes[i].state)] = 1.0;
    result[i].values[width - 1] = 1.0;
  }
  const std::size_t in_offset = static_cast<std::size_t>(s);
  const std::size_t out_offset = 2 * static_cast<std::size_t>(s);
  for (const auto& [src, dst] : g.edges()) {
    const std::size_t si = *g.index_of(src);
    const std::size_t di = *g.index_of(dst);
    result[di].values[in_offset + static_cast<std::size_t>(nodes[si].state)] += 1.0;
    result[si].values[out_offset + static_cast<std::size_t>(nodes[di].state)] += 1.0;
  }
  return result;
}

NeighborhoodVector aggregate_neighborhood(const StateGraph& g, NodeId node) {
  const auto idx = g.index_of(node);
  if (!idx) throw GraphError("aggregate_neighborhood: unknown node id " + std::to_string(node));
  return aggregate_all(g)[*idx];
}

ActionDecision action_forward(const Genome& genome, std::span<const double> input) {
  const std::size_t d = neighborhood_width(genome.num_states);
  if (input.size() != d) throw std::invalid_argument("action_forward: input width mismatch");

  std::array<double, kHiddenUnits> hidden{};
  const double* w1 = genome.mlp.data();
  for (std::size_t u = 0; u < kHiddenUnits; ++u) {
    double acc = 0.0;
    const double* row = w1 + u * d;
    for (std::size_t i = 0; i < d; ++i) acc += row[i] * input[i];
    hidden[u] = std::tanh(acc);
  }

  std::array<double, kActionOutputs> logits{};
  const double* w2 = genome.mlp.data() + genome.output_weight_offset();
  const double* b2 = genome.mlp.data() + genome.output_bias_offset();
  for (std::size_t o = 0; o < kActionOutputs; ++o) {
    double acc = b2[o];
    const double* row = w2 + o * kHiddenUnits;
    for (std::size_t u = 0; u < kHiddenUnits; ++u) acc += row[u] * hidden[u];
    logits[o] = acc;
  }

  const std::span<const double> all(logits);
  std::size_t offset = 0;
  auto pick = [&](std::size_t count) {
    const std::size_t choice = argmax(all.subspan(offset, count));
    offset += count;
    return choice;
  };
  ActionDecision decision;
  decision.action = static_cast<Action>(pick(kActionCount));
  decision.from_existing = static_cast<FromExisting>(pick(kFromExistingOptions));
  decision.to_existing = static_cast<ToExisting>(pick(kToExistingOptions));
  decision.to_new = static_cast<ToNew>(pick(kToNewOptions));
  return decision;
}

StateGraph restructure(const StateGraph& g, const std::map<NodeId, ActionDecision>& decisions) {
  const auto& nodes = g.nodes();
  const DirectedAdjacency pre = directed_adjacency(g);
  StateGraph next = g;

  std::vector<NodeId> removed;
  // A node that had no edges before the step and stays in stasis did not
  // "emerge" isolated from this step; in practice this is only the lone seed.
  std::set<NodeId> untouched_isolated;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId parent = nodes[i].id;
    auto it = decisions.find(parent);
    if (it == decisions.end()) {
      throw std::invalid_argument("restructure: no decision for node " + std::to_string(parent));
    }
    const ActionDecision& d = it->second;
    if (d.action == Action::Remove) {
      removed.push_back(parent);
      continue;
    }
    if (d.action == Action::Stasis) {
      if (pre.in[i].empty() && pre.out[i].empty()) untouched_isolated.insert(parent);
      continue;
    }

    const NodeId child = next.add_node(nodes[i].state);
    switch (d.from_existing) {
      case FromExisting::None:
        break;
      case FromExisting::ParentToNew:
        next.add_edge(parent, child);
        break;
      case FromExisting::CopyInEdges:
        for (std::size_t src : pre.in[i]) next.add_edge(nodes[src].id, child);
        break;
    }
    switch (d.to_existing) {
      case ToExisting::None:
        break;
      case ToExisting::NewToParent:
        next.add_edge(child, parent);
        break;
      case ToExisting::CopyOutEdges:
        for (std::size_t dst : pre.out[i]) next.add_edge(child, nodes[dst].id);
        break;
    }
    if (d.to_new == ToNew::SelfLoop) next.add_edge(child, child);
  }

  for (NodeId id : removed) next.remove_node(id);
  next.drop_isolated(untouched_isolated);
  return next;
}

StateGraph state_forward(const Genome& genome, const StateGraph& g) {
  const std::size_t s = static_cast<std::size_t>(genome.num_states);
  if (g.num_states() != genome.num_states) {
    throw std::invalid_argument("state_forward: genome and graph disagree on state count");
  }
  const std::size_t d = neighborhood_width(genome.num_states);
  const auto inputs = aggregate_all(g);
  StateGraph next = g;
  std::vector<double> logits(s);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < s; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += genome.slp[k * d + j] * inputs[i].values[j];
      logits[k] = acc;
    }
    next.set_state(g.nodes()[i].id, static_cast<int>(argmax(logits)));
  }
  return next;
}

void GrowthConfig::validate(int num_states) const {
  if (steps < 1) throw std::invalid_argument("growth: steps must be >= 1");
  if (budget == 0) throw std::invalid_argument("growth: budget must be positive");
  if (effective_hard_cap() < budget) {
    throw std::invalid_argument("growth: hard cap must be at least the budget");
  }
  if (seed_state < 0 || seed_state >= num_states) {
    throw std::invalid_argument("growth: seed state out of range");
  }
}

std::string GrowthTrace::to_jsonl() const {
  std::ostringstream out;
  for (const GrowthStep& s : steps) {
    nlohmann::json j = {{"step", s.step},       {"nodes", s.nodes},     {"removed", s.removed},
                        {"divided", s.divided}, {"stasis", s.stasis}};
    out << j.dump() << '\n';
  }
  out << nlohmann::json{{"extinct", extinct}, {"overgrown", overgrown}}.dump() << '\n';
  return out.str();
}

GrowthResult grow(const Genome& genome, const GrowthConfig& cfg) {
  genome.validate();
  cfg.validate(genome.num_states);
  const std::size_t cap = cfg.effective_hard_cap();

  GrowthResult result{StateGraph(genome.num_states), {}};
  StateGraph& g = result.graph;
  g.add_node(cfg.seed_state);

  for (int step = 1; step <= cfg.steps; ++step) {
    const auto inputs = aggregate_all(g);
    std::map<NodeId, ActionDecision> decisions;
    GrowthStep record;
    record.step = step;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const ActionDecision d = action_forward(genome, inputs[i].values);
      switch (d.action) {
        case Action::Remove: ++record.removed; break;
        case Action::Divide: ++record.divided; break;
        case Action::Stasis: ++record.stasis; break;
      }
      decisions.emplace_hint(decisions.end(), g.nodes()[i].id, d);
    }

    g = restructure(g, decisions);
    if (!g.empty()) g = state_forward(genome, g);
    record.nodes = g.node_count();
    result.trace.steps.push_back(record);

    if (g.empty()) {
      result.trace.extinct = true;
      break;
    }
    if (g.node_count() > cap) {
      result.trace.overgrown = true;
      break;
    }
  }
  return result;
}

}  // namespace dgca
