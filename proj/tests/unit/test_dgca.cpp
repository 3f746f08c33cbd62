#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dgca/dgca.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dgca;

namespace {

Genome biased(int num_states, std::initializer_list<std::size_t> outputs) {
  Genome g = Genome::zeros(num_states);
  for (std::size_t o : outputs) g.mlp[g.output_bias_offset() + o] = 10.0;
  return g;
}

std::map<NodeId, ActionDecision> decide(const Genome& genome, const StateGraph& g) {
  std::map<NodeId, ActionDecision> out;
  for (const Node& n : g.nodes()) {
    out[n.id] = action_forward(genome, aggregate_neighborhood(g, n.id).values);
  }
  return out;
}

// Step output re-expressed in terms of where each node came from:
// (original id, is_child) labels, so runs on relabelled inputs compare directly.
using Label = std::pair<NodeId, bool>;
struct Signature {
  std::set<std::pair<Label, int>> nodes;
  std::set<std::pair<Label, Label>> edges;
  bool operator==(const Signature&) const = default;
};

Signature signature(const StateGraph& before, const StateGraph& after,
                    const std::map<NodeId, ActionDecision>& decisions,
                    const std::map<NodeId, NodeId>& to_original) {
  std::vector<NodeId> dividing;
  for (const Node& n : before.nodes()) {
    if (decisions.at(n.id).action == Action::Divide) dividing.push_back(n.id);
  }
  auto label = [&](NodeId id) -> Label {
    if (id < before.next_id()) return {to_original.at(id), false};
    return {to_original.at(dividing.at(static_cast<std::size_t>(id - before.next_id()))), true};
  };
  Signature s;
  for (const Node& n : after.nodes()) s.nodes.insert({label(n.id), n.state});
  for (const auto& [a, b] : after.edges()) s.edges.insert({label(a), label(b)});
  return s;
}

StateGraph step(const Genome& genome, const StateGraph& g, std::map<NodeId, ActionDecision>& decisions) {
  decisions = decide(genome, g);
  StateGraph next = restructure(g, decisions);
  return next.empty() ? next : state_forward(genome, next);
}

}  // namespace

TEST_CASE("genome layout and validation") {
  const Genome z = Genome::zeros(3);
  CHECK(z.mlp.size() == 64 * 10 + 11 * 64 + 11);
  CHECK(z.slp.size() == 3 * 10);
  CHECK(neighborhood_width(3) == 10);
  Genome bad = z;
  bad.slp.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = z;
  bad.mlp[5] = std::nan("");
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Rng rng(4);
  const Genome r = Genome::random(3, 1.0, rng);
  CHECK(genome_from_json(genome_to_json(r)) == r);
}

TEST_CASE("neighbourhood aggregation") {
  StateGraph g(3);
  const auto seed = g.add_node(0);
  CHECK(aggregate_neighborhood(g, seed).values ==
        std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0, 0, 1});

  const auto other = g.add_node(1);
  g.add_edge(other, seed);
  g.add_edge(seed, seed);
  const auto v = aggregate_neighborhood(g, seed);
  CHECK(std::vector<double>(v.own_state().begin(), v.own_state().end()) == std::vector<double>{1, 0, 0});
  CHECK(std::vector<double>(v.in_counts().begin(), v.in_counts().end()) == std::vector<double>{1, 1, 0});
  CHECK(std::vector<double>(v.out_counts().begin(), v.out_counts().end()) == std::vector<double>{1, 0, 0});
  CHECK(v.bias() == 1.0);
  CHECK_THROWS(aggregate_neighborhood(g, 42));

  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const StateGraph r = oracle::random_graph(rng, 1 + rng.index(8), 0.3);
    const auto all = aggregate_all(r);
    for (std::size_t i = 0; i < r.node_count(); ++i) {
      CHECK(all[i].values == oracle::neighborhood(r, r.nodes()[i].id));
    }
  }
}

TEST_CASE("action network") {
  const Genome z = Genome::zeros(3);
  const std::vector<double> v{0, 1, 0, 2, 0, 1, 0, 0, 3, 1};
  CHECK(action_forward(z, v) == ActionDecision{Action::Remove, FromExisting::None, ToExisting::None, ToNew::None});
  CHECK(action_forward(biased(3, {2}), v).action == Action::Stasis);

  Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const Genome genome = Genome::random(3, 1.0, rng);
    std::vector<double> x(10);
    for (std::size_t i = 0; i < 3; ++i) x[i] = i == rng.index(3) ? 1.0 : 0.0;
    for (std::size_t i = 3; i < 9; ++i) x[i] = static_cast<double>(rng.index(5));
    x[9] = 1.0;
    CHECK(action_forward(genome, x) == oracle::action(genome, x));
  }
}

TEST_CASE("state network") {
  const StateGraph g = fixtures::cycle(5);
  const StateGraph zero = state_forward(Genome::zeros(3), g);
  for (const Node& n : zero.nodes()) CHECK(n.state == 0);

  Genome to_two = Genome::zeros(3);
  to_two.slp[2 * 10 + 9] = 5.0;
  const StateGraph two = state_forward(to_two, g);
  for (const Node& n : two.nodes()) CHECK(n.state == 2);

  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const Genome genome = Genome::random(3, 1.0, rng);
    const StateGraph r = oracle::random_graph(rng, 1 + rng.index(8), 0.3);
    const StateGraph out = state_forward(genome, r);
    CHECK(out.edges() == r.edges());
    for (const Node& n : r.nodes()) {
      CHECK(out.state(n.id) == oracle::next_state(genome, oracle::neighborhood(r, n.id)));
    }
  }
}

TEST_CASE("restructure: single seed division") {
  StateGraph g(3);
  g.add_node(0);
  ActionDecision d{Action::Divide, FromExisting::ParentToNew, ToExisting::None, ToNew::None};
  const StateGraph two = restructure(g, {{0, d}});
  CHECK(two.node_count() == 2);
  CHECK(two.edges() == std::set<Edge>{{0, 1}});
  CHECK(two.state(1) == 0);

  d.from_existing = FromExisting::None;
  CHECK(restructure(g, {{0, d}}).empty());

  d.action = Action::Stasis;
  CHECK(restructure(g, {{0, d}}) == g);
  CHECK_THROWS(restructure(g, {}));
}

TEST_CASE("restructure: reconstructed pipeline figure") {
  // Two states, white = 0 and black = 1. X and Y are white, Z is black.
  StateGraph g(2);
  const NodeId x = g.add_node(0), y = g.add_node(0), z = g.add_node(1);
  g.add_edge(z, x);
  g.add_edge(y, x);
  g.add_edge(x, y);
  const auto before = aggregate_neighborhood(g, x);
  CHECK(before.in_counts()[0] == 1);
  CHECK(before.in_counts()[1] == 1);

  std::map<NodeId, ActionDecision> decisions{
      {x, {Action::Divide, FromExisting::None, ToExisting::NewToParent, ToNew::None}},
      {y, {Action::Divide, FromExisting::ParentToNew, ToExisting::None, ToNew::None}},
      {z, {Action::Remove, FromExisting::None, ToExisting::None, ToNew::None}}};
  const StateGraph after = restructure(g, decisions);

  // X' = 3 and Y' = 4, created in parent-id order; both inherit white.
  CHECK(after.nodes() == std::vector<Node>{{0, 0}, {1, 0}, {3, 0}, {4, 0}});
  CHECK(after.edges() == std::set<Edge>{{0, 1}, {1, 0}, {1, 4}, {3, 0}});
  const auto recomputed = aggregate_neighborhood(after, x);
  CHECK(recomputed.in_counts()[1] == 0);
  CHECK(recomputed.in_counts()[0] == before.in_counts()[0] + 1);
}

TEST_CASE("restructure: edge copies read the pre-step graph") {
  StateGraph g(3);
  const NodeId a = g.add_node(0), b = g.add_node(1);
  g.add_edge(a, b);
  g.add_edge(b, a);
  const ActionDecision copy{Action::Divide, FromExisting::CopyInEdges, ToExisting::CopyOutEdges, ToNew::SelfLoop};
  const StateGraph out = restructure(g, {{a, copy}, {b, copy}});
  // a' copies b->a and a->b; b' copies a->b and b->a. Children never see each other.
  CHECK(out.edges() == std::set<Edge>{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 2}, {0, 3}, {3, 0}, {3, 3}});
}

TEST_CASE("restructure properties on random graphs") {
  Rng rng(77);
  for (int k = 0; k < 200; ++k) {
    const StateGraph g = oracle::random_graph(rng, 1 + rng.index(8), rng.uniform(0.0, 0.5));
    const Genome genome = Genome::random(3, 1.0, rng);
    std::map<NodeId, ActionDecision> decisions;
    const StateGraph out = step(genome, g, decisions);
    CHECK(out.node_count() <= 2 * g.node_count());
    const auto adj = directed_adjacency(out);
    for (std::size_t i = 0; i < out.node_count(); ++i) {
      const NodeId id = out.nodes()[i].id;
      CHECK(out.nodes()[i].state >= 0);
      CHECK(out.nodes()[i].state < 3);
      if (adj.in[i].empty() && adj.out[i].empty()) {
        // Only a node that was already alone and stayed put survives isolated.
        REQUIRE(g.has_node(id));
        CHECK(decisions.at(id).action == Action::Stasis);
        const auto pre = directed_adjacency(g);
        const std::size_t at = *g.index_of(id);
        CHECK(pre.in[at].empty());
        CHECK(pre.out[at].empty());
      }
    }
  }
}

TEST_CASE("a step commutes with relabelling node ids") {
  Rng rng(78);
  for (int k = 0; k < 200; ++k) {
    const StateGraph g = oracle::random_graph(rng, 1 + rng.index(8), rng.uniform(0.1, 0.5));
    const Genome genome = Genome::random(3, 1.0, rng);

    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), NodeId{10});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    StateGraph h(3);
    std::map<NodeId, NodeId> forward, g_identity, h_to_g;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const Node& n = g.nodes()[i];
      forward[n.id] = perm[i];
      g_identity[n.id] = n.id;
      h_to_g[perm[i]] = n.id;
      h.insert_node(perm[i], n.state);
    }
    for (const auto& [a, b] : g.edges()) h.add_edge(forward[a], forward[b]);

    std::map<NodeId, ActionDecision> dg, dh;
    const StateGraph out_g = step(genome, g, dg);
    const StateGraph out_h = step(genome, h, dh);
    CHECK(signature(g, out_g, dg, g_identity) == signature(h, out_h, dh, h_to_g));
  }
}

TEST_CASE("growth from a single seed") {
  GrowthConfig cfg;
  const auto still = grow(biased(3, {2}), cfg);
  CHECK(still.trace.steps.size() == 100);
  REQUIRE(still.graph.node_count() == 1);
  CHECK(still.graph.nodes()[0] == Node{0, 0});

  const auto dead = grow(Genome::zeros(3), cfg);
  CHECK(dead.trace.extinct);
  CHECK(dead.trace.steps.size() == 1);
  CHECK(dead.graph.empty());

  // Divide with parent->new: every node splits each step.
  const auto boom = grow(biased(3, {1, 4}), cfg);
  CHECK(boom.trace.overgrown);
  for (const auto& s : boom.trace.steps) CHECK(s.nodes == (std::size_t{1} << s.step));
  CHECK(boom.trace.steps.back().nodes > cfg.effective_hard_cap());
  CHECK(boom.trace.steps.size() == 10);

  cfg.seed_state = 3;
  CHECK_THROWS(grow(Genome::zeros(3), cfg));
}

TEST_CASE("growth is deterministic and the trace serialises") {
  Rng rng(5);
  const Genome genome = Genome::random(3, 1.0, rng);
  GrowthConfig cfg;
  cfg.steps = 20;
  const auto a = grow(genome, cfg);
  const auto b = grow(genome, cfg);
  CHECK(a.graph == b.graph);
  const std::string jsonl = a.trace.to_jsonl();
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == static_cast<long>(a.trace.steps.size() + 1));
}
