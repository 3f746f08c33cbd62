#include <doctest.h>

#include "dgca/classify.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dgca;

namespace {

// The three written conditions evaluated with the oracle measures.
StructureClass reference_class(const StateGraph& g) {
  const auto comps = oracle::components(g);
  const auto d = oracle::distances(g);
  bool linear = true;
  for (const auto& c : comps) linear &= oracle::diameter(c, d) == static_cast<int>(c.size()) - 1;
  if (linear) return StructureClass::Linear;
  for (const auto& c : comps) {
    if (c.size() < 3) return StructureClass::Other;
    double bc = 0.0, cl = 0.0;
    for (const auto& [v, x] : oracle::betweenness(g, c)) bc += x;
    for (const auto& [v, x] : oracle::closeness_reciprocal(g, c)) cl += x;
    const double n = static_cast<double>(c.size());
    if (!(bc / n > 0.01 && cl / n > 0.07 * n && oracle::gini(oracle::degrees(g, c)) < 0.1)) {
      return StructureClass::Other;
    }
  }
  return StructureClass::LooselyStranded;
}

}  // namespace

TEST_CASE("classifier fixtures") {
  CHECK(classify_structure(fixtures::path(12)).structure == StructureClass::Linear);
  CHECK(classify_structure(fixtures::disjoint_paths(2, 6)).structure == StructureClass::Linear);
  CHECK(classify_structure(fixtures::star(8)).structure == StructureClass::Other);
  CHECK(classify_structure(fixtures::complete(5)).structure == StructureClass::Other);
  CHECK(classify_structure(fixtures::double_strand()).structure == StructureClass::LooselyStranded);
  CHECK_THROWS_AS(classify_structure(StateGraph(3)), GraphError);
}

TEST_CASE("nine-node star diagnostics") {
  const auto c = classify_structure(fixtures::star(8));
  REQUIRE(c.components.size() == 1);
  const auto& d = c.components[0];
  CHECK(d.gini == doctest::Approx(oracle::gini({8, 1, 1, 1, 1, 1, 1, 1, 1})).epsilon(1e-12));
  CHECK(d.gini >= 0.1);
  CHECK_FALSE(d.linear);
  CHECK_FALSE(d.loosely_stranded);
}

TEST_CASE("double strand diagnostics clear every threshold") {
  const auto c = classify_structure(fixtures::double_strand());
  REQUIRE(c.components.size() == 1);
  const auto& d = c.components[0];
  CHECK(d.size == 20);
  REQUIRE(d.mean_betweenness);
  REQUIRE(d.mean_closeness_reciprocal);
  CHECK(*d.mean_betweenness > 0.01);
  CHECK(*d.mean_closeness_reciprocal > 0.07 * 20);
  CHECK(d.gini < 0.1);
  const auto j = c.to_json();
  CHECK(j.at("class") == "LooselyStranded");
  CHECK(j.at("components").size() == 1);
}

TEST_CASE("paths, complete graphs, direction and self-loops") {
  for (std::size_t n = 2; n <= 15; ++n) {
    CHECK(classify_structure(fixtures::path(n)).structure == StructureClass::Linear);
  }
  for (std::size_t m = 4; m <= 16; ++m) {
    CHECK(classify_structure(fixtures::complete(m)).structure == StructureClass::Other);
  }
  StateGraph g = fixtures::path(6);
  g.remove_edge(2, 3);
  g.add_edge(3, 2);
  g.add_edge(4, 4);
  CHECK(classify_structure(g).structure == StructureClass::Linear);
}

TEST_CASE("classifier agrees with the written conditions on small graphs") {
  Rng rng(606);
  for (int k = 0; k < 400; ++k) {
    const StateGraph g = oracle::random_graph(rng, 1 + rng.index(7), rng.uniform(0.05, 0.5));
    CHECK(classify_structure(g).structure == reference_class(g));
  }
  // Ladders are the structures most likely to land in the middle class.
  for (int len = 3; len <= 12; ++len) {
    for (int gap = 1; gap <= 5; ++gap) {
      StateGraph g(3);
      for (int i = 0; i < 2 * len; ++i) g.add_node(0);
      for (int i = 0; i + 1 < len; ++i) {
        g.add_edge(i, i + 1);
        g.add_edge(len + i, len + i + 1);
      }
      for (int r = 0; r < len; r += gap) g.add_edge(r, len + r);
      CHECK(classify_structure(g).structure == reference_class(g));
    }
  }
}

TEST_CASE("classification ignores node labels") {
  Rng rng(607);
  for (int k = 0; k < 100; ++k) {
    const StateGraph g = oracle::random_graph(rng, 2 + rng.index(7), 0.3);
    StateGraph h(3);
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < g.node_count(); ++i) ids.push_back(static_cast<NodeId>(100 - 7 * i));
    std::map<NodeId, NodeId> to;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      to[g.nodes()[i].id] = ids[i];
      h.insert_node(ids[i], g.nodes()[i].state);
    }
    for (const auto& [a, b] : g.edges()) h.add_edge(to[a], to[b]);
    CHECK(classify_structure(g).structure == classify_structure(h).structure);
  }
}
