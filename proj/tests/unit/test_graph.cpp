#include <doctest.h>

#include "dgca/graph.hpp"
#include "dgca/graph_io.hpp"
#include "fixtures.hpp"
#include "sweeps.hpp"

using namespace dgca;

TEST_CASE("node ids are monotone and never reused") {
  StateGraph g(3);
  const auto a = g.add_node(0);
  const auto b = g.add_node(2);
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(g.remove_node(a));
  CHECK_FALSE(g.remove_node(a));
  CHECK(g.add_node(1) == 2);
  CHECK(g.next_id() == 3);
  CHECK_THROWS_AS(g.insert_node(b, 0), GraphError);
  CHECK_THROWS_AS(g.add_node(3), GraphError);
  CHECK_THROWS_AS(g.add_edge(b, 99), GraphError);
}

TEST_CASE("removing a node drops its edges") {
  StateGraph g = fixtures::path(3);
  g.add_edge(1, 1);
  CHECK(g.edge_count() == 3);
  g.remove_node(1);
  CHECK(g.edge_count() == 0);
  CHECK(g.drop_isolated() == 2);
  CHECK(g.empty());
}

TEST_CASE("drop_isolated honours the keep set") {
  StateGraph g(3);
  g.add_node(0);
  g.add_node(0);
  CHECK(g.drop_isolated({0}) == 1);
  CHECK(g.has_node(0));
  CHECK_FALSE(g.has_node(1));
}

TEST_CASE("graph json round trip") {
  StateGraph g = fixtures::double_strand();
  g.remove_node(3);
  g.add_edge(5, 5);
  const StateGraph again = graph_from_string(graph_to_string(g));
  CHECK(again == g);
  const auto j = graph_to_json(g);
  CHECK(j.at("S") == 3);
  CHECK(j.at("edges").front() == nlohmann::json::array({0, 1}));
  CHECK_THROWS(graph_from_string(R"({"S": 2, "nodes": [{"id": 0, "state": 2}], "edges": []})"));
  CHECK_THROWS(graph_from_string(R"({"S": 2, "nodes": [{"id": 0, "state": 1}], "edges": [[0, 1]]})"));
}

TEST_CASE("connected components") {
  CHECK(connected_components(StateGraph(3)).empty());
  const auto one = connected_components(fixtures::path(5));
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == 5);

  StateGraph g(3);
  for (int c = 0; c < 2; ++c) {
    const auto a = g.add_node(0), b = g.add_node(0), d = g.add_node(0);
    g.add_edge(a, b);
    g.add_edge(b, d);
    g.add_edge(d, a);
  }
  const auto two = connected_components(g);
  REQUIRE(two.size() == 2);
  CHECK(two[0].nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(two[1].nodes == std::vector<NodeId>{3, 4, 5});
}

TEST_CASE("diameter") {
  StateGraph single(3);
  single.add_node(0);
  CHECK(diameter(connected_components(single)[0], single) == 0);
  const auto p = fixtures::path(6);
  CHECK(diameter(connected_components(p)[0], p) == 5);
  const auto c = fixtures::cycle(8);
  CHECK(diameter(connected_components(c)[0], c) == 4);
}

TEST_CASE("betweenness") {
  const auto p3 = fixtures::path(3);
  const auto b3 = betweenness_normalized(connected_components(p3)[0], p3);
  REQUIRE(b3);
  CHECK(b3->at(1) == doctest::Approx(1.0));
  CHECK(b3->at(0) == 0.0);
  CHECK(b3->at(2) == 0.0);

  const auto c6 = fixtures::cycle(6);
  const auto comp = connected_components(c6)[0];
  const auto bc = betweenness_normalized(comp, c6);
  REQUIRE(bc);
  const auto ref = oracle::betweenness(c6, {0, 1, 2, 3, 4, 5});
  for (NodeId v = 0; v < 6; ++v) {
    CHECK(bc->at(v) == doctest::Approx(bc->at(0)).epsilon(1e-12));
    CHECK(bc->at(v) == doctest::Approx(ref.at(static_cast<std::size_t>(v))).epsilon(1e-12));
  }

  const auto p2 = fixtures::path(2);
  CHECK_FALSE(betweenness_normalized(connected_components(p2)[0], p2));
}

TEST_CASE("closeness reciprocal") {
  const auto p2 = fixtures::path(2);
  const auto c2 = closeness_reciprocal(connected_components(p2)[0], p2);
  REQUIRE(c2);
  CHECK(c2->at(0) == 1.0);
  CHECK(c2->at(1) == 1.0);

  const auto s = fixtures::star(4);
  CHECK(closeness_reciprocal(connected_components(s)[0], s)->at(0) == 1.0);

  const auto p5 = fixtures::path(5);
  CHECK(closeness_reciprocal(connected_components(p5)[0], p5)->at(0) == doctest::Approx(2.5));

  StateGraph single(3);
  single.add_node(1);
  CHECK_FALSE(closeness_reciprocal(connected_components(single)[0], single));
}

TEST_CASE("degree gini") {
  const auto c = fixtures::cycle(7);
  CHECK(gini_degree(connected_components(c)[0], c) == 0.0);
  StateGraph single(3);
  single.add_node(0);
  CHECK(gini_degree(connected_components(single)[0], single) == 0.0);
  const auto s = fixtures::star(3);
  CHECK(gini_degree(connected_components(s)[0], s) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(gini({3, 1, 1, 1}) == doctest::Approx(oracle::gini({3, 1, 1, 1})).epsilon(1e-12));
}

TEST_CASE("self-loops and antiparallel edges collapse in the undirected view") {
  StateGraph g(3);
  g.add_node(0);
  g.add_node(0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(0, 0);
  const auto adj = undirected_adjacency(g);
  CHECK(adj[0] == std::vector<std::size_t>{1});
  CHECK(adj[1] == std::vector<std::size_t>{0});
  CHECK(edge_density(g) == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("graph measures agree with brute-force oracles on small random graphs") {
  const auto t = sweeps::graph_measures(2024, 300);
  INFO(t.first_failure);
  CHECK(t.cases == 300);
  CHECK(t.mismatches == 0);
}
