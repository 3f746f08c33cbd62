#pragma once

#include <vector>

#include "dgca/graph.hpp"

namespace fixtures {

inline dgca::StateGraph path(std::size_t n, int num_states = 3) {
  dgca::StateGraph g(num_states);
  for (std::size_t i = 0; i < n; ++i) g.add_node(0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.add_edge(static_cast<dgca::NodeId>(i), static_cast<dgca::NodeId>(i + 1));
  }
  return g;
}

inline dgca::StateGraph cycle(std::size_t n, int num_states = 3) {
  dgca::StateGraph g = path(n, num_states);
  g.add_edge(static_cast<dgca::NodeId>(n - 1), 0);
  return g;
}

inline dgca::StateGraph star(std::size_t leaves) {
  dgca::StateGraph g(3);
  const auto hub = g.add_node(0);
  for (std::size_t i = 0; i < leaves; ++i) g.add_edge(hub, g.add_node(1));
  return g;
}

inline dgca::StateGraph complete(std::size_t n) {
  dgca::StateGraph g(3);
  for (std::size_t i = 0; i < n; ++i) g.add_node(static_cast<int>(i % 3));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) g.add_edge(static_cast<dgca::NodeId>(i), static_cast<dgca::NodeId>(j));
    }
  }
  return g;
}

inline dgca::StateGraph disjoint_paths(std::size_t count, std::size_t len) {
  dgca::StateGraph g(3);
  for (std::size_t c = 0; c < count; ++c) {
    dgca::NodeId prev = g.add_node(0);
    for (std::size_t i = 1; i < len; ++i) {
      const dgca::NodeId next = g.add_node(0);
      g.add_edge(prev, next);
      prev = next;
    }
  }
  return g;
}

// Two parallel 10-node strands joined by rungs at positions 0, 4, 8 and the
// terminal position 9.
inline dgca::StateGraph double_strand() {
  dgca::StateGraph g(3);
  for (int i = 0; i < 20; ++i) g.add_node(i < 10 ? 0 : 1);
  for (int i = 0; i < 9; ++i) {
    g.add_edge(i, i + 1);
    g.add_edge(10 + i, 10 + i + 1);
  }
  for (int r : {0, 4, 8, 9}) g.add_edge(r, 10 + r);
  return g;
}

}  // namespace fixtures
