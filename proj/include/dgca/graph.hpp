#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dgca {

using NodeId = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  NodeId id;
  int state;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Directed graph whose nodes carry a discrete state in [0, S-1].
///
/// Nodes are kept in ascending id order. Ids are handed out by a monotone
/// counter and never reused, so removal leaves holes. Edges have set
/// semantics; self-loops are allowed.
class StateGraph {
 public:
  explicit StateGraph(int num_states = 3);

  int num_states() const noexcept { return num_states_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }

  /// Next id add_node() will assign.
  NodeId next_id() const noexcept { return next_id_; }

  NodeId add_node(int state);
  /// Inserts a node with an explicit id. The id must be unused.
  void insert_node(NodeId id, int state);
  /// Removes the node and all incident edges. Returns false if absent.
  bool remove_node(NodeId id);

  /// Returns false if the edge was already present.
  bool add_edge(NodeId src, NodeId dst);
  bool remove_edge(NodeId src, NodeId dst);

  bool has_node(NodeId id) const;
  bool has_edge(NodeId src, NodeId dst) const { return edges_.contains({src, dst}); }

  /// Position of `id` in nodes(), if present.
  std::optional<std::size_t> index_of(NodeId id) const;

  int state(NodeId id) const;
  void set_state(NodeId id, int state);

  /// Drops every node with total degree zero, except ids listed in `keep`.
  std::size_t drop_isolated(const std::set<NodeId>& keep = {});

  friend bool operator==(const StateGraph&, const StateGraph&) = default;

 private:
  std::size_t checked_index(NodeId id) const;
  void check_state(int state) const;

  int num_states_;
  NodeId next_id_ = 0;
  std::vector<Node> nodes_;
  std::set<Edge> edges_;
};

/// Index-based adjacency over StateGraph::nodes() positions.
struct DirectedAdjacency {
  std::vector<std::vector<std::size_t>> in;   // in[i]: sources of edges into i
  std::vector<std::vector<std::size_t>> out;  // out[i]: targets of edges out of i
};

DirectedAdjacency directed_adjacency(const StateGraph& g);

/// Undirected neighbour lists (by node position), self-loops removed,
/// antiparallel edges merged. Lists are sorted.
std::vector<std::vector<std::size_t>> undirected_adjacency(const StateGraph& g);

// ---------------------------------------------------------------------------
// Graph-theoretic measures used for structure classification. All of them
// operate on the undirected view of one weakly connected component.

struct ComponentView {
  std::vector<NodeId> nodes;  // ascending

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Weakly connected components ordered by smallest node id.
std::vector<ComponentView> connected_components(const StateGraph& g);

/// Longest shortest-path distance inside the component (0 for a single node).
int diameter(const ComponentView& c, const StateGraph& g);

/// Shortest-path betweenness over ordered pairs, normalised by (n_c-1)(n_c-2).
/// Empty when n_c < 3.
std::optional<std::map<NodeId, double>> betweenness_normalized(const ComponentView& c,
                                                               const StateGraph& g);

/// Mean shortest-path distance from each node to the rest of its component.
/// Empty when n_c < 2.
std::optional<std::map<NodeId, double>> closeness_reciprocal(const ComponentView& c,
                                                             const StateGraph& g);

/// Gini coefficient of the component's undirected degrees.
double gini_degree(const ComponentView& c, const StateGraph& g);

/// Gini coefficient of an arbitrary nonnegative sample.
double gini(const std::vector<double>& values);

/// Number of edges over n^2 (self-loops included in both counts).
double edge_density(const StateGraph& g);

}  // namespace dgca
