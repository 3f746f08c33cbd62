#include "dgca/graph.hpp"

#include <algorithm>

namespace dgca {

StateGraph::StateGraph(int num_states) : num_states_(num_states) {
  if (num_states < 1) throw GraphError("number of states must be positive");
}

void StateGraph::check_state(int state) const {
  if (state < 0 || state >= num_states_) {
    throw GraphError("node state " + std::to_string(state) + " outside [0, " +
                     std::to_string(num_states_ - 1) + "]");
  }
}

NodeId StateGraph::add_node(int state) {
  check_state(state);
  const NodeId id = next_id_++;
  nodes_.push_back({id, state});
  return id;
}

void StateGraph::insert_node(NodeId id, int state) {
  check_state(state);
  if (id < 0) throw GraphError("node ids must be nonnegative");
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it != nodes_.end() && it->id == id) {
    throw GraphError("duplicate node id " + std::to_string(id));
  }
  nodes_.insert(it, {id, state});
  next_id_ = std::max(next_id_, id + 1);
}

bool StateGraph::remove_node(NodeId id) {
  auto idx = index_of(id);
  if (!idx) return false;
  nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(*idx));
  std::erase_if(edges_, [id](const Edge& e) { return e.first == id || e.second == id; });
  return true;
}

bool StateGraph::add_edge(NodeId src, NodeId dst) {
  if (!has_node(src) || !has_node(dst)) {
    throw GraphError("edge (" + std::to_string(src) + ", " + std::to_string(dst) +
                     ") references a missing node");
  }
  return edges_.insert({src, dst}).second;
}

bool StateGraph::remove_edge(NodeId src, NodeId dst) { return edges_.erase({src, dst}) > 0; }

bool StateGraph::has_node(NodeId id) const { return index_of(id).has_value(); }

std::optional<std::size_t> StateGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, NodeId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t StateGraph::checked_index(NodeId id) const {
  auto idx = index_of(id);
  if (!idx) throw GraphError("unknown node id " + std::to_string(id));
  return *idx;
}

int StateGraph::state(NodeId id) const { return nodes_[checked_index(id)].state; }

void StateGraph::set_state(NodeId id, int state) {
  check_state(state);
  nodes_[checked_index(id)].state = state;
}

std::size_t StateGraph::drop_isolated(const std::set<NodeId>& keep) {
  std::vector<char> touched(nodes_.size(), 0);
  for (const auto& [src, dst] : edges_) {
    touched[*index_of(src)] = 1;
    touched[*index_of(dst)] = 1;
  }
  std::vector<Node> kept;
  kept.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (touched[i] || keep.contains(nodes_[i].id)) kept.push_back(nodes_[i]);
  }
  const std::size_t dropped = nodes_.size() - kept.size();
  nodes_ = std::move(kept);
  return dropped;
}

DirectedAdjacency directed_adjacency(const StateGraph& g) {
  DirectedAdjacency adj;
  adj.in.resize(g.node_count());
  adj.out.resize(g.node_count());
  for (const auto& [src, dst] : g.edges()) {
    const std::size_t s = *g.index_of(src);
    const std::size_t d = *g.index_of(dst);
    adj.out[s].push_back(d);
    adj.in[d].push_back(s);
  }
  return adj;
}

std::vector<std::vector<std::size_t>> undirected_adjacency(const StateGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.node_count());
  for (const auto& [src, dst] : g.edges()) {
    if (src == dst) continue;
    const std::size_t s = *g.index_of(src);
    const std::size_t d = *g.index_of(dst);
    adj[s].push_back(d);
    adj[d].push_back(s);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

double edge_density(const StateGraph& g) {
  if (g.empty()) return 0.0;
  const double n = static_cast<double>(g.node_count());
  return static_cast<double>(g.edge_count()) / (n * n);
}

}  // namespace dgca
