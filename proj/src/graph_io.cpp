#include "dgca/graph_io.hpp"

#include <fstream>

namespace dgca {

nlohmann::json graph_to_json(const StateGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : g.nodes()) nodes.push_back({{"id", n.id}, {"state", n.state}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [src, dst] : g.edges()) edges.push_back({src, dst});
  return {{"S", g.num_states()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

StateGraph graph_from_json(const nlohmann::json& j) {
  try {
    StateGraph g(j.at("S").get<int>());
    for (const auto& n : j.at("nodes")) {
      g.insert_node(n.at("id").get<NodeId>(), n.at("state").get<int>());
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw GraphError("edge must be a [src, dst] pair");
      g.add_edge(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw GraphError(std::string("malformed graph JSON: ") + ex.what());
  }
}

std::string graph_to_string(const StateGraph& g) { return graph_to_json(g).dump(); }

StateGraph graph_from_string(const std::string& text) {
  return graph_from_json(nlohmann::json::parse(text));
}

void save_graph(const StateGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write " + path.string());
  out << graph_to_json(g).dump() << '\n';
}

StateGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot read " + path.string());
  return graph_from_json(nlohmann::json::parse(in));
}

}  // namespace dgca
