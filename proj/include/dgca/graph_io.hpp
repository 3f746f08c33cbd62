#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dgca/graph.hpp"

namespace dgca {

/// {"S": int, "nodes": [{"id": int, "state": int}, ...], "edges": [[src, dst], ...]}
/// with edges in lexicographic order.
nlohmann::json graph_to_json(const StateGraph& g);
StateGraph graph_from_json(const nlohmann::json& j);

std::string graph_to_string(const StateGraph& g);
StateGraph graph_from_string(const std::string& text);

void save_graph(const StateGraph& g, const std::filesystem::path& path);
StateGraph load_graph(const std::filesystem::path& path);

}  // namespace dgca
