#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dgca/graph.hpp"

namespace dgca {

enum class StructureClass { Linear, LooselyStranded, Other };

std::string_view to_string(StructureClass c);

/// Thresholds of the structural taxonomy.
struct StructureThresholds {
  double min_mean_betweenness = 0.01;
  double min_closeness_fraction = 0.07;  // mean distance must exceed this * n_c
  double max_gini = 0.1;
};

struct ComponentDiagnostics {
  std::size_t size = 0;
  int diameter = 0;
  std::optional<double> mean_betweenness;           // empty when n_c < 3
  std::optional<double> mean_closeness_reciprocal;  // empty when n_c < 2
  double gini = 0.0;
  bool linear = false;
  bool loosely_stranded = false;
};

struct Classification {
  StructureClass structure = StructureClass::Other;
  std::vector<ComponentDiagnostics> components;

  nlohmann::json to_json() const;
};

/// Linear if every component is an unbranched chain (diameter n_c - 1);
/// otherwise LooselyStranded if every component clears the betweenness,
/// closeness and degree-Gini thresholds on average; otherwise Other.
/// Edge direction and self-loops are ignored. Throws GraphError on an empty graph.
Classification classify_structure(const StateGraph& g, const StructureThresholds& t = {});

}  // namespace dgca
