#include "dgca/classify.hpp"

#include <algorithm>

namespace dgca {
namespace {

double mean_value(const std::map<NodeId, double>& m) {
  double total = 0.0;
  for (const auto& [id, v] : m) total += v;
  return total / static_cast<double>(m.size());
}

}  // namespace

std::string_view to_string(StructureClass c) {
  switch (c) {
    case StructureClass::Linear: return "Linear";
    case StructureClass::LooselyStranded: return "LooselyStranded";
    case StructureClass::Other: return "Other";
  }
  return "Unknown";
}

nlohmann::json Classification::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) {
    comps.push_back({{"size", c.size},
                     {"diameter", c.diameter},
                     {"mean_betweenness", c.mean_betweenness ? nlohmann::json(*c.mean_betweenness)
                                                             : nlohmann::json(nullptr)},
                     {"mean_closeness_reciprocal",
                      c.mean_closeness_reciprocal ? nlohmann::json(*c.mean_closeness_reciprocal)
                                                  : nlohmann::json(nullptr)},
                     {"gini", c.gini},
                     {"linear", c.linear},
                     {"loosely_stranded", c.loosely_stranded}});
  }
  return {{"class", to_string(structure)}, {"components", std::move(comps)}};
}

Classification classify_structure(const StateGraph& g, const StructureThresholds& t) {
  if (g.empty()) throw GraphError("classify_structure: empty graph");
  Classification out;
  for (const ComponentView& comp : connected_components(g)) {
    ComponentDiagnostics d;
    d.size = comp.size();
    d.diameter = diameter(comp, g);
    d.linear = d.diameter == static_cast<int>(d.size) - 1;
    if (auto b = betweenness_normalized(comp, g)) d.mean_betweenness = mean_value(*b);
    if (auto c = closeness_reciprocal(comp, g)) d.mean_closeness_reciprocal = mean_value(*c);
    d.gini = gini_degree(comp, g);
    // Components too small for betweenness fail the stranded test.
    d.loosely_stranded =
        d.mean_betweenness && d.mean_closeness_reciprocal &&
        *d.mean_betweenness > t.min_mean_betweenness &&
        *d.mean_closeness_reciprocal > t.min_closeness_fraction * static_cast<double>(d.size) &&
        d.gini < t.max_gini;
    out.components.push_back(d);
  }
  const auto all = [&](auto pred) { return std::all_of(out.components.begin(), out.components.end(), pred); };
  if (all([](const ComponentDiagnostics& c) { return c.linear; })) {
    out.structure = StructureClass::Linear;
  } else if (all([](const ComponentDiagnostics& c) { return c.loosely_stranded; })) {
    out.structure = StructureClass::LooselyStranded;
  } else {
    out.structure = StructureClass::Other;
  }
  return out;
}

}  // namespace dgca
