#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "dgca/graph.hpp"

namespace dgca {
namespace {

// Undirected adjacency restricted to one component, indexed 0..n_c-1 in the
// component's node order.
struct LocalGraph {
  std::vector<std::vector<std::size_t>> adj;
};

LocalGraph local_graph(const ComponentView& c, const StateGraph& g) {
  LocalGraph local;
  local.adj.resize(c.size());
  auto local_index = [&c](NodeId id) -> std::optional<std::size_t> {
    auto it = std::lower_bound(c.nodes.begin(), c.nodes.end(), id);
    if (it == c.nodes.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - c.nodes.begin());
  };
  for (const auto& [src, dst] : g.edges()) {
    if (src == dst) continue;
    auto s = local_index(src);
    auto d = local_index(dst);
    if (!s || !d) continue;
    local.adj[*s].push_back(*d);
    local.adj[*d].push_back(*s);
  }
  for (auto& nbrs : local.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return local;
}

constexpr int kUnreached = -1;

std::vector<int> bfs_distances(const LocalGraph& lg, std::size_t source) {
  std::vector<int> dist(lg.adj.size(), kUnreached);
  std::queue<std::size_t> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    for (std::size_t w : lg.adj[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<ComponentView> connected_components(const StateGraph& g) {
  const auto adj = undirected_adjacency(g);
  const std::size_t n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<ComponentView> components;
  // Nodes are stored by ascending id, so scanning in order yields components
  // ordered by their smallest id.
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ComponentView comp;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.nodes.push_back(g.nodes()[v].id);
      for (std::size_t w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.nodes.begin(), comp.nodes.end());
    components.push_back(std::move(comp));
  }
  return components;
}

int diameter(const ComponentView& c, const StateGraph& g) {
  const LocalGraph lg = local_graph(c, g);
  int best = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const auto dist = bfs_distances(lg, s);
    for (int d : dist) {
      if (d == kUnreached) throw GraphError("diameter: component is not connected");
      best = std::max(best, d);
    }
  }
  return best;
}

std::optional<std::map<NodeId, double>> betweenness_normalized(const ComponentView& c,
                                                               const StateGraph& g) {
  const std::size_t n = c.size();
  if (n < 3) return std::nullopt;
  const LocalGraph lg = local_graph(c, g);

  // Brandes accumulation from every source. Each unordered pair is visited
  // once from each endpoint, giving the ordered-pair count directly.
  std::vector<double> score(n, 0.0);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> dist(n);
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), kUnreached);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> queue;
    queue.push(s);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      order.push_back(v);
      for (std::size_t w : lg.adj[v]) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) score[w] += delta[w];
    }
  }

  const double norm = static_cast<double>((n - 1) * (n - 2));
  std::map<NodeId, double> result;
  for (std::size_t i = 0; i < n; ++i) result.emplace(c.nodes[i], score[i] / norm);
  return result;
}

std::optional<std::map<NodeId, double>> closeness_reciprocal(const ComponentView& c,
                                                             const StateGraph& g) {
  const std::size_t n = c.size();
  if (n < 2) return std::nullopt;
  const LocalGraph lg = local_graph(c, g);
  std::map<NodeId, double> result;
  for (std::size_t s = 0; s < n; ++s) {
    const auto dist = bfs_distances(lg, s);
    long total = 0;
    for (int d : dist) {
      if (d == kUnreached) throw GraphError("closeness: component is not connected");
      total += d;
    }
    result.emplace(c.nodes[s], static_cast<double>(total) / static_cast<double>(n - 1));
  }
  return result;
}

double gini(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (mean <= 0.0) return 0.0;
  // Sorted form of the pairwise double sum: sum_{i,j}|x_i-x_j| = 2 sum_k (2k-n+1) x_(k).
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double weighted = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    weighted += (2.0 * static_cast<double>(k) - n + 1.0) * sorted[k];
  }
  return 2.0 * weighted / (2.0 * n * n * mean);
}

double gini_degree(const ComponentView& c, const StateGraph& g) {
  const LocalGraph lg = local_graph(c, g);
  std::vector<double> degrees;
  degrees.reserve(c.size());
  for (const auto& nbrs : lg.adj) degrees.push_back(static_cast<double>(nbrs.size()));
  return gini(degrees);
}

}  // namespace dgca
