#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dgca/classify.hpp"
#include "dgca/dgca.hpp"
#include "dgca/experiment.hpp"
#include "dgca/graph_io.hpp"
#include "dgca/metrics.hpp"
#include "dgca/mga.hpp"
#include "dgca/narma.hpp"
#include "dgca/reservoir.hpp"
#include "dgca/stats.hpp"

namespace py = pybind11;
using namespace dgca;

namespace {

py::dict suite_dict(const MetricSuite& s) {
  py::dict d;
  d["n"] = s.n;
  d["kernel_rank"] = s.kernel_rank;
  d["generalization_rank"] = s.generalization_rank;
  d["memory_capacity"] = s.memory_capacity;
  d["kr"] = s.kr;
  d["gr"] = s.gr;
  d["lmc"] = s.lmc;
  d["sr"] = s.sr;
  d["valid"] = s.valid;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dgca, m) {
  m.doc() = "Graph cellular automaton reservoirs";

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);

  py::class_<StateGraph>(m, "StateGraph")
      .def(py::init<int>(), py::arg("num_states") = 3)
      .def_property_readonly("num_states", &StateGraph::num_states)
      .def("add_node", &StateGraph::add_node, py::arg("state"))
      .def("add_edge", &StateGraph::add_edge, py::arg("src"), py::arg("dst"))
      .def("remove_node", &StateGraph::remove_node)
      .def("remove_edge", &StateGraph::remove_edge)
      .def("has_node", &StateGraph::has_node)
      .def("has_edge", &StateGraph::has_edge)
      .def("state", &StateGraph::state)
      .def("node_count", &StateGraph::node_count)
      .def("edge_count", &StateGraph::edge_count)
      .def("nodes",
           [](const StateGraph& g) {
             std::vector<std::pair<NodeId, int>> out;
             for (const Node& n : g.nodes()) out.emplace_back(n.id, n.state);
             return out;
           })
      .def("edges", [](const StateGraph& g) { return std::vector<Edge>(g.edges().begin(), g.edges().end()); })
      .def("to_json", &graph_to_string)
      .def_static("from_json", &graph_from_string)
      .def("__len__", &StateGraph::node_count)
      .def("__eq__", [](const StateGraph& a, const StateGraph& b) { return a == b; });

  m.def("load_graph", &load_graph);
  m.def("save_graph", &save_graph);
  m.def("edge_density", &edge_density);

  py::class_<Genome>(m, "Genome")
      .def_readonly("num_states", &Genome::num_states)
      .def_readwrite("mlp", &Genome::mlp)
      .def_readwrite("slp", &Genome::slp)
      .def_static("random",
                  [](int num_states, double scale, std::uint64_t seed) {
                    Rng rng(seed);
                    return Genome::random(num_states, scale, rng);
                  },
                  py::arg("num_states") = 3, py::arg("scale") = 1.0, py::arg("seed") = 0)
      .def_static("zeros", &Genome::zeros, py::arg("num_states") = 3)
      .def("to_json", [](const Genome& g) { return genome_to_json(g).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return genome_from_json(nlohmann::json::parse(s)); });

  m.def(
      "grow",
      [](const Genome& genome, int steps, std::size_t budget, std::size_t hard_cap, int seed_state) {
        GrowthConfig cfg;
        cfg.steps = steps;
        cfg.budget = budget;
        cfg.hard_cap = hard_cap;
        cfg.seed_state = seed_state;
        auto result = grow(genome, cfg);
        return py::make_tuple(result.graph, result.trace.extinct, result.trace.overgrown);
      },
      py::arg("genome"), py::arg("steps") = 100, py::arg("budget") = 200, py::arg("hard_cap") = 0,
      py::arg("seed_state") = 0,
      "Returns (graph, extinct, overgrown).");

  m.def(
      "narma_series",
      [](int order, std::size_t length, std::uint64_t seed) {
        auto s = narma_series(order, length, seed);
        return py::make_tuple(s.u, s.y, s.retries);
      },
      py::arg("order"), py::arg("length"), py::arg("seed"), "Returns (u, y, retries).");

  m.def("bipolarize", &bipolarize);
  m.def(
      "run_reservoir",
      [](const StateGraph& g, const std::vector<double>& input, std::uint64_t seed,
         std::size_t washout) {
        Rng rng(seed);
        const auto sys = build_reservoir(g, rng);
        auto run = run_reservoir(sys, input, washout);
        return py::make_tuple(run.states, run.diverged);
      },
      py::arg("graph"), py::arg("input"), py::arg("seed") = 0, py::arg("washout") = 0);

  m.def(
      "evaluate_narma",
      [](const StateGraph& g, int order, std::size_t washout, std::size_t train, std::size_t test,
         int repeats, std::uint64_t seed) {
        EvalConfig cfg;
        cfg.washout = washout;
        cfg.train_len = train;
        cfg.test_len = test;
        cfg.repeats = repeats;
        cfg.rng_seed = seed;
        const auto f = evaluate_task(g, NarmaTask{order}, cfg);
        py::dict d;
        d["fitness"] = f.fitness;
        d["nrmse"] = f.nrmse;
        d["reason"] = std::string(to_string(f.reason));
        d["repeat_nrmse"] = f.repeat_nrmse;
        return d;
      },
      py::arg("graph"), py::arg("order") = 10, py::arg("washout") = 100, py::arg("train") = 2000,
      py::arg("test") = 1000, py::arg("repeats") = 5, py::arg("seed") = 0);

  m.def(
      "metric_suite",
      [](const StateGraph& g, std::uint64_t seed) {
        MetricConfig cfg;
        cfg.rng_seed = seed;
        return suite_dict(metric_suite(g, cfg));
      },
      py::arg("graph"), py::arg("seed") = 0);
  m.def(
      "spectral_radius", [](const Eigen::MatrixXd& w) { return spectral_radius(w); },
      py::arg("weights"));

  m.def("classify", [](const StateGraph& g) {
    return std::string(to_string(classify_structure(g).structure));
  });
  m.def("classify_json", [](const StateGraph& g) { return classify_structure(g).to_json().dump(); });

  m.def(
      "evolve",
      [](const std::string& fitness, int iterations, std::size_t budget, std::uint64_t seed) {
        MgaConfig cfg;
        cfg.fitness = FitnessSpec::parse(fitness);
        cfg.iterations = iterations;
        cfg.growth.budget = budget;
        cfg.rng_seed = seed;
        auto r = mga_run(cfg);
        std::vector<double> best_curve;
        for (const auto& t : r.history) best_curve.push_back(t.best_fitness);
        return py::make_tuple(r.best_fitness, r.best_graph, r.best_genome, best_curve);
      },
      py::arg("fitness") = "narma:10", py::arg("iterations") = 100, py::arg("budget") = 200,
      py::arg("seed") = 0, "Returns (best_fitness, best_graph, best_genome, best_so_far).");

  py::enum_<Alternative>(m, "Alternative")
      .value("two_sided", Alternative::TwoSided)
      .value("greater", Alternative::Greater)
      .value("less", Alternative::Less);
  m.def(
      "mann_whitney_u",
      [](const std::vector<double>& a, const std::vector<double>& b, Alternative alt) {
        const auto r = mann_whitney_u(a, b, alt);
        return py::make_tuple(r.u, r.p, r.exact);
      },
      py::arg("a"), py::arg("b"), py::arg("alternative") = Alternative::TwoSided,
      "Returns (U, p, exact).");
  m.def("median_iqr", [](const std::vector<double>& v) {
    const auto s = median_iqr(v);
    return py::make_tuple(s.median, s.iqr);
  });
}
