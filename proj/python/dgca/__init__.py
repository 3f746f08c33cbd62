"""Graph cellular automaton reservoirs."""

from ._dgca import (
    Alternative,
    Genome,
    GraphError,
    StateGraph,
    bipolarize,
    classify,
    classify_json,
    edge_density,
    evaluate_narma,
    evolve,
    grow,
    load_graph,
    mann_whitney_u,
    median_iqr,
    metric_suite,
    narma_series,
    run_reservoir,
    save_graph,
    spectral_radius,
)

__all__ = [
    "Alternative",
    "Genome",
    "GraphError",
    "StateGraph",
    "bipolarize",
    "classify",
    "classify_json",
    "edge_density",
    "evaluate_narma",
    "evolve",
    "grow",
    "load_graph",
    "mann_whitney_u",
    "median_iqr",
    "metric_suite",
    "narma_series",
    "run_reservoir",
    "save_graph",
    "spectral_radius",
]
