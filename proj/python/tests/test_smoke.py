import json

import numpy as np
import pytest

import dgca


def path_graph(n):
    g = dgca.StateGraph(3)
    ids = [g.add_node(i % 3) for i in range(n)]
    for a, b in zip(ids, ids[1:]):
        g.add_edge(a, b)
    return g


def test_graph_roundtrip():
    g = path_graph(5)
    again = dgca.StateGraph.from_json(g.to_json())
    assert again == g
    assert json.loads(g.to_json())["edges"][0] == [0, 1]


def test_classify_path_and_star():
    assert dgca.classify(path_graph(12)) == "Linear"
    star = dgca.StateGraph(3)
    hub = star.add_node(0)
    for _ in range(8):
        star.add_edge(hub, star.add_node(1))
    assert dgca.classify(star) == "Other"


def test_empty_graph_raises():
    with pytest.raises(ValueError):
        dgca.classify(dgca.StateGraph(3))


def test_narma_prefix():
    u, y, retries = dgca.narma_series(10, 50, 3)
    assert y[0] == pytest.approx(0.1, abs=1e-12)
    assert y[1] == pytest.approx(0.1305, abs=1e-12)
    assert min(u) >= 0.0 and max(u) <= 0.5
    assert retries == 0


def test_bipolar_weights_match_states():
    g = dgca.StateGraph(3)
    a, b, c = g.add_node(0), g.add_node(0), g.add_node(1)
    g.add_edge(a, b)
    g.add_edge(b, c)
    w = dgca.bipolarize(g)
    assert w.shape == (3, 3)
    assert w[1, 0] == 1.0
    assert w[2, 1] == -1.0
    assert np.count_nonzero(w) == 2


def test_reservoir_states_shape():
    states, diverged = dgca.run_reservoir(path_graph(6), [0.25] * 40, seed=1, washout=10)
    assert not diverged
    assert states.shape == (30, 6)


def test_metrics_in_range():
    g = path_graph(8)
    g.add_edge(7, 0)
    s = dgca.metric_suite(g, seed=2)
    assert s["valid"]
    for key in ("kr", "gr", "lmc"):
        assert 0.0 <= s[key] <= 1.0
    assert s["sr"] == pytest.approx(1.0, abs=1e-6)


def test_evolve_best_is_monotone():
    best, graph, genome, curve = dgca.evolve("narma:10", iterations=10, budget=32, seed=5)
    assert all(b2 >= b1 for b1, b2 in zip(curve, curve[1:]))
    assert best == curve[-1]
    assert len(genome.mlp) == 64 * 10 + 11 * 64 + 11


def test_u_test_exact():
    u, p, exact = dgca.mann_whitney_u([1, 2, 3], [4, 5, 6])
    assert exact and u == 0.0
    assert p == pytest.approx(0.1, abs=1e-12)
    assert dgca.median_iqr([1, 2, 3, 4]) == pytest.approx((2.5, 1.5))
