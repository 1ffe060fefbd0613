import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import binom

from oracles import closure_by_paths
from sparserc import io
from sparserc.errors import ParseError
from sparserc.errors import InvalidConfig, NotADag
from sparserc.graph import (GraphGenConfig, GraphType, WeightedDag, generate_random_dag,
                            is_acyclic, load_adjacency_csv, load_edge_list, remove_cycles,
                            save_adjacency_csv, save_edge_list, threshold, transitive_closure)


def test_two_node_dag():
    for seed in range(20):
        g = generate_random_dag(GraphGenConfig(d=2, edges_per_vertex=1, seed=seed))
        assert g.num_edges in (0, 1)
        w = np.abs(g.weights[g.weights != 0])
        assert np.all((w >= 0.1) & (w <= 0.9))


def test_er_edge_count_concentration():
    # pair-inclusion probability 2k/(d-1) over d(d-1)/2 pairs
    d, k = 100, 4
    pairs, prob = d * (d - 1) // 2, 2 * k / (d - 1)
    assert binom.cdf(500, pairs, prob) - binom.cdf(299, pairs, prob) >= 0.99
    counts = [generate_random_dag(GraphGenConfig(d=d, seed=s)).num_edges for s in range(40)]
    assert all(300 <= c <= 500 for c in counts)
    assert abs(np.mean(counts) - 400) < 15


def test_scale_free_edge_count():
    g = generate_random_dag(GraphGenConfig(d=30, graph_type=GraphType.SCALE_FREE,
                                           edges_per_vertex=3, seed=1))
    assert g.num_edges == 3 * (30 - 3)


def test_weights_in_range():
    g = generate_random_dag(GraphGenConfig(d=40, weight_range=(0.5, 2.0), seed=7))
    w = np.abs(g.weights[g.weights != 0])
    assert w.min() > 0.5 and w.max() < 2.0
    assert (g.weights > 0).any() and (g.weights < 0).any()


def test_generation_is_deterministic():
    cfg = GraphGenConfig(d=25, seed=99)
    a, b = generate_random_dag(cfg), generate_random_dag(cfg)
    assert a.weights.tobytes() == b.weights.tobytes()
    assert generate_random_dag(GraphGenConfig(d=25, seed=100)) != a


def test_node_labels_are_shuffled():
    # without relabeling every generated graph would be upper triangular
    uppers = [np.allclose(np.tril(generate_random_dag(GraphGenConfig(d=10, seed=s)).weights), 0)
              for s in range(20)]
    assert not all(uppers)


@pytest.mark.parametrize("kw", [dict(d=5, edges_per_vertex=5), dict(d=5, edges_per_vertex=0),
                                dict(d=5, weight_range=(0.9, 0.1)),
                                dict(d=5, weight_range=(0.0, 0.5))])
def test_invalid_config(kw):
    with pytest.raises(InvalidConfig):
        generate_random_dag(GraphGenConfig(**kw))


def test_acyclic_over_many_seeds():
    for seed in range(1000):
        gt = GraphType.SCALE_FREE if seed % 2 else GraphType.ERDOS_RENYI
        g = generate_random_dag(GraphGenConfig(d=12, graph_type=gt, edges_per_vertex=3, seed=seed))
        assert is_acyclic(g.weights, 0)


def test_weighted_dag_rejects_cycles():
    with pytest.raises(NotADag):
        WeightedDag(np.array([[0, 1.0], [1.0, 0]]))
    with pytest.raises(NotADag):
        WeightedDag(np.array([[1.0, 0], [0, 0]]))


def test_pollution_closure(pollution):
    C = transitive_closure(pollution)
    idx = "ABCDEF".index
    expected = {"AD": 0.55, "AE": 0.385, "AF": 0.055, "BE": 0.56, "BF": 0.08, "CE": 0.21, "CF": 0.03}
    for pair, v in expected.items():
        assert C[idx(pair[0]), idx(pair[1])] == pytest.approx(v, abs=1e-12)
    # the figure prints two decimals
    shown = {"AD": 0.55, "AE": 0.39, "AF": 0.06, "BE": 0.56, "BF": 0.08, "CE": 0.21, "CF": 0.03}
    for pair, v in shown.items():
        assert abs(C[idx(pair[0]), idx(pair[1])] - v) <= 0.005 + 1e-12


def test_closure_trivial_cases():
    assert np.array_equal(transitive_closure(WeightedDag(np.zeros((4, 4)))), np.zeros((4, 4)))
    W = np.zeros((4, 4))
    W[2, 1] = 0.7
    C = transitive_closure(WeightedDag(W))
    assert np.allclose(C, W, atol=0)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(1, 30), seed=st.integers(0, 2**32 - 1), k=st.integers(1, 4))
def test_closure_matches_path_dp(d, seed, k):
    if k >= d:
        k = max(1, d - 1)
    if d == 1:
        g = WeightedDag(np.zeros((1, 1)))
    else:
        g = generate_random_dag(GraphGenConfig(d=d, edges_per_vertex=k, seed=seed))
    C = transitive_closure(g)
    assert np.allclose(C, closure_by_paths(g.weights), atol=1e-10, rtol=0)
    eye = np.eye(d)
    assert np.allclose((eye - g.weights) @ (eye + C), eye, atol=1e-10, rtol=0)


def test_is_acyclic_examples():
    assert is_acyclic(np.triu(np.ones((4, 4)), 1), 0)
    two_cycle = np.array([[0, 1.0], [1.0, 0]])
    assert not is_acyclic(two_cycle, 0)
    weak = np.array([[0, 1.0], [1e-12, 0]])
    assert is_acyclic(weak, 1e-9)
    assert not is_acyclic(weak, 0)


def test_threshold_examples():
    assert np.array_equal(threshold([[0, 0.05], [0, 0]], 0.09), np.zeros((2, 2)))
    assert np.array_equal(threshold([[0, 0.5], [0, 0]], 0.09), [[0, 0.5], [0, 0]])
    assert np.array_equal(threshold([[0, 0.09], [0, 0]], 0.09), [[0, 0.09], [0, 0]])
    assert np.array_equal(threshold([[0, -0.09], [0, 0]], 0.09), [[0, -0.09], [0, 0]])


def test_remove_cycles_drops_weakest_cycle_edge():
    W = np.zeros((4, 4))
    W[0, 1], W[1, 2], W[2, 0] = 0.5, 0.8, 0.2
    W[0, 3] = 0.1  # weaker, but not on the cycle
    fixed, removed = remove_cycles(W)
    assert removed == 1
    assert fixed[2, 0] == 0 and fixed[0, 3] == 0.1 and fixed[0, 1] == 0.5
    assert is_acyclic(fixed)


def test_remove_cycles_random(rng):
    for _ in range(50):
        W = np.where(rng.random((8, 8)) < 0.3, rng.uniform(0.1, 1, (8, 8)), 0.0)
        np.fill_diagonal(W, 0)
        fixed, removed = remove_cycles(W)
        assert is_acyclic(fixed)
        assert removed == np.count_nonzero(W) - np.count_nonzero(fixed)


def test_csv_and_edge_list_round_trip(tmp_path):
    g = generate_random_dag(GraphGenConfig(d=15, seed=3))
    save_adjacency_csv(tmp_path / "a.csv", g)
    assert np.array_equal(load_adjacency_csv(tmp_path / "a.csv"), g.weights)
    save_edge_list(tmp_path / "e.txt", g)
    assert np.array_equal(load_edge_list(tmp_path / "e.txt", 15), g.weights)
    first = (tmp_path / "e.txt").read_text().splitlines()[0].split(",")
    assert len(first) == 3 and int(first[0]) >= 0
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert len(lines) == 15 and all(len(l.split(",")) == 15 for l in lines)


def test_csv_parse_error_location(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2,3\n4,x,6\n")
    with pytest.raises(ParseError) as exc:
        io.read_matrix_csv(p)
    assert exc.value.row == 2 and exc.value.column == 2
