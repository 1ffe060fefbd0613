import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import huber_objective, random_dag_mask, trace_expm_2x2_offdiag
from sparserc.datagen import DataGenConfig, RootCauses, generate_dataset, synthesize
from sparserc.errors import InvalidConfig, NonFinite, ShapeMismatch, SolverTimeout
from sparserc.expm import acyclicity, expm
from sparserc.graph import GraphGenConfig, WeightedDag, generate_random_dag
from sparserc.solver import (SolverConfig, augmented_loss, objective, objective_and_grad,
                             recover_root_causes, save_result, solve)

FAST = SolverConfig(max_inner=1500, max_outer=6)


@settings(max_examples=60, deadline=None)
@given(arrays(float, (5, 5), elements=st.floats(-3, 3)))
def test_expm_matches_scipy(M):
    ref = scipy.linalg.expm(M)
    assert np.allclose(expm(M), ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_expm_small_cases():
    assert np.array_equal(expm(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(expm(np.diag([1.0, -2.0])), np.diag([math.e, math.exp(-2)]))
    h, _ = acyclicity(np.array([[0, 1.0], [1.0, 0]]))
    assert h == pytest.approx(2 * math.cosh(1) - 2, abs=1e-12)
    assert h == pytest.approx(1.0862, abs=1e-4)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-2, 2), b=st.floats(-2, 2))
def test_two_cycle_closed_form(a, b):
    h, _ = acyclicity(np.array([[0, a], [b, 0]]))
    assert h == pytest.approx(trace_expm_2x2_offdiag(a, b), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(arrays(float, (4, 4), elements=st.floats(-1, 1)))
def test_h_gradient_finite_difference(A):
    _, g = acyclicity(A)
    step = 1e-6
    fd = np.zeros_like(A)
    for i in range(4):
        for j in range(4):
            E = np.zeros_like(A)
            E[i, j] = step
            fd[i, j] = (acyclicity(A + E)[0] - acyclicity(A - E)[0]) / (2 * step)
    scale = max(np.abs(g).max(), 1e-3)
    assert np.abs(fd - g).max() <= 1e-6 * scale + 1e-9


@settings(max_examples=60, deadline=None)
@given(d=st.integers(2, 8), seed=st.integers(0, 10**6))
def test_h_zero_iff_acyclic(d, seed):
    rng = np.random.default_rng(seed)
    mask = random_dag_mask(rng, d, 0.5)
    W = np.where(mask, rng.uniform(0.1, 2, (d, d)), 0.0)
    assert acyclicity(W)[0] < 1e-10
    # add a back edge to close a cycle
    edges = np.argwhere(mask)
    if len(edges):
        i, j = edges[rng.integers(len(edges))]
        W[j, i] = rng.uniform(0.1, 2)
        assert acyclicity(W)[0] > 1e-10


def test_objective_examples():
    X = np.array([[1.0, 2.0]])
    A = np.array([[0, 2.0], [0, 0]])
    assert objective(X, A, 0.0) == pytest.approx(0.5)
    assert objective(X, A, 0.1) == pytest.approx(0.5 + 0.2)
    assert objective(np.zeros((3, 2)), np.zeros((2, 2)), 1.0) == 0
    with pytest.raises(ShapeMismatch):
        objective(np.zeros((3, 2)), np.zeros((3, 3)), 0.1)


def test_objective_is_root_cause_l1(pollution):
    c = np.array([[3.0, 0, 0, 5, 0, 0]])
    rc = RootCauses(c, np.zeros_like(c), np.zeros_like(c))
    X = synthesize(pollution, rc).x
    assert objective(X, pollution.weights, 0.0) == pytest.approx(8 / 2)
    assert np.allclose(recover_root_causes(X, pollution), c, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_smoothed_gradient(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(20, 4))
    A = rng.normal(size=(4, 4)) * 0.5
    width, step = 1e-6, 1e-5
    f, g = objective_and_grad(X, A, 0.05, smooth=width)
    assert f == pytest.approx(huber_objective(X, A, 0.05, width), rel=1e-12)
    R = X - X @ A
    for i in range(4):
        for j in range(4):
            # skip points where a kink lies within one step
            col = np.abs(R[:, j]) - step * np.abs(X[:, i])
            if (col <= width).any() or abs(A[i, j]) <= step + width:
                continue
            E = np.zeros_like(A)
            E[i, j] = step
            fd = (objective_and_grad(X, A + E, 0.05, width)[0]
                  - objective_and_grad(X, A - E, 0.05, width)[0]) / (2 * step)
            assert fd == pytest.approx(g[i, j], rel=1e-4, abs=1e-9)


def test_augmented_loss_adds_penalty():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(10, 3))
    A = rng.normal(size=(3, 3))
    f, _ = objective_and_grad(X, A, 0.1)
    h, _ = acyclicity(A)
    loss, _, h2 = augmented_loss(X, A, 0.1, rho=2.0, alpha=0.5)
    assert h2 == h
    assert loss == pytest.approx(f + h * h + 0.5 * h)


def test_solve_zero_data():
    res = solve(np.zeros((10, 4)), FAST)
    assert res.weights.num_edges == 0
    assert np.all(res.weights_raw == 0)


def _two_node(seed=0, n=500):
    rng = np.random.default_rng(seed)
    c = np.where(rng.random((n, 2)) < 0.1, rng.random((n, 2)), 0.0)
    g = WeightedDag(np.array([[0, 0.8], [0, 0]]))
    return synthesize(g, RootCauses(c, np.zeros_like(c), np.zeros_like(c))).x


def test_two_node_regression():
    res = solve(_two_node(), FAST)
    W = res.weights.weights
    assert W[1, 0] == 0
    assert W[0, 1] == pytest.approx(0.8, abs=0.05)


def test_solver_deterministic():
    X = _two_node(3, 200)
    a = solve(X, FAST)
    b = solve(X, FAST)
    assert a.weights_raw.tobytes() == b.weights_raw.tobytes()
    assert [t[:3] for t in a.objective_trace] == [t[:3] for t in b.objective_trace]


def test_solve_small_graph_and_trace():
    g = generate_random_dag(GraphGenConfig(d=6, edges_per_vertex=2, seed=4))
    ds = generate_dataset(g, DataGenConfig(n=500, seed=4))
    res = solve(ds.x, SolverConfig(max_inner=3000))
    assert np.array_equal(res.weights.support, g.support)
    iters = [t[0] for t in res.objective_trace]
    assert iters == sorted(iters)
    assert res.h_raw == pytest.approx(acyclicity(res.weights_raw)[0])
    assert res.converged == (res.h_raw < SolverConfig().h_tol)
    assert np.all(np.diag(res.weights_raw) == 0)


def test_fixed_penalty_mode():
    cfg = SolverConfig(max_inner=500, max_outer=3, penalty="fixed", rho_init=10.0)
    res = solve(_two_node(1, 200), cfg)
    assert {t[3] for t in res.objective_trace} == {10.0}


@pytest.mark.parametrize("kw", [dict(lambda_=0), dict(learning_rate=-1), dict(max_inner=0),
                                dict(rho_mult=1.0), dict(adam_beta1=1.0), dict(penalty="x")])
def test_invalid_solver_config(kw):
    with pytest.raises(InvalidConfig):
        solve(np.ones((3, 2)), SolverConfig(**kw))


def test_bad_inputs():
    with pytest.raises(ShapeMismatch):
        solve(np.ones(3))
    X = np.ones((3, 2))
    X[0, 0] = np.nan
    with pytest.raises(NonFinite):
        solve(X)
    with pytest.raises(NonFinite):
        solve(np.ones((5, 3)) * 1e200, FAST)


def test_timeout():
    X = np.random.default_rng(0).normal(size=(200, 15))
    with pytest.raises(SolverTimeout):
        solve(X, SolverConfig(max_inner=10**6), timeout_s=0.2)


def test_save_result(tmp_path):
    res = solve(_two_node(2, 100), FAST)
    save_result(tmp_path, res, FAST)
    for name in ("adjacency_raw.csv", "adjacency.csv", "edges.txt", "runlog.csv", "summary.txt"):
        assert (tmp_path / name).exists()
    assert (tmp_path / "runlog.csv").read_text().startswith("iter,loss,h,rho\n")
