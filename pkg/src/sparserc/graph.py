"""Weighted DAGs: random generation, weighted transitive closure, acyclicity, thresholding."""

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import io
from .errors import InvalidConfig, NotADag, ShapeMismatch


class GraphType(str, Enum):
    ERDOS_RENYI = "ER"
    SCALE_FREE = "SF"


@dataclass(frozen=True, eq=False)
class WeightedDag:
    """Weighted adjacency matrix of a DAG; ``weights[i, j]`` is the weight of edge i -> j."""

    weights: np.ndarray

    def __post_init__(self):
        W = np.array(self.weights, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ShapeMismatch(f"adjacency must be square, got shape {W.shape}")
        if np.any(np.diag(W) != 0):
            raise NotADag("self-loop on the diagonal")
        if not is_acyclic(W, 0.0):
            raise NotADag("weights contain a directed cycle")
        W.setflags(write=False)
        object.__setattr__(self, "weights", W)

    @property
    def d(self):
        return self.weights.shape[0]

    @property
    def support(self):
        return self.weights != 0

    @property
    def num_edges(self):
        return int(np.count_nonzero(self.weights))

    def edges(self):
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.weights))]

    def topological_order(self):
        return topological_order(self.weights)

    def __eq__(self, other):
        if not isinstance(other, WeightedDag):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash(self.weights.tobytes())


@dataclass(frozen=True)
class GraphGenConfig:
    d: int
    graph_type: GraphType = GraphType.ERDOS_RENYI
    edges_per_vertex: int = 4
    weight_range: tuple = (0.1, 0.9)
    seed: int = 0

    def validate(self):
        a, b = self.weight_range
        if self.d < 1:
            raise InvalidConfig(f"d must be positive, got {self.d}")
        if self.edges_per_vertex < 1 or self.edges_per_vertex >= self.d:
            raise InvalidConfig(
                f"edges_per_vertex must lie in [1, d), got {self.edges_per_vertex} with d={self.d}")
        if not (0 < a < b):
            raise InvalidConfig(f"weight range must satisfy 0 < a < b, got {self.weight_range}")
        if not (0 <= self.seed < 2**64):
            raise InvalidConfig("seed must be an unsigned 64-bit integer")


def _sample_weights(rng, mask, a, b):
    mag = rng.uniform(a, b, size=mask.shape)
    sign = rng.choice([-1.0, 1.0], size=mask.shape)
    return np.where(mask, sign * mag, 0.0)


def _erdos_renyi_upper(rng, d, k):
    prob = min(1.0, 2.0 * k / (d - 1))
    return np.triu(rng.random((d, d)) < prob, k=1)


def _barabasi_albert_upper(rng, d, m):
    # Node t attaches to m distinct earlier nodes; edges point from earlier to later.
    mask = np.zeros((d, d), dtype=bool)
    degree = np.zeros(d)
    for t in range(m, d):
        pref = degree[:t] + 1.0
        targets = rng.choice(t, size=m, replace=False, p=pref / pref.sum())
        mask[targets, t] = True
        degree[targets] += 1
        degree[t] += m
    return mask


def generate_random_dag(cfg):
    """Sample a random weighted DAG; node labels are shuffled so index order carries no signal."""
    cfg.validate()
    a, b = cfg.weight_range
    rng = np.random.default_rng(cfg.seed)
    gtype = GraphType(cfg.graph_type)
    if gtype is GraphType.ERDOS_RENYI:
        mask = _erdos_renyi_upper(rng, cfg.d, cfg.edges_per_vertex)
    else:
        mask = _barabasi_albert_upper(rng, cfg.d, cfg.edges_per_vertex)
    W = _sample_weights(rng, mask, a, b)
    perm = rng.permutation(cfg.d)
    return WeightedDag(W[np.ix_(perm, perm)])


def topological_order(W, tol=0.0):
    """Kahn's algorithm on the graph of entries with |w| > tol; returns None if cyclic."""
    B = np.abs(np.asarray(W)) > tol
    d = B.shape[0]
    indeg = B.sum(axis=0).astype(int)
    queue = deque(int(i) for i in np.flatnonzero(indeg == 0))
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        for j in np.flatnonzero(B[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(int(j))
    return order if len(order) == d else None


def is_acyclic(weights, tol=0.0):
    W = np.asarray(weights)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {W.shape}")
    return topological_order(W, tol) is not None


def transitive_closure(g):
    """Weighted transitive closure A + A^2 + ... + A^(d-1).

    Entry (i, j) sums the products of edge weights over every directed path i -> j.
    Computed as prod_k (I + A^(2^k)) - I, which telescopes to the power sum because A is nilpotent.
    """
    A = g.weights if isinstance(g, WeightedDag) else np.asarray(g, dtype=float)
    d = A.shape[0]
    eye = np.eye(d)
    acc = eye + A
    P = A
    span = 2
    while span < d:
        P = P @ P
        acc = acc @ (eye + P)
        span *= 2
    return acc - eye


def threshold(weights, omega):
    """Zero every entry with |w| < omega; entries exactly at omega are kept."""
    W = np.array(weights, dtype=float)
    W[np.abs(W) < omega] = 0.0
    return W


def remove_cycles(weights):
    """Drop the smallest-|w| edges that lie on cycles until the graph is acyclic.

    Returns the repaired matrix and the number of edges removed.
    """
    W = np.array(weights, dtype=float)
    removed = 0
    while True:
        on_cycle = _edges_on_cycles(W != 0)
        if not on_cycle.any():
            return W, removed
        mags = np.where(on_cycle, np.abs(W), np.inf)
        i, j = np.unravel_index(np.argmin(mags), W.shape)
        W[i, j] = 0.0
        removed += 1


def _edges_on_cycles(B):
    # i -> j lies on a cycle iff j reaches i; reachability via boolean closure.
    d = B.shape[0]
    R = B.copy()
    for _ in range(max(1, int(np.ceil(np.log2(max(d, 2)))) + 1)):
        R_next = R | ((R.astype(np.int64) @ R.astype(np.int64)) > 0)
        if np.array_equal(R_next, R):
            break
        R = R_next
    return B & R.T


def save_adjacency_csv(path, W):
    io.write_matrix_csv(path, W.weights if isinstance(W, WeightedDag) else W)


def load_adjacency_csv(path):
    W = io.read_matrix_csv(path)
    if W.shape[0] != W.shape[1]:
        raise ShapeMismatch(f"{path}: adjacency must be square, got {W.shape}")
    return W


def save_edge_list(path, W):
    io.write_edge_list(path, W.weights if isinstance(W, WeightedDag) else W)


def load_edge_list(path, d):
    return io.read_edge_list(path, d)
