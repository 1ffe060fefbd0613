"""Evaluation metrics for learned DAGs and recovered root causes."""

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInput, NotADag, ShapeMismatch
from .graph import is_acyclic

CSV_COLUMNS = (
    "method", "seed", "d", "n", "shd", "sid", "tpr", "fpr", "total_edges", "nmse",
    "avg_l1", "max_l1", "avg_l2", "c_tpr", "c_fpr", "c_nmse", "varsortability", "runtime_s",
)


@dataclass
class MetricsReport:
    shd: int
    sid: Optional[int]
    tpr: Optional[float]
    fpr: float
    total_edges: int
    nmse_weights: Optional[float] = None
    avg_l1: Optional[float] = None
    max_l1: Optional[float] = None
    avg_l2: Optional[float] = None
    c_tpr: Optional[float] = None
    c_fpr: Optional[float] = None
    c_nmse: Optional[float] = None
    varsortability: Optional[float] = None
    runtime_seconds: float = 0.0
    method: str = "sparserc"
    seed: Optional[int] = None
    d: Optional[int] = None
    n: Optional[int] = None

    _csv_attr = {"nmse": "nmse_weights", "runtime_s": "runtime_seconds"}

    def to_row(self):
        """Values in ``CSV_COLUMNS`` order; absent values become ``"na"``."""
        out = []
        for col in CSV_COLUMNS:
            v = getattr(self, self._csv_attr.get(col, col))
            if v is None or (isinstance(v, float) and math.isnan(v)):
                out.append("na")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out

    @classmethod
    def from_row(cls, row):
        if isinstance(row, dict):
            row = [row[c] for c in CSV_COLUMNS]
        kw = {}
        for col, raw in zip(CSV_COLUMNS, row):
            name = cls._csv_attr.get(col, col)
            if raw == "na" or raw == "":
                kw[name] = None
            elif name == "method":
                kw[name] = raw
            elif name in ("shd", "sid", "total_edges", "seed", "d", "n"):
                kw[name] = int(raw)
            else:
                kw[name] = float(raw)
        if kw.get("runtime_seconds") is None:
            kw["runtime_seconds"] = 0.0
        return cls(**kw)


def _binary_pair(est, truth):
    E = np.asarray(est) != 0
    T = np.asarray(truth) != 0
    if E.shape != T.shape or E.ndim != 2 or E.shape[0] != E.shape[1]:
        raise ShapeMismatch(f"adjacency shapes differ: {E.shape} vs {T.shape}")
    return E, T


def shd(est, truth):
    """Structural Hamming distance; a reversed edge counts once.

    Every unordered pair {i, j} whose (i->j, j->i) status differs between the graphs adds 1.
    """
    E, T = _binary_pair(est, truth)
    iu = np.triu_indices(E.shape[0], k=1)
    diff = (E[iu] != T[iu]) | (E.T[iu] != T.T[iu])
    return int(diff.sum())


def edge_rates(est, truth):
    """Return ``(tpr, fpr, total_edges)``; tpr is None if the truth has no edges."""
    E, T = _binary_pair(est, truth)
    np.fill_diagonal(E, False)
    np.fill_diagonal(T, False)
    d = E.shape[0]
    n_true = int(T.sum())
    tp = int((E & T).sum())
    fp = int((E & ~T).sum())
    tpr = tp / n_true if n_true else None
    negatives = d * (d - 1) - n_true
    fpr = fp / negatives if negatives else 0.0
    return tpr, fpr, int(E.sum())


def weight_losses(est, truth, edge_count=None):
    """Return ``(avg_l1, max_l1, avg_l2, nmse)`` between weighted adjacencies."""
    Ahat = np.asarray(est, dtype=float)
    A = np.asarray(truth, dtype=float)
    if A.shape != Ahat.shape:
        raise ShapeMismatch(f"adjacency shapes differ: {Ahat.shape} vs {A.shape}")
    if edge_count is None:
        edge_count = int(np.count_nonzero(A))
    norm = np.linalg.norm(A)
    if edge_count <= 0 or norm == 0:
        raise DegenerateInput("true adjacency has no edges")
    D = A - Ahat
    return (
        float(np.abs(D).sum() / edge_count),
        float(np.abs(D).max()),
        float(np.linalg.norm(D) / edge_count),
        float(np.linalg.norm(D) / norm),
    )


def varsortability(X, truth, tol=1e-9):
    """Fraction of causally ordered node pairs whose variance increases downstream.

    Pairs are counted once for every path length k = 1..d-1 at which they are connected;
    ties (within a relative tol) count one half.
    """
    E = np.asarray(truth) != 0
    X = np.asarray(X, dtype=float)
    if X.shape[1] != E.shape[0]:
        raise ShapeMismatch(f"data has {X.shape[1]} columns, graph has {E.shape[0]} nodes")
    if not is_acyclic(E):
        raise NotADag("truth must be acyclic")
    var = X.var(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = var[None, :] / var[:, None]
    up = ratio > 1 + tol
    tie = (ratio <= 1 + tol) & (ratio > 1 - tol)
    Ek = E.copy()
    Ei = E.astype(np.int64)
    paths = 0
    ordered = 0.0
    for _ in range(E.shape[0] - 1):
        if not Ek.any():
            break
        paths += int(Ek.sum())
        ordered += (Ek & up).sum() + 0.5 * (Ek & tie).sum()
        Ek = (Ek.astype(np.int64) @ Ei) > 0
    if paths == 0:
        return math.nan
    return float(ordered / paths)


def root_cause_metrics(c_est, c_true, support_frac=0.1):
    """Return ``(c_tpr, c_fpr, c_nmse)`` on supports |c| > support_frac * max|c|."""
    Ce = np.asarray(c_est, dtype=float)
    Ct = np.asarray(c_true, dtype=float)
    if Ce.shape != Ct.shape:
        raise ShapeMismatch(f"root cause shapes differ: {Ce.shape} vs {Ct.shape}")
    if not np.any(Ct):
        raise DegenerateInput("true root causes are all zero")
    Se = np.abs(Ce) > support_frac * np.abs(Ce).max()
    St = np.abs(Ct) > support_frac * np.abs(Ct).max()
    pos = int(St.sum())
    neg = St.size - pos
    tpr = (Se & St).sum() / pos
    fpr = (Se & ~St).sum() / neg if neg else 0.0
    nmse = np.linalg.norm(Ce - Ct) / np.linalg.norm(Ct)
    return float(tpr), float(fpr), float(nmse)


# --- structural intervention distance ---------------------------------------------------

def _reach(adj, start):
    seen = np.zeros(adj.shape[0], dtype=bool)
    stack = [start]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u]):
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def _d_separated(G, x, y, Z):
    """Reachability ("Bayes ball") test of x _||_ y | Z in the DAG G."""
    d = G.shape[0]
    inZ = np.zeros(d, dtype=bool)
    inZ[list(Z)] = True
    # ancestors of Z, including Z
    anZ = inZ.copy()
    stack = list(Z)
    while stack:
        u = stack.pop()
        for p in np.flatnonzero(G[:, u]):
            if not anZ[p]:
                anZ[p] = True
                stack.append(p)
    visited = set()
    queue = deque([(x, "up")])
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node == y and not inZ[node]:
            return False
        if direction == "up" and not inZ[node]:
            queue.extend((int(p), "up") for p in np.flatnonzero(G[:, node]))
            queue.extend((int(c), "down") for c in np.flatnonzero(G[node]))
        elif direction == "down":
            if not inZ[node]:
                queue.extend((int(c), "down") for c in np.flatnonzero(G[node]))
            if anZ[node]:
                queue.extend((int(p), "up") for p in np.flatnonzero(G[:, node]))
    return True


def sid(est, truth):
    """Structural intervention distance of ``est`` with respect to the DAG ``truth``.

    Counts ordered pairs (i, j) for which adjusting for the parents of i in ``est`` does
    not give the interventional distribution of j under do(i) implied by ``truth``.
    Returns None when ``est`` contains a cycle.
    """
    G, H = _binary_pair(est, truth)
    if not is_acyclic(H):
        raise NotADag("truth must be acyclic")
    if not is_acyclic(G):
        return None
    d = H.shape[0]
    desc = np.array([_reach(H, i) for i in range(d)])  # desc[i, j]: j strict descendant of i
    anc_or_self = desc.T | np.eye(d, dtype=bool)
    wrong = 0
    for i in range(d):
        Z = np.flatnonzero(G[:, i])
        z_mask = G[:, i]
        for j in range(d):
            if j == i:
                continue
            if z_mask[j]:
                wrong += bool(desc[i, j])
                continue
            # nodes other than i on directed paths i -> ... -> j
            on_path = desc[i] & anc_or_self[j]
            forbidden = on_path.copy()
            for w in np.flatnonzero(on_path):
                forbidden |= desc[w]
            if (forbidden & z_mask).any():
                wrong += 1
                continue
            Hb = H.copy()
            Hb[i, on_path] = False  # proper back-door graph
            if not _d_separated(Hb, i, j, Z):
                wrong += 1
    return wrong
