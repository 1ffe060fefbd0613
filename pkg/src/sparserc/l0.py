"""Exhaustive L0 oracle for tiny graphs.

Every labeled DAG on d <= 5 nodes is scored by the number of nonzero entries of the
root-cause estimate X(I - A), with A fitted per support. The score splits over nodes, so
each (node, parent set) fit is computed once and shared across all DAGs containing it.
"""

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import List

import numpy as np
from scipy.optimize import linprog

from . import io
from .errors import ShapeMismatch, TooLarge

MAX_NODES = 5


class RankDeficientWarning(UserWarning):
    pass


@dataclass
class L0Result:
    best_support: frozenset
    best_weights: np.ndarray
    best_l0: int
    num_dags_enumerated: int
    ties: List[frozenset] = field(default_factory=list)
    rank_deficient: List[tuple] = field(default_factory=list)

    @property
    def unique(self):
        return len(self.ties) == 1


def _subsets(mask):
    """All submasks of a bitmask."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@lru_cache(maxsize=None)
def _dags_on(nodes):
    """Parent-mask dicts of every DAG on the node bitmask ``nodes``.

    Each DAG is built exactly once from its set of source nodes S: a DAG on the remaining
    nodes, plus edges out of S such that every source of the smaller DAG gets a parent in S.
    """
    if nodes == 0:
        return [()]
    out = []
    members = [v for v in range(MAX_NODES) if nodes >> v & 1]
    for k in range(1, len(members) + 1):
        for S in combinations(members, k):
            smask = sum(1 << v for v in S)
            rest = nodes & ~smask
            for sub in _dags_on(rest):
                parents = dict(sub)
                rest_nodes = [v for v in members if rest >> v & 1]
                choices = []
                for v in rest_nodes:
                    opts = list(_subsets(smask))
                    if parents[v] == 0:
                        opts = [o for o in opts if o]
                    choices.append(opts)
                for pick in _product(choices):
                    full = dict(parents)
                    for v, extra in zip(rest_nodes, pick):
                        full[v] = parents[v] | extra
                    for v in S:
                        full[v] = 0
                    out.append(tuple(sorted(full.items())))
    return out


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


def _check_size(d):
    if d < 1:
        raise ValueError("need at least one node")
    if d > MAX_NODES:
        raise TooLarge(f"exhaustive DAG enumeration is capped at d={MAX_NODES}, got {d}")


def _parent_masks(d):
    _check_size(d)
    return [tuple(m for _, m in dag) for dag in _dags_on((1 << d) - 1)]


def enumerate_dags(d):
    """Every labeled DAG on d nodes, each as a frozenset of (parent, child) edges."""
    dags = []
    for masks in _parent_masks(d):
        dags.append(frozenset((i, j) for j, m in enumerate(masks) for i in range(d) if m >> i & 1))
    return sorted(dags, key=lambda s: (len(s), sorted(s)))


def count_labeled_dags(d):
    """Robinson's recurrence a(n) = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k)."""
    from math import comb
    a = [1]
    for n in range(1, d + 1):
        a.append(sum((-1) ** (k + 1) * comb(n, k) * 2 ** (k * (n - k)) * a[n - k]
                     for k in range(1, n + 1)))
    return a[d]


def _lad_fit(y, P):
    """Least-absolute-deviation weights for y ~ P w, solved as a linear program."""
    n, k = P.shape
    c = np.concatenate([np.zeros(k), np.ones(n)])
    eye = np.eye(n)
    A_ub = np.block([[P, -eye], [-P, -eye]])
    b_ub = np.concatenate([y, -y])
    bounds = [(None, None)] * k + [(0, None)] * n
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        return np.linalg.lstsq(P, y, rcond=None)[0]
    return res.x[:k]


def fit_parents(X, j, parents, polish_tol):
    """Fit node j on its parent columns so that the residual is as sparse as possible.

    An L1 fit finds the sparse-residual solution in the noise-free case; ordinary least
    squares on the rows it leaves (near) zero then removes LP round-off.
    Returns ``(weights, residual, rank_deficient)``.
    """
    y = X[:, j]
    if not parents:
        return np.zeros(0), y.copy(), False
    P = X[:, parents]
    deficient = np.linalg.matrix_rank(P) < len(parents)
    w = _lad_fit(y, P)
    r = y - P @ w
    zero_rows = np.abs(r) <= polish_tol
    if zero_rows.sum() >= len(parents):
        w_ls = np.linalg.lstsq(P[zero_rows], y[zero_rows], rcond=None)[0]
        r_ls = y - P @ w_ls
        if np.count_nonzero(np.abs(r_ls) > polish_tol) <= np.count_nonzero(np.abs(r) > polish_tol):
            w, r = w_ls, r_ls
    return w, r, bool(deficient)


def l0_objective(X, A, zero_tol=1e-7):
    """Number of entries of X(I - A) above zero_tol * max|X|."""
    X = np.asarray(X, dtype=float)
    A = np.asarray(A, dtype=float)
    if A.shape != (X.shape[1], X.shape[1]):
        raise ShapeMismatch(f"data {X.shape} and adjacency {A.shape} are incompatible")
    scale = np.abs(X).max()
    return int(np.count_nonzero(np.abs(X - X @ A) > zero_tol * scale))


def solve_l0(X, zero_tol=1e-7, weight_tol=1e-6):
    """Exhaustive minimization of |X(I - A)|_0 over acyclic A, for d <= 5."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeMismatch(f"data must be 2-D, got shape {X.shape}")
    d = X.shape[1]
    _check_size(d)
    all_masks = _parent_masks(d)
    scale = np.abs(X).max()
    tol = zero_tol * scale
    polish_tol = max(1e-6 * scale, tol)

    fits = {}
    for j in range(d):
        others = (((1 << d) - 1) & ~(1 << j))
        for m in _subsets(others):
            parents = [i for i in range(d) if m >> i & 1]
            w, r, deficient = fit_parents(X, j, parents, polish_tol)
            fits[j, m] = (parents, w, int(np.count_nonzero(np.abs(r) > tol)), deficient)

    scored = []
    rank_deficient = []
    for masks in all_masks:
        total = sum(fits[j, m][2] for j, m in enumerate(masks))
        deficient = any(fits[j, m][3] for j, m in enumerate(masks))
        if deficient:
            rank_deficient.append(masks)
        scored.append((total, deficient, masks))
    if rank_deficient:
        warnings.warn(f"{len(rank_deficient)} supports had collinear parent columns",
                      RankDeficientWarning)

    best_l0 = min(s[0] for s in scored)
    candidates = {}
    for total, deficient, masks in scored:
        if total != best_l0 or deficient:
            continue
        W = _assemble(fits, masks, d)
        W[np.abs(W) <= weight_tol] = 0.0
        support = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(W)))
        candidates.setdefault(support, W)
    if not candidates:
        # every minimizer was rank deficient; fall back to the smallest of them
        for total, _, masks in scored:
            if total == best_l0:
                W = _assemble(fits, masks, d)
                W[np.abs(W) <= weight_tol] = 0.0
                candidates[frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(W)))] = W
    ties = sorted(candidates, key=lambda s: (len(s), sorted(s)))
    best = ties[0]
    return L0Result(
        best_support=best,
        best_weights=candidates[best],
        best_l0=best_l0,
        num_dags_enumerated=len(all_masks),
        ties=ties,
        rank_deficient=rank_deficient,
    )


def _assemble(fits, masks, d):
    W = np.zeros((d, d))
    for j, m in enumerate(masks):
        parents, w, _, _ = fits[j, m]
        W[parents, j] = w
    return W


def save_l0_result(out_dir, res):
    io.ensure_dir(out_dir)
    io.write_keyvalue(f"{out_dir}/summary.txt", {
        "best_l0": res.best_l0,
        "num_dags_enumerated": res.num_dags_enumerated,
        "num_ties": len(res.ties),
        "unique": res.unique,
        "best_support": ";".join(f"{i}->{j}" for i, j in sorted(res.best_support)),
        "rank_deficient_supports": len(res.rank_deficient),
    })
    io.write_edge_list(f"{out_dir}/edges.txt", res.best_weights)
