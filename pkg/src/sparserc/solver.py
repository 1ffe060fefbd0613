"""L1 sparse-root-causes DAG learner.

Minimizes (1/2n)|X(I - A)|_1 + lambda |A|_1 subject to h(A) = 0, where X(I - A) is the
root-cause estimate (the inverse of I + closure(A) is I - A for a DAG). The constraint is
enforced with an augmented Lagrangian; each subproblem is run with Adam on subgradients.
"""

import math
import time
from dataclasses import asdict, dataclass, field
from typing import List, Tuple

import numpy as np

from . import io
from .errors import InvalidConfig, NonFinite, ShapeMismatch, SolverTimeout
from .expm import acyclicity
from .graph import WeightedDag, remove_cycles, threshold


@dataclass(frozen=True)
class SolverConfig:
    lambda_: float = 1e-3
    learning_rate: float = 1e-3
    omega: float = 0.09
    max_outer: int = 10
    max_inner: int = 5000
    h_tol: float = 1e-8
    rho_init: float = 1.0
    rho_mult: float = 10.0
    rho_max: float = 1e16
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    penalty: str = "augmented_lagrangian"  # or "fixed": constant rho, no dual update
    early_stop_window: int = 100
    early_stop_rtol: float = 1e-9
    log_every: int = 100

    def validate(self):
        positive = ("lambda_", "learning_rate", "omega", "h_tol", "rho_init", "rho_max", "adam_eps")
        for name in positive:
            if not getattr(self, name) > 0:
                raise InvalidConfig(f"{name} must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise InvalidConfig("iteration budgets must be positive")
        if self.rho_mult <= 1:
            raise InvalidConfig("rho_mult must exceed 1")
        for name in ("adam_beta1", "adam_beta2"):
            if not 0 < getattr(self, name) < 1:
                raise InvalidConfig(f"{name} must lie in (0, 1)")
        if self.penalty not in ("augmented_lagrangian", "fixed"):
            raise InvalidConfig(f"unknown penalty mode {self.penalty!r}")


@dataclass
class SolveResult:
    weights_raw: np.ndarray
    weights: WeightedDag
    objective_trace: List[Tuple[int, float, float, float]]
    runtime_seconds: float
    converged: bool
    h_raw: float = math.nan
    cycle_edges_removed: int = 0
    round_h: List[float] = field(default_factory=list)


def _check_shapes(X, A):
    if X.ndim != 2 or A.ndim != 2 or A.shape != (X.shape[1], X.shape[1]):
        raise ShapeMismatch(f"data {X.shape} and adjacency {A.shape} are incompatible")


def objective(X, A, lambda_):
    """(1/2n)|X(I - A)|_1 + lambda |A|_1 with elementwise L1 norms."""
    X = np.asarray(X, dtype=float)
    A = np.asarray(A, dtype=float)
    _check_shapes(X, A)
    n = X.shape[0]
    return float(np.abs(X - X @ A).sum() / (2 * n) + lambda_ * np.abs(A).sum())


def _abs_and_slope(M, smooth):
    if smooth > 0:
        a = np.abs(M)
        val = np.where(a <= smooth, M * M / (2 * smooth), a - smooth / 2)
        return val, np.clip(M / smooth, -1.0, 1.0)
    return np.abs(M), np.sign(M)


def objective_and_grad(X, A, lambda_, smooth=0.0):
    """Objective and its (sub)gradient in A.

    With ``smooth > 0`` every absolute value is replaced by a Huber function of that width,
    giving a differentiable surrogate whose gradient is exact.
    """
    n = X.shape[0]
    R = X - X @ A
    r_val, r_slope = _abs_and_slope(R, smooth)
    a_val, a_slope = _abs_and_slope(A, smooth)
    f = r_val.sum() / (2 * n) + lambda_ * a_val.sum()
    g = -(X.T @ r_slope) / (2 * n) + lambda_ * a_slope
    return float(f), g


def augmented_loss(X, A, lambda_, rho, alpha, smooth=0.0):
    """Objective + rho/2 h^2 + alpha h, with gradient."""
    f, g = objective_and_grad(X, A, lambda_, smooth)
    h, gh = acyclicity(A)
    return f + 0.5 * rho * h * h + alpha * h, g + (rho * h + alpha) * gh, h


def recover_root_causes(X, g):
    """Root-cause estimate X(I - A)."""
    A = g.weights if isinstance(g, WeightedDag) else np.asarray(g, dtype=float)
    X = np.asarray(X, dtype=float)
    _check_shapes(X, A)
    return X - X @ A


def _adam_round(X, A, cfg, rho, alpha, it0, trace, deadline=None):
    b1, b2, eps, lr = cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps, cfg.learning_rate
    d = A.shape[0]
    offdiag = 1.0 - np.eye(d)
    m = np.zeros_like(A)
    v = np.zeros_like(A)
    window_start = None
    n = X.shape[0]
    for t in range(1, cfg.max_inner + 1):
        h, gh = acyclicity(A)
        R = X - X @ A
        grad = -(X.T @ np.sign(R)) / (2 * n) + cfg.lambda_ * np.sign(A) + (rho * h + alpha) * gh
        grad *= offdiag
        if not np.isfinite(grad).all():
            raise NonFinite(it0 + t)
        logging = t % cfg.log_every == 0 or t == 1
        if logging or t % cfg.early_stop_window == 0:
            loss = np.abs(R).sum() / (2 * n) + cfg.lambda_ * np.abs(A).sum() + 0.5 * rho * h * h + alpha * h
            if not math.isfinite(loss):
                raise NonFinite(it0 + t)
        m = b1 * m + (1 - b1) * grad
        with np.errstate(over="ignore"):
            v = b2 * v + (1 - b2) * grad * grad
        if not np.isfinite(v).all():
            raise NonFinite(it0 + t, f"optimizer state overflowed at iteration {it0 + t}")
        mhat = m / (1 - b1 ** t)
        vhat = v / (1 - b2 ** t)
        A = A - lr * mhat / (np.sqrt(vhat) + eps)
        if logging:
            trace.append((it0 + t, loss, h, rho))
        if t % cfg.early_stop_window == 0:
            if deadline is not None and time.perf_counter() > deadline:
                raise SolverTimeout(it0 + t)
            if window_start is not None and abs(window_start - loss) <= cfg.early_stop_rtol * max(abs(window_start), 1e-300):
                break
            window_start = loss
    return A, it0 + t


def solve(X, cfg=None, timeout_s=None):
    """Learn a weighted DAG from data X (n samples by d nodes).

    ``timeout_s`` bounds wall-clock time; exceeding it raises SolverTimeout.
    """
    cfg = cfg or SolverConfig()
    cfg.validate()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ShapeMismatch(f"data must be a nonempty n x d matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NonFinite(0, "data contains non-finite values")
    start = time.perf_counter()
    deadline = None if timeout_s is None else start + timeout_s
    d = X.shape[1]
    A = np.zeros((d, d))
    rho, alpha = cfg.rho_init, 0.0
    h_prev = math.inf
    trace, round_h = [], []
    it = 0
    for _ in range(cfg.max_outer):
        A, it = _adam_round(X, A, cfg, rho, alpha, it, trace, deadline)
        h, _ = acyclicity(A)
        round_h.append(h)
        if h <= cfg.h_tol:
            break
        if cfg.penalty == "fixed":
            continue
        if h > 0.25 * h_prev:
            rho = min(rho * cfg.rho_mult, cfg.rho_max)
        alpha += rho * h
        h_prev = h
        if rho >= cfg.rho_max:
            break
    h_raw, _ = acyclicity(A)
    trace.append((it, objective(X, A, cfg.lambda_), h_raw, rho))
    W = threshold(A, cfg.omega)
    np.fill_diagonal(W, 0.0)
    W, removed = remove_cycles(W)
    return SolveResult(
        weights_raw=A,
        weights=WeightedDag(W),
        objective_trace=trace,
        runtime_seconds=time.perf_counter() - start,
        converged=bool(h_raw < cfg.h_tol),
        h_raw=h_raw,
        cycle_edges_removed=removed,
        round_h=round_h,
    )


def save_result(out_dir, res, cfg):
    """Write raw/thresholded adjacency CSVs, edge list, run log and a key=value summary."""
    io.ensure_dir(out_dir)
    io.write_matrix_csv(f"{out_dir}/adjacency_raw.csv", res.weights_raw)
    io.write_matrix_csv(f"{out_dir}/adjacency.csv", res.weights.weights)
    io.write_edge_list(f"{out_dir}/edges.txt", res.weights.weights)
    with open(f"{out_dir}/runlog.csv", "w") as f:
        f.write("iter,loss,h,rho\n")
        for it, loss, h, rho in res.objective_trace:
            f.write(f"{it},{loss!r},{h!r},{rho!r}\n")
    summary = {
        "runtime_s": res.runtime_seconds,
        "converged": res.converged,
        "h_raw": res.h_raw,
        "cycle_edges_removed": res.cycle_edges_removed,
        "num_edges": res.weights.num_edges,
    }
    summary.update({f"config.{k}": v for k, v in asdict(cfg).items()})
    io.write_keyvalue(f"{out_dir}/summary.txt", summary)
