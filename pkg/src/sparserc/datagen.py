"""Data from linear SEMs driven by few root causes, plus an audit of the few-root-causes condition."""

import math
import warnings
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Optional

import numpy as np

from . import io
from .errors import InvalidConfig, ShapeMismatch
from .graph import WeightedDag, transitive_closure


class NoiseDist(str, Enum):
    GAUSS = "gauss"
    GUMBEL = "gumbel"


@dataclass(frozen=True)
class DataGenConfig:
    p: float = 0.1
    n: int = 1000
    noise_dist: NoiseDist = NoiseDist.GAUSS
    sigma: float = 0.01
    fixed_support: bool = False
    standardize: bool = False
    seed: int = 0

    def validate(self):
        if not (0 <= self.p < 1):
            raise InvalidConfig(f"p must lie in [0, 1), got {self.p}")
        if self.sigma < 0:
            raise InvalidConfig(f"sigma must be nonnegative, got {self.sigma}")
        if self.n < 1:
            raise InvalidConfig(f"n must be at least 1, got {self.n}")
        if not (0 <= self.seed < 2**64):
            raise InvalidConfig("seed must be an unsigned 64-bit integer")
        NoiseDist(self.noise_dist)


@dataclass(frozen=True, eq=False)
class RootCauses:
    c: np.ndarray
    noise_c: np.ndarray
    noise_x: np.ndarray

    def __post_init__(self):
        if not (self.c.shape == self.noise_c.shape == self.noise_x.shape):
            raise ShapeMismatch(
                f"root cause and noise shapes differ: {self.c.shape}, "
                f"{self.noise_c.shape}, {self.noise_x.shape}")

    @property
    def shape(self):
        return self.c.shape


@dataclass(eq=False)
class Dataset:
    x: np.ndarray
    ground_truth: Optional[WeightedDag] = None
    root_causes: Optional[RootCauses] = None
    gen_config: Optional[DataGenConfig] = None
    zero_variance_columns: list = field(default_factory=list)

    def __post_init__(self):
        if self.ground_truth is not None and self.ground_truth.d != self.x.shape[1]:
            raise ShapeMismatch(
                f"ground truth has d={self.ground_truth.d} but data has {self.x.shape[1]} columns")


@dataclass(frozen=True)
class FrcAudit:
    sparsity_ratio: float
    noise_ratio: float
    epsilon: float
    delta: float
    passes: bool


def _noise(rng, dist, sigma, shape):
    if sigma == 0:
        return np.zeros(shape)
    if NoiseDist(dist) is NoiseDist.GAUSS:
        return rng.normal(0.0, sigma, size=shape)
    # centred Gumbel with standard deviation sigma
    scale = sigma * math.sqrt(6.0) / math.pi
    return rng.gumbel(-scale * np.euler_gamma, scale, size=shape)


def sample_root_causes(g, cfg):
    """Draw C (Bernoulli(p) support, Uniform(0, 1] values) and dense noise N_c, N_x."""
    cfg.validate()
    n, d = cfg.n, g.d
    ss = np.random.SeedSequence(cfg.seed)
    rng_c, rng_nc, rng_nx = (np.random.default_rng(s) for s in ss.spawn(3))
    if cfg.fixed_support:
        support = np.broadcast_to(rng_c.random(d) < cfg.p, (n, d))
    else:
        support = rng_c.random((n, d)) < cfg.p
    # 1 - U maps [0, 1) onto (0, 1] so a selected root cause is never exactly zero
    values = 1.0 - rng_c.random((n, d))
    c = np.where(support, values, 0.0)
    return RootCauses(
        c=c,
        noise_c=_noise(rng_nc, cfg.noise_dist, cfg.sigma, (n, d)),
        noise_x=_noise(rng_nx, cfg.noise_dist, cfg.sigma, (n, d)),
    )


def synthesize(g, rc, standardize=False, gen_config=None):
    """X = (C + N_c)(I + closure(A)) + N_x, optionally scaled to unit column variance."""
    if rc.shape[1] != g.d:
        raise ShapeMismatch(f"root causes have {rc.shape[1]} columns, graph has d={g.d}")
    d = g.d
    X = (rc.c + rc.noise_c) @ (np.eye(d) + transitive_closure(g)) + rc.noise_x
    flat = []
    if standardize:
        std = X.std(axis=0)
        flat = [int(j) for j in np.flatnonzero(std == 0)]
        if flat:
            warnings.warn(f"columns {flat} have zero variance and were left unscaled")
        X = X / np.where(std == 0, 1.0, std)
    return Dataset(x=X, ground_truth=g, root_causes=rc, gen_config=gen_config,
                   zero_variance_columns=flat)


def generate_dataset(g, cfg):
    return synthesize(g, sample_root_causes(g, cfg), cfg.standardize, gen_config=cfg)


def audit_frc(rc, g, epsilon=0.1, delta=0.1):
    """Evaluate both few-root-causes ratios on the realized matrices.

    If C has no nonzero entry the noise ratio is undefined; it is reported as NaN
    and the audit fails.
    """
    n, d = rc.shape
    if g.d != d:
        raise ShapeMismatch(f"root causes have {d} columns, graph has d={g.d}")
    nnz = np.count_nonzero(rc.c)
    sparsity = nnz / (n * d)
    if nnz == 0:
        return FrcAudit(sparsity, math.nan, epsilon, delta, False)
    residual = rc.noise_c + rc.noise_x @ (np.eye(d) - g.weights)
    mean_noise = np.abs(residual).sum() / (n * d)
    mean_cause = np.abs(rc.c).sum() / nnz
    noise = mean_noise / mean_cause
    return FrcAudit(sparsity, noise, epsilon, delta, bool(sparsity < epsilon and noise < delta))


def expected_frc_bounds(d, p, sigma, avg_degree):
    """Analytic expectations of the two few-root-causes ratios for Gaussian noise.

    E|N| = sigma*sqrt(2/pi) per entry (folded normal). N_c contributes one such term and
    N_x(I - A) at most avg_degree + 1, while a nonzero root cause has mean magnitude 0.5.
    Returns ``(expected_sparsity, expected_noise_bound)``.
    """
    if d < 1 or not (0 <= p < 1) or sigma < 0 or avg_degree < 0:
        raise InvalidConfig("need d >= 1, 0 <= p < 1, sigma >= 0, avg_degree >= 0")
    noise_bound = (avg_degree + 2) * sigma * math.sqrt(2 / math.pi) / 0.5
    return p, noise_bound


def save_dataset(path, ds, extra=None):
    """Write X as headerless CSV plus a ``<path>.meta`` key=value sidecar."""
    io.write_matrix_csv(path, ds.x)
    meta = {"n": ds.x.shape[0], "d": ds.x.shape[1]}
    if ds.gen_config is not None:
        for f in fields(ds.gen_config):
            v = getattr(ds.gen_config, f.name)
            meta[f.name] = v.value if isinstance(v, Enum) else v
    if ds.zero_variance_columns:
        meta["zero_variance_columns"] = ds.zero_variance_columns
    meta.update(extra or {})
    io.write_keyvalue(str(path) + ".meta", meta)


def config_from_meta(meta):
    kw = {}
    for f in fields(DataGenConfig):
        if f.name not in meta:
            continue
        v = meta[f.name]
        if f.name in ("n", "seed"):
            v = int(v)
        elif f.name in ("p", "sigma"):
            v = float(v)
        elif f.name in ("fixed_support", "standardize"):
            v = v == "true"
        elif f.name == "noise_dist":
            v = NoiseDist(v)
        kw[f.name] = v
    return DataGenConfig(**kw)


def config_dict(cfg):
    return {k: (v.value if isinstance(v, Enum) else v) for k, v in asdict(cfg).items()}
