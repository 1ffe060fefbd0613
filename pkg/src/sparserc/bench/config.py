"""Experiment specifications and their TOML form."""

import dataclasses
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..datagen import DataGenConfig, NoiseDist
from ..errors import InvalidConfig
from ..graph import GraphGenConfig, GraphType
from ..solver import SolverConfig

MASK64 = (1 << 64) - 1


def splitmix64(x):
    """SplitMix64 finalizer; a fixed 64-bit mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def repetition_seed(base_seed, rep):
    return splitmix64((base_seed & MASK64) ^ splitmix64(rep))


@dataclass
class ExperimentSpec:
    name: str
    graph: GraphGenConfig
    data: DataGenConfig = field(default_factory=DataGenConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    repetitions: int = 5
    sweep: Optional[tuple] = None  # (parameter path such as "data.n", list of values)
    run_l0_oracle: bool = False
    output_dir: str = "results"
    seed: int = 0
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    timeout_s: float = 600.0

    def validate(self):
        if self.repetitions < 1:
            raise InvalidConfig("repetitions must be at least 1")
        if self.sweep is not None:
            path, values = self.sweep
            if not values:
                raise InvalidConfig("sweep values must be nonempty")
            section, _, key = path.partition(".")
            if section not in ("graph", "data", "solver") or not key:
                raise InvalidConfig(f"sweep parameter must look like 'data.n', got {path!r}")
            if key not in {f.name for f in dataclasses.fields(getattr(self, section))}:
                raise InvalidConfig(f"unknown sweep parameter {path!r}")
        if self.jobs < 1:
            raise InvalidConfig("jobs must be at least 1")
        self.graph.validate()
        self.data.validate()
        self.solver.validate()

    @property
    def l0_enabled(self):
        return self.run_l0_oracle and self.graph.d <= 5

    def with_param(self, path, value):
        section, _, key = path.partition(".")
        return replace(self, **{section: replace(getattr(self, section), **{key: value})})


_SOLVER_ALIASES = {"lambda": "lambda_"}


def _build(cls, table, aliases=None, section=""):
    aliases = aliases or {}
    names = {f.name for f in dataclasses.fields(cls)}
    kw = {}
    for k, v in table.items():
        name = aliases.get(k, k)
        if name not in names:
            raise InvalidConfig(f"unknown key {section}.{k}")
        kw[name] = v
    return cls(**kw)


def spec_from_dict(doc, scale=None):
    try:
        graph = dict(doc.get("graph", {}))
        if "graph_type" in graph:
            graph["graph_type"] = GraphType(graph["graph_type"])
        if "weight_range" in graph:
            graph["weight_range"] = tuple(graph["weight_range"])
        graph.setdefault("d", 20)
        if scale is not None:
            graph["d"] = int(graph["d"]) * int(scale)
        data = dict(doc.get("data", {}))
        if "noise_dist" in data:
            data["noise_dist"] = NoiseDist(data["noise_dist"])
        sweep = None
        if "sweep" in doc:
            sweep = (doc["sweep"]["parameter"], list(doc["sweep"]["values"]))
        spec = ExperimentSpec(
            name=doc.get("name", "experiment"),
            graph=_build(GraphGenConfig, graph, section="graph"),
            data=_build(DataGenConfig, data, section="data"),
            solver=_build(SolverConfig, doc.get("solver", {}), _SOLVER_ALIASES, "solver"),
            repetitions=int(doc.get("repetitions", 5)),
            sweep=sweep,
            run_l0_oracle=bool(doc.get("run_l0_oracle", False)),
            output_dir=doc.get("output_dir", "results"),
            seed=int(doc.get("seed", 0)),
            jobs=int(doc.get("jobs", os.cpu_count() or 1)),
            timeout_s=float(doc.get("timeout_s", 600.0)),
        )
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, InvalidConfig):
            raise
        raise InvalidConfig(f"bad experiment config: {exc}") from exc
    spec.validate()
    return spec


def load_spec(path, scale=None):
    try:
        with open(path, "rb") as f:
            doc = tomllib.load(f)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"{path}: {exc}") from exc
    return spec_from_dict(doc, scale)


def preset_names():
    files = resources.files("sparserc.bench").joinpath("presets").iterdir()
    return sorted(p.name[:-5] for p in files if p.name.endswith(".toml"))


def load_preset(name, scale=None):
    ref = resources.files("sparserc.bench").joinpath("presets", f"{name}.toml")
    if not ref.is_file():
        raise InvalidConfig(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    doc = tomllib.loads(ref.read_text())
    return spec_from_dict(doc, scale)


def resolve_config(path_or_preset, scale=None):
    if os.path.exists(path_or_preset):
        return load_spec(path_or_preset, scale)
    return load_preset(path_or_preset, scale)
