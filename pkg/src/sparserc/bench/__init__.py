"""Benchmark harness and command-line interface."""

from .config import ExperimentSpec, load_preset, load_spec, preset_names, repetition_seed, splitmix64
from .experiment import evaluate, run_experiment, run_external

__all__ = ["ExperimentSpec", "load_preset", "load_spec", "preset_names", "repetition_seed",
           "splitmix64", "evaluate", "run_experiment", "run_external"]
