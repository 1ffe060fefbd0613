"""A small benchmark sweep over the sample count, written as runs.csv + aggregate.csv + SVG.

The bundled presets are the full-size versions; this one is cut down so it runs in a
minute or two. The same thing from the shell:

    sparserc bench --config sweep_samples --out results/sweep_samples
"""
# %%
import csv
from dataclasses import replace

from sparserc.bench import load_preset, run_experiment

spec = load_preset("sweep_samples")
spec = replace(spec, repetitions=2, sweep=("data.n", [100, 1000]),
               graph=replace(spec.graph, d=10, edges_per_vertex=2))
out, rows = run_experiment(spec, "results/demo_sweep")

# %%
with open(f"{out}/aggregate.csv") as f:
    for r in csv.DictReader(f):
        if r["metric"] in ("shd", "tpr", "runtime_s"):
            print(r)
print("plots:", f"{out}/plots/shd.svg")
