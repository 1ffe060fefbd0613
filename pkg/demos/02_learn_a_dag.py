"""Generate few-root-causes data on a random DAG and learn the DAG back."""
# %%
import numpy as np

from sparserc import (DataGenConfig, GraphGenConfig, SolverConfig, audit_frc, generate_dataset,
                      generate_random_dag, recover_root_causes, solve)
from sparserc.bench import evaluate

g = generate_random_dag(GraphGenConfig(d=20, edges_per_vertex=4, seed=0))
ds = generate_dataset(g, DataGenConfig(p=0.1, n=1000, sigma=0.01, seed=1))
print(f"{g.num_edges} edges, data {ds.x.shape}")

# the data really has few root causes (strict check on the realized matrices)
audit = audit_frc(ds.root_causes, g)
print(f"sparsity {audit.sparsity_ratio:.4f}, noise ratio {audit.noise_ratio:.4f}")

# %% takes ~15 s on one core
res = solve(ds.x, SolverConfig())
print(f"learned {res.weights.num_edges} edges in {res.runtime_seconds:.1f}s, "
      f"h before thresholding {res.h_raw:.1e}")

# %%
report = evaluate(res.weights.weights, g.weights, X=ds.x,
                  c_est=recover_root_causes(ds.x, res.weights), c_true=ds.root_causes.c)
for k in ("shd", "sid", "tpr", "fpr", "nmse_weights", "c_tpr", "c_fpr", "c_nmse", "varsortability"):
    print(f"{k:>15}: {getattr(report, k)}")

# %% convergence: loss and h every 100 Adam steps
trace = np.array(res.objective_trace)
print(trace[::10])
