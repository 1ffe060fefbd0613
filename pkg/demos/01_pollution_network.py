"""River pollution as a linear SEM with two sources.

Six cities A..F sit on a river; edge weights are the fraction of pollution carried
downstream. Two cities pollute, and every measurement downstream mixes them.
"""
# %%
import numpy as np

from sparserc import RootCauses, WeightedDag, recover_root_causes, synthesize, transitive_closure

names = "ABCDEF"
W = np.zeros((6, 6))
for (u, v), w in {("A", "B"): 0.5, ("A", "C"): 0.5, ("B", "D"): 0.8,
                  ("C", "D"): 0.3, ("D", "E"): 0.7, ("D", "F"): 0.1}.items():
    W[names.index(u), names.index(v)] = w
g = WeightedDag(W)

# %% the closure says how much of a unit at i ends up at j, over every path
closure = transitive_closure(g)
for i, j in zip(*np.nonzero(closure)):
    print(f"{names[i]} -> {names[j]}: {closure[i, j]:.3f}")

# %% A dumps 3 units, D dumps 5; no noise
c = np.array([[3.0, 0, 0, 5, 0, 0]])
x = synthesize(g, RootCauses(c, np.zeros_like(c), np.zeros_like(c))).x
print("measured:", np.round(x[0], 3))

# %% undo the propagation: X(I - A) gives back the two sources
print("root causes:", np.round(recover_root_causes(x, g)[0], 12) + 0.0)
