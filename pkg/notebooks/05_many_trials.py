"""
Repeated trials
===============

Each trial picks a branch of the projected state and draws arrival
times. The run is fixed by its seed, and using more threads gives the
same numbers.
"""

import numpy as np

from collapse_order import ExperimentConfig, ProjectionParams, run_trials

cfg = ExperimentConfig(d=1.0, beta=0.5, t_e=2.0)
p = ProjectionParams(beta=0.5, t_0=2.0)

stats, batch = run_trials(cfg, p, n=100_000, seed=7, return_batch=True)
z = (stats.delta_fraction - stats.delta_probability) / stats.delta_se
print(f"sharp-branch fraction {stats.delta_fraction:.4f} vs {stats.delta_probability:.4f} (z={z:+.2f})")
print(f"var(t_A): sampled {stats.empirical_var_tA:.4f} +/- {stats.var_se:.4f}, grid {stats.var_tA_numeric:.4f}")
print(f"fraction of trials whose order flips in Bob's frame: {stats.flip_fraction:.4f}")

again = run_trials(cfg, p, n=100_000, seed=7, workers=4, return_batch=True)[1]
print("threaded run identical:", np.array_equal(batch.t_A, again.t_A) and np.array_equal(batch.t_B, again.t_B))

counts, edges = np.histogram(batch.t_A[~batch.is_delta], bins=8)
for c, lo, hi in zip(counts, edges[:-1], edges[1:]):
    print(f"  [{lo:.3f}, {hi:.3f})  {'#' * int(60 * c / counts.max())}")
