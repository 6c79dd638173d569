"""
The constrained state in the energy picture
===========================================

Restricting Alice's arrival time to a window of length ``2d`` while
keeping the two arrivals simultaneous gives a state whose transform in
the summed energy is a sinc. Its zeros sit at ``E = k pi / d``.
"""

import numpy as np

from collapse_order import (
    TimeGrid,
    analytic_energy_rep,
    constrained_initial_state,
    energy_representation,
)

d = 1.0
grid = TimeGrid.for_window(d, n=4096)
state = constrained_initial_state(d, grid)
print(f"grid: n={grid.n}, dt={grid.dt:.5f}, span {grid.span:.3f}")
print(f"norm = {state.norm():.12f}")

E, phi = energy_representation(state)
exact = analytic_energy_rep(d, E)
band = np.abs(E) <= 100 * np.pi / d
err = np.linalg.norm(phi[band] - exact[band]) / np.linalg.norm(exact[band])
print(f"relative L2 error inside |E| <= 100 pi/d: {err:.2e}")

# Locate the first few zeros on the positive side.
mag = np.abs(phi)
pos = np.flatnonzero((E > 0) & (E < 5 * np.pi / d))
mins = [i for i in pos if mag[i] < mag[i - 1] and mag[i] < mag[i + 1]]
for k, i in enumerate(mins[:4], start=1):
    print(f"zero {k}: E={E[i]:.4f}  expected {k * np.pi / d:.4f}")
