"""
Emission times that reverse the measurement order
=================================================

Alice sits at ``x = -d`` at rest. Bob starts at the source and moves
away at speed ``beta``. Photons leave the source at ``t_e``. For some
emission times Alice measures first in the lab while Bob, in his own
frame, sees his measurement first.
"""

import numpy as np

from collapse_order import ExperimentConfig, classify_ordering, emission_window

d, beta = 1.0, 0.5
w = emission_window(d, beta)
print(f"window for d={d}, beta={beta}: [{w.t_e_min:.4f}, {w.t_e_max:.4f}], width {w.width:.4f}")

# The width is 2d for every speed, only the position moves.
for b in (0.1, 0.3, 0.6, 0.9):
    wb = emission_window(d, b)
    print(f"  beta={b:.1f}  t_min={wb.t_e_min:8.4f}  t_max={wb.t_e_max:8.4f}  width={wb.width:.4f}")

# Scan emission times across the window and watch the regime change.
for t_e in np.linspace(0.0, 5.0, 11):
    rep = classify_ordering(ExperimentConfig(d=d, beta=beta, t_e=t_e))
    print(f"t_e={t_e:4.1f}  dt_lab={rep.delta_t_lab:+8.4f}  dt_bob={rep.delta_t_bob_exact:+8.4f}  {rep.regime.value}")
