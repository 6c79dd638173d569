"""
Worldlines and the two detection events
=======================================

The diagram data is a set of polylines in the lab frame. Each event
can also be viewed from Bob's frame.
"""

from collapse_order import ExperimentConfig, measurement_events, worldline_diagram

cfg = ExperimentConfig(d=1.0, beta=0.5, t_e=1.5)
alice, bob = measurement_events(cfg)
print("lab frame:")
print(f"  Alice measures at x={alice.x:+.4f}, t={alice.t:.4f}")
print(f"  Bob measures at   x={bob.x:+.4f}, t={bob.t:.4f}")

a_b, b_b = alice.to_bob_frame(cfg.beta), bob.to_bob_frame(cfg.beta)
print("Bob's frame:")
print(f"  Alice at t'={a_b.t:.4f}, Bob at t'={b_b.t:.4f}")
print("  Bob is first" if b_b.t < a_b.t else "  Alice is first")

diagram = worldline_diagram(cfg, t_max=6.0)
for line in diagram:
    x, t = line.points.T
    print(f"{line.series:>13} {line.label:>18}: {len(t)} vertices, t from {t.min():.3f} to {t.max():.3f}")

# Plotting is optional; the data is plain arrays.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for line in diagram:
        x, t = line.points.T
        ax.plot(x, t, "o" if len(t) == 1 else "-", label=line.label)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.legend()
    fig.savefig("worldlines.png")
    print("saved worldlines.png")
