"""Special-relativistic geometry of the two-observer biphoton experiment.

Natural units (c = 1) throughout. Alice sits at rest at ``x = -d``; Bob
passes the source at the origin at ``t = 0`` moving with speed ``beta``;
the source emits a photon pair at ``t_e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO

import numpy as np

from ._csvio import write_rows
from ._errors import DomainError, GridRangeError

__all__ = [
    "Frame",
    "Regime",
    "SpacetimeEvent",
    "ExperimentConfig",
    "EmissionWindow",
    "OrderingReport",
    "Polyline",
    "gamma",
    "boost_interval",
    "inverse_boost_interval",
    "paradox_condition",
    "emission_window",
    "measurement_events",
    "delta_t_paper_model",
    "default_tolerance",
    "classify_ordering",
    "worldline_diagram",
    "write_diagram_csv",
]


class Frame(str, Enum):
    LAB = "Lab"
    BOB = "Bob"


class Regime(str, Enum):
    BOB_FIRST_BOTH = "BobFirstBoth"
    PARADOX = "Paradox"
    ALICE_FIRST_BOTH = "AliceFirstBoth"
    BOUNDARY = "Boundary"


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not (0.0 <= beta < 1.0):
        raise DomainError(f"beta must lie in [0, 1), got {beta!r}")
    return beta


def gamma(beta: float) -> float:
    """Lorentz factor ``1/sqrt(1 - beta**2)`` for ``0 <= beta < 1``."""
    beta = _check_beta(beta)
    return 1.0 / math.sqrt((1.0 - beta) * (1.0 + beta))


def boost_interval(delta_t: float, delta_x: float, beta: float) -> tuple[float, float]:
    """Coordinates of an interval as seen from a frame moving at ``+beta``.

    Returns ``(dt', dx')`` with ``dt' = g (dt - beta dx)`` and
    ``dx' = g (dx - beta dt)``.
    """
    g = gamma(beta)
    return g * (delta_t - beta * delta_x), g * (delta_x - beta * delta_t)


def inverse_boost_interval(delta_t_prime: float, delta_x_prime: float, beta: float) -> tuple[float, float]:
    """Undo :func:`boost_interval` (a boost by ``-beta``)."""
    g = gamma(beta)
    return g * (delta_t_prime + beta * delta_x_prime), g * (delta_x_prime + beta * delta_t_prime)


def paradox_condition(delta_t: float, d: float, beta: float) -> bool:
    """True when a boost at ``beta`` reverses a lab-frame lead of ``delta_t``
    across a detector separation of ``2 d``."""
    return beta * (2.0 * d) > delta_t


@dataclass(frozen=True)
class SpacetimeEvent:
    x: float
    t: float
    frame: Frame = Frame.LAB

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.t)):
            raise DomainError(f"event coordinates must be finite, got ({self.x}, {self.t})")
        object.__setattr__(self, "frame", Frame(self.frame))

    def to_bob_frame(self, beta: float) -> "SpacetimeEvent":
        """Coordinates in Bob's frame; both frames share the origin."""
        if self.frame is not Frame.LAB:
            raise DomainError("event is already in Bob's frame")
        t_p, x_p = boost_interval(self.t, self.x, beta)
        return SpacetimeEvent(x_p, t_p, Frame.BOB)


@dataclass(frozen=True)
class ExperimentConfig:
    """One scenario: Alice's distance ``d``, Bob's speed ``beta``, emission time ``t_e``."""

    d: float
    beta: float
    t_e: float

    def __post_init__(self):
        for name in ("d", "beta", "t_e"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.d <= 0:
            raise DomainError(f"d must be positive, got {self.d!r}")
        if not (0.0 < self.beta < 1.0):
            raise DomainError(f"scenario beta must lie in (0, 1), got {self.beta!r}")
        if self.t_e < 0:
            raise DomainError(f"t_e must be non-negative, got {self.t_e!r}")


@dataclass(frozen=True)
class EmissionWindow:
    t_e_min: float
    t_e_max: float
    width: float

    def contains(self, t_e: float, margin: float = 0.0) -> bool:
        return self.t_e_min + margin < t_e < self.t_e_max - margin


def emission_window(d: float, beta: float) -> EmissionWindow:
    """Emission times for which Alice and Bob disagree on who measured first.

    ``t_e_min = d (1/beta - 1)`` puts Bob level with Alice's distance when
    both detect; ``t_e_max = d (1/beta + 1)`` makes the detections
    simultaneous in Bob's frame. The width is ``2 d`` for every ``beta``.
    """
    if d <= 0:
        raise DomainError(f"d must be positive, got {d!r}")
    beta = _check_beta(beta)
    if beta == 0.0:
        raise DomainError("emission window diverges at beta = 0")
    inv = 1.0 / beta
    return EmissionWindow(t_e_min=d * (inv - 1.0), t_e_max=d * (inv + 1.0), width=2.0 * d)


def measurement_events(cfg: ExperimentConfig) -> tuple[SpacetimeEvent, SpacetimeEvent]:
    """Lab-frame detection events ``(alice, bob)``.

    Bob's event is where the right-moving photon ``x = t - t_e`` meets his
    worldline ``x = beta t``.
    """
    alice = SpacetimeEvent(-cfg.d, cfg.t_e + cfg.d)
    t_b = cfg.t_e / (1.0 - cfg.beta)
    bob = SpacetimeEvent(cfg.beta * t_b, t_b)
    return alice, bob


def delta_t_paper_model(delta_t: float, d: float, beta: float) -> float:
    """Boosted time difference using the separation ``dx = 2 d + beta dt``.

    This closed form is only equal to the exact boost of the two detection
    events when Bob is at ``x = d`` as Alice detects (``t_e = t_e_min``).
    """
    g = gamma(beta)
    return g * (delta_t * (1.0 - beta * beta) - 2.0 * beta * d)


def default_tolerance(d: float) -> float:
    return 1e-9 * (2.0 * d)


@dataclass(frozen=True)
class OrderingReport:
    delta_t_lab: float
    delta_t_bob_exact: float
    delta_t_bob_paper: float
    regime: Regime
    tol: float


def classify_ordering(cfg: ExperimentConfig, tol: float | None = None) -> OrderingReport:
    """Which observer measures first, in each frame.

    Positive differences mean Alice first (``t_B - t_A > 0``).
    """
    if tol is None:
        tol = default_tolerance(cfg.d)
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    alice, bob = measurement_events(cfg)
    dt_lab = bob.t - alice.t
    dt_bob, _ = boost_interval(dt_lab, bob.x - alice.x, cfg.beta)
    dt_paper = delta_t_paper_model(dt_lab, cfg.d, cfg.beta)

    if dt_lab > tol and dt_bob < -tol:
        regime = Regime.PARADOX
    elif dt_lab < -tol and dt_bob < -tol:
        regime = Regime.BOB_FIRST_BOTH
    elif dt_lab > tol and dt_bob > tol:
        regime = Regime.ALICE_FIRST_BOTH
    else:
        regime = Regime.BOUNDARY
    return OrderingReport(dt_lab, dt_bob, dt_paper, regime, tol)


@dataclass(frozen=True)
class Polyline:
    """A labeled set of ``(x, t)`` vertices; ``points`` has shape ``(k, 2)``."""

    series: str
    label: str
    points: np.ndarray


def worldline_diagram(cfg: ExperimentConfig, t_max: float) -> list[Polyline]:
    """Plot-ready worldlines for the scenario up to lab time ``t_max``.

    Series: ``alice``, ``bob``, ``source``, ``photon_alice``, ``photon_bob``
    (each from emission to detection) and ``events`` (emission plus the two
    detections, one point per label).
    """
    alice, bob = measurement_events(cfg)
    if not t_max > max(alice.t, bob.t):
        raise GridRangeError(
            f"t_max={t_max!r} must exceed both measurement times ({alice.t!r}, {bob.t!r})"
        )
    d, beta, t_e = cfg.d, cfg.beta, cfg.t_e
    lines = [
        Polyline("alice", "Alice worldline", np.array([[-d, 0.0], [-d, t_max]])),
        Polyline("bob", "Bob worldline", np.array([[0.0, 0.0], [beta * t_max, t_max]])),
        Polyline("source", "source worldline", np.array([[0.0, 0.0], [0.0, t_max]])),
        Polyline("photon_alice", "photon to Alice", np.array([[0.0, t_e], [alice.x, alice.t]])),
        Polyline("photon_bob", "photon to Bob", np.array([[0.0, t_e], [bob.x, bob.t]])),
        Polyline("events", "emission", np.array([[0.0, t_e]])),
        Polyline("events", "alice_measurement", np.array([[alice.x, alice.t]])),
        Polyline("events", "bob_measurement", np.array([[bob.x, bob.t]])),
    ]
    return lines


DIAGRAM_HEADER = ("series", "label", "x", "t")


def write_diagram_csv(lines: list[Polyline], dest: str | IO[str] | None = None) -> str:
    rows = [
        (pl.series, pl.label, float(x), float(t)) for pl in lines for x, t in pl.points
    ]
    return write_rows(dest, DIAGRAM_HEADER, rows)
