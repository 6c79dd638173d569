"""Discretized two-photon states in the time (arrival-time) representation.

A bipartite amplitude ``psi(t_A, t_B)`` is stored as a weighted sum of
branches over a shared :class:`TimeGrid`:

* :class:`DiagonalBranch` -- ``g(t_A) delta(t_A - t_B)``, the delta kept
  on-grid as a Kronecker spike of height ``1/sqrt(dt)``;
* :class:`ProductBranch` -- ``f_A(t_A) f_B(t_B)``.

Inner products use the grid measure, ``<u, v> = sum(conj(u) v) dt`` per
axis, so a Kronecker spike ``1/sqrt(dt)`` has unit norm. Memory stays
``O(n)`` per branch; :meth:`DiscretizedState.to_dense` builds the full
``n x n`` matrix for small grids as a cross-check.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import IO, Literal, Union

import numpy as np

from ._csvio import write_rows
from ._errors import (
    DomainError,
    DomainWarning,
    GridRangeError,
    ParameterError,
    StateError,
    UnsupportedStateError,
)

logger = logging.getLogger(__name__)

__all__ = [
    "TimeGrid",
    "ConstraintWindow",
    "DiagonalBranch",
    "ProductBranch",
    "DiscretizedState",
    "ProjectionParams",
    "pi_window",
    "window_profile",
    "constrained_initial_state",
    "analytic_energy_rep",
    "energy_representation",
    "project_bob",
    "time_marginal_variance",
    "sigma_t_paper",
    "write_state_csv",
    "write_marginals_csv",
]

DENSE_LIMIT = 256


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TimeGrid:
    """``n`` samples ``t_start + k*dt``; the span is ``[t_start, t_start + n*dt)``."""

    n: int
    t_start: float
    dt: float

    def __post_init__(self):
        n = int(self.n)
        if n < 16 or n & (n - 1):
            raise ParameterError(f"grid size must be a power of two >= 16, got {self.n!r}")
        if not self.dt > 0:
            raise ParameterError(f"dt must be positive, got {self.dt!r}")
        object.__setattr__(self, "n", n)

    @classmethod
    def spanning(cls, t_lo: float, t_hi: float, n: int) -> "TimeGrid":
        return cls(n, float(t_lo), (t_hi - t_lo) / n)

    @classmethod
    def for_window(cls, d: float, t_w: float | None = None, n: int = 1024) -> "TimeGrid":
        """Grid over ``[t_w - 2d, t_w + 4d)`` for a window starting at ``t_w``."""
        if t_w is None:
            t_w = d
        return cls.spanning(t_w - 2.0 * d, t_w + 4.0 * d, n)

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.n)

    @property
    def t_stop(self) -> float:
        return self.t_start + self.n * self.dt

    @property
    def span(self) -> float:
        return self.n * self.dt

    def index_of(self, t: float) -> int:
        return int(round((t - self.t_start) / self.dt))


@dataclass(frozen=True)
class ConstraintWindow:
    """Unit-norm rectangle of height ``1/sqrt(2d)`` on ``(t_w, t_w + 2d)``."""

    d: float
    t_w: float

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError(f"d must be positive, got {self.d!r}")

    @classmethod
    def paper_default(cls, d: float) -> "ConstraintWindow":
        return cls(d, d)

    @property
    def width(self) -> float:
        return 2.0 * self.d

    @property
    def height(self) -> float:
        return 1.0 / math.sqrt(2.0 * self.d)

    @property
    def t_end(self) -> float:
        return self.t_w + self.width

    @property
    def center(self) -> float:
        return self.t_w + self.d


def pi_window(t, w: ConstraintWindow):
    """Pointwise window value; zero at and outside the open interval's ends."""
    t = np.asarray(t, dtype=float)
    out = np.where((t > w.t_w) & (t < w.t_end), w.height, 0.0)
    return out if out.ndim else float(out)


def window_profile(grid: TimeGrid, w: ConstraintWindow) -> np.ndarray:
    """Cell averages of the window over ``[t_k - dt/2, t_k + dt/2]``.

    Interior cells equal ``height``; the two edge cells carry the covered
    fraction. This keeps the first moments and the low-frequency spectrum
    of the continuous rectangle to ``O(dt^2)``.
    """
    t = grid.t
    lo = np.maximum(t - 0.5 * grid.dt, w.t_w)
    hi = np.minimum(t + 0.5 * grid.dt, w.t_end)
    frac = np.clip((hi - lo) / grid.dt, 0.0, 1.0)
    return w.height * frac


@dataclass(frozen=True)
class DiagonalBranch:
    g: np.ndarray
    weight: complex = 1.0
    label: str = "diagonal"

    kind = "diagonal"

    def __post_init__(self):
        object.__setattr__(self, "g", _frozen(self.g))
        object.__setattr__(self, "weight", complex(self.weight))

    def norm2(self, dt: float) -> float:
        return float(np.sum(np.abs(self.g) ** 2) * dt)


@dataclass(frozen=True)
class ProductBranch:
    f_a: np.ndarray
    f_b: np.ndarray
    weight: complex = 1.0
    label: str = "product"

    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "f_a", _frozen(self.f_a))
        object.__setattr__(self, "f_b", _frozen(self.f_b))
        object.__setattr__(self, "weight", complex(self.weight))

    def norm2(self, dt: float) -> float:
        return float(np.sum(np.abs(self.f_a) ** 2) * dt * np.sum(np.abs(self.f_b) ** 2) * dt)


Branch = Union[DiagonalBranch, ProductBranch]


def _inner(u: np.ndarray, v: np.ndarray, dt: float) -> complex:
    return complex(np.vdot(u, v) * dt)


def _branch_overlap(bk: Branch, bl: Branch, dt: float) -> complex:
    """``<b_k | b_l>`` on the grid, excluding the branch weights."""
    if isinstance(bk, ProductBranch) and isinstance(bl, ProductBranch):
        return _inner(bk.f_a, bl.f_a, dt) * _inner(bk.f_b, bl.f_b, dt)
    if isinstance(bk, DiagonalBranch) and isinstance(bl, DiagonalBranch):
        return _inner(bk.g, bl.g, dt)
    if isinstance(bk, DiagonalBranch):
        return complex(np.sum(np.conj(bk.g) * bl.f_a * bl.f_b) * dt**1.5)
    return np.conj(_branch_overlap(bl, bk, dt))


def _gram(branches, dt: float) -> np.ndarray:
    k = len(branches)
    G = np.empty((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            G[i, j] = _branch_overlap(branches[i], branches[j], dt)
    return G


@dataclass(frozen=True)
class DiscretizedState:
    """Immutable normalized state; ``norm_raw`` is the norm before rescaling."""

    grid: TimeGrid
    branches: tuple
    norm_raw: float
    renormalized: bool
    window: ConstraintWindow
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, grid: TimeGrid, window: ConstraintWindow, branches, meta=None) -> "DiscretizedState":
        """Normalize ``branches`` (weights as given are the raw amplitudes)."""
        branches = tuple(branches)
        if not branches:
            raise StateError("a state needs at least one branch")
        w = np.array([b.weight for b in branches])
        G = _gram(branches, grid.dt)
        norm_raw = float(np.real(np.conj(w) @ G @ w))
        if not norm_raw > 0:
            raise StateError("state has zero norm")
        scale = 1.0 / math.sqrt(norm_raw)
        scaled = tuple(_with_weight(b, b.weight * scale) for b in branches)
        meta = dict(meta or {})
        meta.setdefault("raw_weights", {b.label: b.weight for b in branches})
        return cls(grid, scaled, norm_raw, True, window, meta)

    def branch(self, label: str) -> Branch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [b.label for b in self.branches]

    def norm(self) -> float:
        w = np.array([b.weight for b in self.branches])
        return float(np.real(np.conj(w) @ _gram(self.branches, self.grid.dt) @ w))

    def branch_probabilities(self) -> dict[str, float]:
        """Incoherent branch weights ``|w_k|^2 ||b_k||^2``, normalized to sum 1.

        They differ from the coherent split only by the branch overlap,
        which for the spike/window pair is ``O(dt)``.
        """
        dt = self.grid.dt
        raw = {b.label: abs(b.weight) ** 2 * b.norm2(dt) for b in self.branches}
        total = sum(raw.values())
        return {k: v / total for k, v in raw.items()}

    def marginal(self, axis: Literal["A", "B"] = "A") -> np.ndarray:
        """Probability density of ``t_A`` (or ``t_B``) on the grid.

        Exact for the branch sum, interference included; sums to
        ``norm() / dt``.
        """
        if axis not in ("A", "B"):
            raise ValueError(f"axis must be 'A' or 'B', got {axis!r}")
        dt = self.grid.dt
        n = self.grid.n
        k = len(self.branches)
        coef = np.empty((k, n), dtype=complex)
        other = []
        for i, b in enumerate(self.branches):
            if isinstance(b, DiagonalBranch):
                coef[i] = b.weight * b.g / math.sqrt(dt)
                other.append(None)
            else:
                f_here, f_other = (b.f_a, b.f_b) if axis == "A" else (b.f_b, b.f_a)
                coef[i] = b.weight * f_here
                other.append(f_other)
        p = np.zeros(n)
        for i in range(k):
            for j in range(k):
                vi, vj = other[i], other[j]
                if vi is None and vj is None:
                    gram = dt
                elif vi is None:
                    gram = vj * dt
                elif vj is None:
                    gram = np.conj(vi) * dt
                else:
                    gram = _inner(vi, vj, dt)
                p += np.real(np.conj(coef[i]) * coef[j] * gram)
        return p

    def to_dense(self) -> np.ndarray:
        """Full amplitude matrix ``psi[i, j] = psi(t_i, t_j)``; small grids only."""
        n = self.grid.n
        if n > DENSE_LIMIT:
            raise ParameterError(f"dense form limited to n <= {DENSE_LIMIT}, got {n}")
        psi = np.zeros((n, n), dtype=complex)
        for b in self.branches:
            if isinstance(b, DiagonalBranch):
                psi += b.weight * np.diag(b.g) / math.sqrt(self.grid.dt)
            else:
                psi += b.weight * np.outer(b.f_a, b.f_b)
        return psi


def _with_weight(b: Branch, weight: complex) -> Branch:
    if isinstance(b, DiagonalBranch):
        return DiagonalBranch(b.g, weight, b.label)
    return ProductBranch(b.f_a, b.f_b, weight, b.label)


def constrained_initial_state(d: float, grid: TimeGrid, t_w: float | None = None) -> DiscretizedState:
    """EPR pair ``delta(t_A - t_B)`` restricted to the emission-window rectangle.

    The window defaults to ``(d, 3d)``. The grid must leave at least ``d``
    of margin on each side of it.
    """
    window = ConstraintWindow(d, d if t_w is None else t_w)
    slack = 1e-9 * grid.dt
    if grid.t_start > window.t_w - d + slack or grid.t_stop < window.t_end + d - slack:
        raise GridRangeError(
            f"grid [{grid.t_start}, {grid.t_stop}) must cover "
            f"[{window.t_w - d}, {window.t_end + d}]"
        )
    g = window_profile(grid, window)
    return DiscretizedState.build(
        grid, window, [DiagonalBranch(g, 1.0, "constrained")], meta={"kind": "constrained"}
    )


def analytic_energy_rep(d: float, E_sum, t_w: float | None = None):
    """Closed-form energy amplitude of the windowed pair, a function of ``E_A + E_B``.

    ``sin(d S)/S / sqrt(pi d)`` times the phase of the window centre,
    ``exp(-i (t_w + d) S)``; ``t_w = d`` gives ``exp(-2i d S)``.
    """
    if t_w is None:
        t_w = d
    S = np.asarray(E_sum, dtype=float)
    safe = np.where(S == 0.0, 1.0, S)
    amp = np.where(S == 0.0, d, np.sin(d * S) / safe) / math.sqrt(math.pi * d)
    out = amp * np.exp(-1j * (t_w + d) * S)
    return out if out.ndim else complex(out)


def energy_representation(state: DiscretizedState) -> tuple[np.ndarray, np.ndarray]:
    """Energy amplitude of a single-diagonal state via FFT.

    Symmetric convention ``phi(S) = (2 pi)^-1/2 * integral g(t) exp(-i S t) dt``.
    Returns ``(E_sum, phi)`` sorted by ``E_sum``; bin spacing ``2 pi/(n dt)``.
    """
    if len(state.branches) != 1 or not isinstance(state.branches[0], DiagonalBranch):
        raise UnsupportedStateError("energy representation needs a single diagonal branch")
    b = state.branches[0]
    grid = state.grid
    g = b.weight * b.g
    S = 2.0 * math.pi * np.fft.fftfreq(grid.n, grid.dt)
    phi = grid.dt / math.sqrt(2.0 * math.pi) * np.exp(-1j * S * grid.t_start) * np.fft.fft(g)
    return np.fft.fftshift(S), np.fft.fftshift(phi)


@dataclass(frozen=True)
class ProjectionParams:
    """Bob's measurement record and the width used for his delta.

    ``epsilon`` must satisfy ``0 < epsilon <= 2 dt`` on the grid it is used
    with. ``regularization`` is ``"kronecker"`` (a single-cell spike) or
    ``"gaussian"`` (standard deviation ``epsilon``).
    """

    beta: float
    t_0: float
    E_0: float = 0.0
    epsilon: float | None = None
    regularization: Literal["kronecker", "gaussian"] = "kronecker"

    def __post_init__(self):
        if not (0.0 <= self.beta <= 1.0):
            raise DomainError(f"projection beta must lie in [0, 1], got {self.beta!r}")
        if self.regularization not in ("kronecker", "gaussian"):
            raise ParameterError(f"unknown regularization {self.regularization!r}")

    @property
    def coefficients(self) -> tuple[float, float]:
        """Raw amplitudes ``(1 - beta^2, beta^2)`` of the spike and window branches."""
        b2 = self.beta * self.beta
        return 1.0 - b2, b2


def _spike(grid: TimeGrid, p: ProjectionParams, eps: float) -> tuple[np.ndarray, float]:
    if p.regularization == "kronecker":
        i = grid.index_of(p.t_0)
        f = np.zeros(grid.n)
        f[i] = 1.0 / math.sqrt(grid.dt)
        return f, float(grid.t[i])
    t = grid.t
    f = (2.0 * math.pi * eps * eps) ** -0.25 * np.exp(-((t - p.t_0) ** 2) / (4.0 * eps * eps))
    return f, float(p.t_0)


def project_bob(state: DiscretizedState, p: ProjectionParams) -> DiscretizedState:
    """State after Bob's arrival-time measurement, seen from the lab frame.

    Spike branch ``(1 - beta^2) delta(t_A - t_0) delta(t_B - t_0)`` plus
    window branch ``beta^2 Pi(t_A) exp(i E_0 (t_A - t_B))``; a branch with
    zero amplitude is dropped. The result is renormalized and the raw
    amplitudes are kept in ``meta["raw_weights"]``.
    """
    if state.meta.get("kind") != "constrained":
        raise UnsupportedStateError("project_bob expects a constrained initial state")
    grid, window = state.grid, state.window
    eps = grid.dt if p.epsilon is None else float(p.epsilon)
    if not (0.0 < eps <= 2.0 * grid.dt * (1 + 1e-12)):
        raise ParameterError(f"epsilon must lie in (0, 2*dt] = (0, {2 * grid.dt}], got {eps!r}")
    if not (grid.t_start <= p.t_0 < grid.t_stop):
        raise GridRangeError(f"t_0={p.t_0!r} outside grid span [{grid.t_start}, {grid.t_stop})")
    if not (window.t_w <= p.t_0 <= window.t_end):
        warnings.warn(
            f"t_0={p.t_0!r} outside the constraint window [{window.t_w}, {window.t_end}]",
            DomainWarning,
            stacklevel=2,
        )

    a, b = p.coefficients
    branches: list[Branch] = []
    meta = {
        "kind": "projected",
        "beta": p.beta,
        "t_0": p.t_0,
        "E_0": p.E_0,
        "epsilon": eps,
        "regularization": p.regularization,
        "raw_weights": {"delta": a, "window": b},
    }
    if a != 0.0:
        spike, center = _spike(grid, p, eps)
        branches.append(ProductBranch(spike, spike, a, "delta"))
        meta["delta_center"] = center
    if b != 0.0:
        t = grid.t
        prof = window_profile(grid, window)
        branches.append(
            ProductBranch(prof * np.exp(1j * p.E_0 * t), np.exp(-1j * p.E_0 * t), b, "window")
        )
    sq = sum(abs(br.weight) ** 2 * br.norm2(grid.dt) for br in branches)
    meta["squared_weight_sum"] = sq
    new = DiscretizedState.build(grid, window, branches, meta)
    logger.info(
        "projection beta=%.6g: A=%.17g B=%.17g A+B=%.17g squared-weight sum=%.17g norm_raw=%.17g",
        p.beta, a, b, a + b, sq, new.norm_raw,
    )
    return new


def _moments(t: np.ndarray, p: np.ndarray, dt: float) -> tuple[float, float]:
    mass = np.sum(p) * dt
    mean = np.sum(t * p) * dt / mass
    var = np.sum((t - mean) ** 2 * p) * dt / mass
    return float(mean), float(var)


def time_marginal_mean(state: DiscretizedState) -> float:
    return _moments(state.grid.t, state.marginal("A"), state.grid.dt)[0]


def time_marginal_variance(state: DiscretizedState) -> float:
    """Variance of Alice's arrival time under the discretized ``|psi|^2``."""
    if not state.renormalized:
        raise StateError("state must be normalized")
    return _moments(state.grid.t, state.marginal("A"), state.grid.dt)[1]


def sigma_t_paper(beta: float, d: float) -> float:
    """Closed-form time uncertainty ``2 beta d`` (zero at rest, ``2d`` as beta -> 1)."""
    if not (0.0 <= beta <= 1.0):
        raise DomainError(f"beta must lie in [0, 1], got {beta!r}")
    if not d > 0:
        raise DomainError(f"d must be positive, got {d!r}")
    return beta * 2.0 * d


STATE_HEADER = ("branch", "kind", "t", "re", "im")
MARGINAL_HEADER = ("marginal", "t", "prob")


def write_state_csv(state: DiscretizedState, dest: str | IO[str] | None = None) -> str:
    """Branch profiles, weights folded in (the weight goes on ``g`` / ``f_A``)."""
    t = state.grid.t
    rows = []
    for b in state.branches:
        if isinstance(b, DiagonalBranch):
            parts = [("diagonal", b.weight * b.g)]
        else:
            parts = [("product_a", b.weight * b.f_a), ("product_b", b.f_b)]
        for kind, prof in parts:
            rows.extend((b.label, kind, float(ti), float(z.real), float(z.imag)) for ti, z in zip(t, prof))
    return write_rows(dest, STATE_HEADER, rows)


def write_marginals_csv(state: DiscretizedState, dest: str | IO[str] | None = None) -> str:
    t = state.grid.t
    rows = []
    for axis in ("A", "B"):
        p = state.marginal(axis)
        rows.extend((f"t_{axis}", float(ti), float(pi)) for ti, pi in zip(t, p))
    return write_rows(dest, MARGINAL_HEADER, rows)
