"""Repeated trials of Bob's projection, sampled from the post-measurement state.

Trial ``i`` of a run with seed ``s`` consumes the four 64-bit words of
Philox-4x64 counter block ``i`` under key ``s``. The outcome of a trial
depends only on ``(s, i)``, so any chunking or thread count gives
bit-identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import IO

import numpy as np

from . import kinematics as kin
from . import quantum as qm
from ._csvio import write_rows
from ._errors import ParameterError, StateError

__all__ = [
    "TrialBranch",
    "TrialOutcome",
    "McStats",
    "TrialBatch",
    "trial_uniforms",
    "sample_outcome",
    "draw_trials",
    "run_trials",
    "STATS_HEADER",
    "TRIAL_HEADER",
]

TB_CONVENTION = "uniform_grid_span"
CHUNK = 1 << 15


class TrialBranch(str, Enum):
    DELTA = "Delta"
    WINDOW = "Window"


@dataclass(frozen=True)
class TrialOutcome:
    t_A: float
    t_B: float
    branch: TrialBranch


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not (0 <= seed < 1 << 64):
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return seed


def trial_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniforms in ``[0, 1)`` for trials ``start .. start+count-1``, shape ``(count, 4)``."""
    bg = np.random.Philox(key=_check_seed(seed))
    if start:
        bg.advance(start)
    raw = bg.random_raw(4 * count).reshape(count, 4)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _check_sampleable(state: qm.DiscretizedState) -> None:
    if state.meta.get("kind") != "projected":
        raise StateError("sampling needs a state produced by project_bob")
    if not state.renormalized or abs(state.norm() - 1.0) > 1e-9:
        raise StateError("state is not normalized")


def _outcomes(state: qm.DiscretizedState, u: np.ndarray):
    probs = state.branch_probabilities()
    p_delta = probs.get("delta", 0.0)
    is_delta = u[:, 0] < p_delta
    w = state.window
    g = state.grid
    center = state.meta.get("delta_center", state.meta["t_0"])
    t_a = np.where(is_delta, center, w.t_w + w.width * u[:, 1])
    t_b = np.where(is_delta, center, g.t_start + g.span * u[:, 2])
    return t_a, t_b, is_delta


def sample_outcome(state: qm.DiscretizedState, rng: np.random.Generator) -> TrialOutcome:
    """One trial: pick a branch by its probability, then draw arrival times.

    The spike branch returns Bob's record for both photons. The window
    branch draws ``t_A`` uniform on the window and ``t_B`` uniform over the
    grid span, since that branch's ``|psi|^2`` does not depend on ``t_B``.
    """
    _check_sampleable(state)
    u = rng.random(4)[None, :]
    t_a, t_b, is_delta = _outcomes(state, u)
    branch = TrialBranch.DELTA if is_delta[0] else TrialBranch.WINDOW
    return TrialOutcome(float(t_a[0]), float(t_b[0]), branch)


@dataclass(frozen=True)
class TrialBatch:
    t_A: np.ndarray
    t_B: np.ndarray
    is_delta: np.ndarray


def draw_trials(state: qm.DiscretizedState, n: int, seed: int, workers: int = 1) -> TrialBatch:
    _check_sampleable(state)
    if n < 1:
        raise ParameterError(f"need at least one trial, got {n!r}")
    starts = list(range(0, n, CHUNK))

    def chunk(start):
        return _outcomes(state, trial_uniforms(seed, start, min(CHUNK, n - start)))

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, starts))
    else:
        parts = [chunk(s) for s in starts]
    return TrialBatch(*(np.concatenate(cols) for cols in zip(*parts)))


@dataclass(frozen=True)
class McStats:
    n_trials: int
    seed: int
    state_beta: float
    delta_fraction: float
    delta_probability: float
    delta_se: float
    empirical_mean_tA: float
    empirical_var_tA: float
    var_se: float
    var_tA_numeric: float
    flip_fraction: float

    def row(self) -> tuple:
        return (
            self.n_trials,
            self.seed,
            self.state_beta,
            self.delta_fraction,
            self.delta_probability,
            self.delta_se,
            self.empirical_mean_tA,
            self.empirical_var_tA,
            self.var_se,
            self.var_tA_numeric,
            self.flip_fraction,
            TB_CONVENTION,
        )


STATS_HEADER = (
    "n_trials",
    "seed",
    "state_beta",
    "delta_fraction",
    "delta_probability",
    "delta_se",
    "empirical_mean_tA",
    "empirical_var_tA",
    "var_se",
    "var_tA_numeric",
    "flip_fraction",
    "tB_convention",
)
TRIAL_HEADER = ("trial", "t_A", "t_B", "branch")


def _flip_fraction(cfg: kin.ExperimentConfig, state: qm.DiscretizedState, t_a: np.ndarray) -> float:
    # Alice's detection shifts by her sampled offset from Bob's record;
    # Bob's detection event and the spatial separation stay fixed.
    alice, bob = kin.measurement_events(cfg)
    ref = state.meta.get("delta_center", state.meta["t_0"])
    dt_lab = bob.t - (alice.t + (t_a - ref))
    dx = bob.x - alice.x
    g = kin.gamma(cfg.beta)
    dt_bob = g * (dt_lab - cfg.beta * dx)
    return float(np.mean(dt_lab * dt_bob < 0.0))


def summarize(cfg: kin.ExperimentConfig, state: qm.DiscretizedState, batch: TrialBatch, seed: int) -> McStats:
    n = batch.t_A.size
    p = state.branch_probabilities().get("delta", 0.0)
    t_a = batch.t_A
    mean = float(np.mean(t_a))
    dev = t_a - mean
    var = float(np.mean(dev**2))
    m4 = float(np.mean(dev**4))
    return McStats(
        n_trials=n,
        seed=seed,
        state_beta=state.meta["beta"],
        delta_fraction=float(np.mean(batch.is_delta)),
        delta_probability=p,
        delta_se=math.sqrt(p * (1.0 - p) / n),
        empirical_mean_tA=mean,
        empirical_var_tA=var,
        var_se=math.sqrt(max(m4 - var * var, 0.0) / n),
        var_tA_numeric=qm.time_marginal_variance(state),
        flip_fraction=_flip_fraction(cfg, state, t_a),
    )


def run_trials(
    cfg: kin.ExperimentConfig,
    p: qm.ProjectionParams,
    n: int,
    seed: int,
    grid_n: int = 1024,
    workers: int = 1,
    return_batch: bool = False,
):
    """Project the constrained state of ``cfg`` with ``p`` and aggregate ``n`` trials.

    ``p.beta`` sets the state; ``cfg.beta`` sets the boost used for
    ``flip_fraction``. Returns :class:`McStats`, or ``(stats, batch)``.
    """
    grid = qm.TimeGrid.for_window(cfg.d, n=grid_n)
    state = qm.project_bob(qm.constrained_initial_state(cfg.d, grid), p)
    batch = draw_trials(state, n, seed, workers)
    stats = summarize(cfg, state, batch, _check_seed(seed))
    return (stats, batch) if return_batch else stats


def write_stats_csv(stats: McStats, dest: str | IO[str] | None = None) -> str:
    return write_rows(dest, STATS_HEADER, [stats.row()])


def write_trials_csv(batch: TrialBatch, dest: str | IO[str] | None = None) -> str:
    rows = (
        (i, float(a), float(b), (TrialBranch.DELTA if dl else TrialBranch.WINDOW).value)
        for i, (a, b, dl) in enumerate(zip(batch.t_A, batch.t_B, batch.is_delta))
    )
    return write_rows(dest, TRIAL_HEADER, rows)
