"""Uncertainty band on Bob's boosted time difference, and combined scenario rows."""

from __future__ import annotations

from dataclasses import dataclass

from . import kinematics as kin
from . import quantum as qm
from ._errors import DomainError

__all__ = ["ResolutionReport", "ScenarioReport", "resolve", "full_report", "SWEEP_HEADER"]

INDETERMINATE = "ordering indeterminate within uncertainty"
DETERMINATE = "ordering determinate"


@dataclass(frozen=True)
class ResolutionReport:
    delta_t_prime: float
    sigma_t: float
    sigma_t_prime: float
    upper: float
    lower: float
    identity_residual: float

    @property
    def straddles_zero(self) -> bool:
        return self.lower < 0.0 < self.upper


def _band(delta_t: float, d: float, beta: float) -> ResolutionReport:
    g = kin.gamma(beta)
    dtp = kin.delta_t_paper_model(delta_t, d, beta)
    sigma = qm.sigma_t_paper(beta, d)
    sigma_p = g * sigma
    upper = dtp + sigma_p
    lower = dtp - sigma_p
    residual = abs(upper - g * delta_t * (1.0 - beta * beta))
    return ResolutionReport(dtp, sigma, sigma_p, upper, lower, residual)


def resolve(delta_t: float, d: float, beta: float) -> ResolutionReport:
    """Boosted difference ``dt'`` with the band ``dt' +/- gamma * 2 beta d``.

    The upper edge collapses to ``dt * sqrt(1 - beta^2)``, positive for any
    lab-frame lead ``dt > 0``.
    """
    if not delta_t > 0:
        raise DomainError(f"delta_t must be positive (Alice first in the lab), got {delta_t!r}")
    if not d > 0:
        raise DomainError(f"d must be positive, got {d!r}")
    return _band(delta_t, d, beta)


SWEEP_HEADER = (
    "d",
    "beta",
    "t_e",
    "dt_lab",
    "dt_bob_exact",
    "dt_bob_paper",
    "regime",
    "sigma_t_paper",
    "var_tA_numeric",
    "upper",
    "lower",
    "norm_raw",
)


@dataclass(frozen=True)
class ScenarioReport:
    cfg: kin.ExperimentConfig
    ordering: kin.OrderingReport
    resolution: ResolutionReport
    in_window: bool
    state_beta: float
    sigma_t_paper: float
    var_tA_numeric: float
    norm_raw: float

    @property
    def straddles_zero(self) -> bool:
        return self.resolution.straddles_zero

    @property
    def status(self) -> str:
        return INDETERMINATE if self.straddles_zero else DETERMINATE

    def row(self) -> tuple:
        o, r = self.ordering, self.resolution
        return (
            self.cfg.d,
            self.cfg.beta,
            self.cfg.t_e,
            o.delta_t_lab,
            o.delta_t_bob_exact,
            o.delta_t_bob_paper,
            o.regime.value,
            self.sigma_t_paper,
            self.var_tA_numeric,
            r.upper,
            r.lower,
            self.norm_raw,
        )

    def items(self) -> list[tuple[str, object]]:
        pairs = list(zip(SWEEP_HEADER, self.row()))
        pairs += [
            ("in_window", self.in_window),
            ("state_beta", self.state_beta),
            ("straddles_zero", self.straddles_zero),
            ("status", self.status),
        ]
        return pairs


def full_report(
    cfg: kin.ExperimentConfig,
    projection: qm.ProjectionParams | None = None,
    grid_n: int = 1024,
    tol: float | None = None,
    state: qm.DiscretizedState | None = None,
) -> ScenarioReport:
    """Ordering, uncertainty band and projected-state diagnostics for one scenario.

    The band uses ``|dt_lab|`` so scenarios outside the emission window
    still get a row. The projected state defaults to ``beta = cfg.beta``
    with Bob's record at the window centre and ``E_0 = 0``; pass
    ``projection`` (e.g. ``beta = 1``) to probe other states. ``sigma_t_paper``
    is evaluated at the projection's ``beta`` so it pairs with
    ``var_tA_numeric``.
    """
    ordering = kin.classify_ordering(cfg, tol)
    band = _band(abs(ordering.delta_t_lab), cfg.d, cfg.beta)
    in_window = kin.emission_window(cfg.d, cfg.beta).contains(cfg.t_e)

    if state is None:
        if projection is None:
            projection = qm.ProjectionParams(beta=cfg.beta, t_0=2.0 * cfg.d)
        grid = qm.TimeGrid.for_window(cfg.d, n=grid_n)
        state = qm.project_bob(qm.constrained_initial_state(cfg.d, grid), projection)
    state_beta = state.meta["beta"]
    return ScenarioReport(
        cfg=cfg,
        ordering=ordering,
        resolution=band,
        in_window=in_window,
        state_beta=state_beta,
        sigma_t_paper=qm.sigma_t_paper(state_beta, cfg.d),
        var_tA_numeric=qm.time_marginal_variance(state),
        norm_raw=state.norm_raw,
    )
