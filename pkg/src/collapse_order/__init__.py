"""Frame-dependent measurement ordering on a time-energy entangled biphoton.

Submodules:

* :mod:`~collapse_order.kinematics` -- boosts, detection events, emission window, ordering regimes
* :mod:`~collapse_order.quantum` -- discretized constrained and projected two-photon states
* :mod:`~collapse_order.paradox` -- uncertainty band on Bob's boosted time difference
* :mod:`~collapse_order.montecarlo` -- seeded repeated-trial sampling
* :mod:`~collapse_order.cli` -- command-line interface
"""

from ._errors import (
    DomainError,
    DomainWarning,
    GridRangeError,
    ParameterError,
    StateError,
    UnsupportedStateError,
)
from .kinematics import (
    EmissionWindow,
    ExperimentConfig,
    OrderingReport,
    Regime,
    SpacetimeEvent,
    boost_interval,
    classify_ordering,
    delta_t_paper_model,
    emission_window,
    gamma,
    inverse_boost_interval,
    measurement_events,
    paradox_condition,
    worldline_diagram,
)
from .montecarlo import McStats, TrialOutcome, run_trials, sample_outcome
from .paradox import ResolutionReport, full_report, resolve
from .quantum import (
    ConstraintWindow,
    DiscretizedState,
    ProjectionParams,
    TimeGrid,
    analytic_energy_rep,
    constrained_initial_state,
    energy_representation,
    pi_window,
    project_bob,
    sigma_t_paper,
    time_marginal_variance,
)

__version__ = "0.1.0"

__all__ = [
    "ConstraintWindow",
    "DiscretizedState",
    "DomainError",
    "DomainWarning",
    "EmissionWindow",
    "ExperimentConfig",
    "GridRangeError",
    "McStats",
    "OrderingReport",
    "ParameterError",
    "ProjectionParams",
    "Regime",
    "ResolutionReport",
    "SpacetimeEvent",
    "StateError",
    "TimeGrid",
    "TrialOutcome",
    "UnsupportedStateError",
    "analytic_energy_rep",
    "boost_interval",
    "classify_ordering",
    "constrained_initial_state",
    "delta_t_paper_model",
    "emission_window",
    "energy_representation",
    "full_report",
    "gamma",
    "inverse_boost_interval",
    "measurement_events",
    "paradox_condition",
    "pi_window",
    "project_bob",
    "resolve",
    "run_trials",
    "sample_outcome",
    "sigma_t_paper",
    "time_marginal_variance",
    "worldline_diagram",
]
