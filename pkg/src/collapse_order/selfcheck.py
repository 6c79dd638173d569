"""Built-in verification run behind ``collapse-order --selfcheck``.

Each check reproduces one closed-form result or numerical contract at a
fixed tolerance and time budget. Random inputs come from fixed seeds.
"""

from __future__ import annotations

import hashlib
import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kinematics as kin
from . import montecarlo as mc
from . import paradox as px
from . import quantum as qm

N_RANDOM = 1000


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float | None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g}s)" if self.budget else ""
        return f"[{status}] {self.number}. {self.name}: {self.detail} [{self.seconds:.3f}s{budget}]"


def _window_width() -> tuple[bool, str]:
    rng = np.random.default_rng(101)
    worst = 0.0
    for d, beta in zip(rng.uniform(0.1, 10, N_RANDOM), rng.uniform(0.05, 0.99, N_RANDOM)):
        w = kin.emission_window(d, beta)
        worst = max(worst, abs((w.t_e_max - w.t_e_min) - 2 * d) / d, abs(w.width - 2 * d) / d)
    return worst < 1e-12, f"max |width - 2d|/d = {worst:.2e}"


def _resolution_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(102)
    worst, min_upper = 0.0, math.inf
    for dt, d, beta in zip(
        rng.uniform(1e-3, 10, N_RANDOM), rng.uniform(0.1, 10, N_RANDOM), rng.uniform(0, 0.99, N_RANDOM)
    ):
        r = px.resolve(dt, d, beta)
        g = kin.gamma(beta)
        worst = max(worst, abs(r.upper - g * dt * (1 - beta**2)) / max(1.0, g * dt))
        min_upper = min(min_upper, r.upper)
    return worst < 1e-9 and min_upper > 0, f"max rel residual {worst:.2e}, min upper {min_upper:.3e}"


def _lorentz_invariance() -> tuple[bool, str]:
    rng = np.random.default_rng(103)
    worst_int, worst_rt = 0.0, 0.0
    for dt, dx, beta in zip(
        rng.uniform(-10, 10, N_RANDOM), rng.uniform(-10, 10, N_RANDOM), rng.uniform(0, 0.99, N_RANDOM)
    ):
        tp, xp = kin.boost_interval(dt, dx, beta)
        scale = max(tp * tp + xp * xp, dt * dt + dx * dx)
        worst_int = max(worst_int, abs((tp * tp - xp * xp) - (dt * dt - dx * dx)) / scale)
        bt, bx = kin.inverse_boost_interval(tp, xp, beta)
        worst_rt = max(worst_rt, max(abs(bt - dt), abs(bx - dx)) / max(abs(dt), abs(dx)))
    ok = worst_int < 1e-12 and worst_rt < 1e-12
    return ok, f"interval {worst_int:.2e}, round trip {worst_rt:.2e}"


def _regimes() -> tuple[bool, str]:
    expected = {0.5: kin.Regime.BOB_FIRST_BOTH, 2.0: kin.Regime.PARADOX, 3.5: kin.Regime.ALICE_FIRST_BOTH}
    got = {t_e: kin.classify_ordering(kin.ExperimentConfig(1.0, 0.5, t_e)).regime for t_e in expected}
    captions_ok = got == expected

    rng = np.random.default_rng(104)
    inside_ok = True
    worst_lab, worst_bob = 0.0, 0.0
    for d, beta, u in zip(rng.uniform(0.1, 10, N_RANDOM), rng.uniform(0.05, 0.95, N_RANDOM), rng.random(N_RANDOM)):
        w = kin.emission_window(d, beta)
        tol = kin.default_tolerance(d)
        margin = 1e3 * tol
        t_e = w.t_e_min + margin + u * (w.width - 2 * margin)
        rep = kin.classify_ordering(kin.ExperimentConfig(d, beta, t_e), tol)
        inside_ok &= rep.delta_t_lab > 0 and rep.delta_t_bob_exact < 0
        lo = kin.classify_ordering(kin.ExperimentConfig(d, beta, w.t_e_min), tol)
        hi = kin.classify_ordering(kin.ExperimentConfig(d, beta, w.t_e_max), tol)
        worst_lab = max(worst_lab, abs(lo.delta_t_lab) / tol)
        worst_bob = max(worst_bob, abs(hi.delta_t_bob_exact) / tol)
    ok = captions_ok and inside_ok and worst_lab < 1 and worst_bob < 1
    detail = (
        f"captions {'ok' if captions_ok else got}, in-window {'ok' if inside_ok else 'violated'}, "
        f"boundary residual/tol lab {worst_lab:.1e} bob {worst_bob:.1e}"
    )
    return ok, detail


ENERGY_BAND_LOBES = 100


def energy_errors(d: float, n: int = 4096) -> dict:
    grid = qm.TimeGrid.for_window(d, n=n)
    E, phi = qm.energy_representation(qm.constrained_initial_state(d, grid))
    an = qm.analytic_energy_rep(d, E)
    band = np.abs(E) <= ENERGY_BAND_LOBES * math.pi / d
    l2 = float(np.linalg.norm(phi[band] - an[band]) / np.linalg.norm(an[band]))
    mag = np.abs(phi)
    i0 = int(np.argmin(np.abs(E)))
    dE = float(E[1] - E[0])
    pos = np.where(E > 0)[0]
    mins = [i for i in pos[1:-1] if mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]][:4]
    zero_offsets = [abs(E[i] - (k + 1) * math.pi / d) / dE for k, i in enumerate(mins)]
    return {
        "l2": l2,
        "peak": float(mag[i0]),
        "peak_expected": math.sqrt(d / math.pi),
        "zero_offsets_bins": zero_offsets,
        "zero_depth": max(float(mag[i]) for i in mins) / float(mag[i0]),
        "n_zeros": len(mins),
    }


def _energy_rep() -> tuple[bool, str]:
    ok = True
    parts = []
    for d in (1.0, 2.5):
        e = energy_errors(d)
        ok &= e["l2"] < 1e-3
        ok &= abs(e["peak"] - e["peak_expected"]) < 1e-3
        ok &= e["n_zeros"] == 4 and max(e["zero_offsets_bins"]) <= 1.0
        parts.append(f"d={d:g}: L2 {e['l2']:.2e}, peak err {abs(e['peak'] - e['peak_expected']):.1e}, "
                     f"zeros within {max(e['zero_offsets_bins']):.2f} bin")
    return ok, "; ".join(parts)


def _projection_limits() -> tuple[bool, str]:
    grid = qm.TimeGrid.for_window(1.0, n=1024)
    init = qm.constrained_initial_state(1.0, grid)
    s0 = qm.project_bob(init, qm.ProjectionParams(0.0, 2.0))
    s1 = qm.project_bob(init, qm.ProjectionParams(1.0, 2.0))
    ok0 = s0.labels() == ["delta"] and isinstance(s0.branches[0], qm.ProductBranch)
    ok1 = s1.labels() == ["window"] and isinstance(s1.branches[0], qm.ProductBranch)
    worst = 0.0
    for beta in np.round(np.arange(1, 10) * 0.1, 10):
        raw = qm.project_bob(init, qm.ProjectionParams(beta, 2.0)).meta["raw_weights"]
        worst = max(worst, abs(raw["delta"] - (1 - beta**2)), abs(raw["window"] - beta**2))
    return ok0 and ok1 and worst < 1e-12, f"beta=0 {s0.labels()}, beta=1 {s1.labels()}, coeff err {worst:.1e}"


def _sigma_formula() -> tuple[bool, str]:
    exact = all(qm.sigma_t_paper(0.0, d) == 0.0 and qm.sigma_t_paper(1.0, d) == 2 * d for d in (0.1, 1.0, 3.7))
    betas = np.linspace(0, 1, 101)
    vals = [qm.sigma_t_paper(b, 1.0) for b in betas]
    mono = all(b > a for a, b in zip(vals, vals[1:]))
    report = px.full_report(kin.ExperimentConfig(1.0, 0.5, 2.0), projection=qm.ProjectionParams(1.0, 2.0))
    row = dict(zip(px.SWEEP_HEADER, report.row()))
    var_ok = abs(row["var_tA_numeric"] - 1 / 3) < 1e-3
    sig_ok = row["sigma_t_paper"] ** 2 == 4.0
    ok = exact and mono and var_ok and sig_ok
    return ok, (
        f"limits {'exact' if exact else 'wrong'}, monotone {mono}; beta=1 row: "
        f"var_tA_numeric={row['var_tA_numeric']:.6f} vs sigma_t_paper^2={row['sigma_t_paper'] ** 2:g} "
        f"(documented discrepancy)"
    )


def _monte_carlo() -> tuple[bool, str]:
    cfg = kin.ExperimentConfig(1.0, 0.5, 2.0)
    p = qm.ProjectionParams(0.5, 2.0)
    ok = True
    parts = []
    for seed in (1, 2, 3):
        stats, batch = mc.run_trials(cfg, p, 100_000, seed, return_batch=True)
        z_frac = abs(stats.delta_fraction - stats.delta_probability) / stats.delta_se
        z_var = abs(stats.empirical_var_tA - stats.var_tA_numeric) / stats.var_se
        first = hashlib.sha256(mc.write_stats_csv(stats).encode() + mc.write_trials_csv(batch).encode()).hexdigest()
        stats2, batch2 = mc.run_trials(cfg, p, 100_000, seed, return_batch=True, workers=4)
        second = hashlib.sha256(mc.write_stats_csv(stats2).encode() + mc.write_trials_csv(batch2).encode()).hexdigest()
        ok &= z_frac < 3 and z_var < 3 and first == second
        parts.append(f"seed {seed}: frac {z_frac:.2f} SE, var {z_var:.2f} SE, rerun {'identical' if first == second else 'DIFFERS'}")
    return ok, "; ".join(parts)


def _normalization() -> tuple[bool, str]:
    worst = 0.0
    raw_intermediate = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in (0.3, 1.0, 4.0):
            for n in (64, 1024):
                grid = qm.TimeGrid.for_window(d, n=n)
                init = qm.constrained_initial_state(d, grid)
                worst = max(worst, abs(init.norm() - 1))
                for beta in np.linspace(0, 1, 11):
                    for reg in ("kronecker", "gaussian"):
                        s = qm.project_bob(init, qm.ProjectionParams(beta, 2.2 * d, E_0=0.7, regularization=reg))
                        worst = max(worst, abs(s.norm() - 1))
                        if 0 < beta < 1:
                            raw_intermediate.append(s.norm_raw)
    dev = min(abs(r - 1) for r in raw_intermediate)
    return worst < 1e-9 and dev > 1e-6, f"max |norm-1| {worst:.1e}; min |norm_raw-1| at intermediate beta {dev:.3f}"


CHECKS: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "emission window width", _window_width, 1.0),
    (2, "resolution identity", _resolution_identity, 1.0),
    (3, "Lorentz invariance", _lorentz_invariance, 1.0),
    (4, "regime boundaries", _regimes, 1.0),
    (5, "energy representation", _energy_rep, 5.0),
    (6, "projection limits", _projection_limits, None),
    (7, "sigma_t formula", _sigma_formula, None),
    (8, "Monte Carlo consistency", _monte_carlo, 10.0),
    (9, "normalization", _normalization, None),
]


def run_check(number: int) -> CheckResult:
    for num, name, fn, budget in CHECKS:
        if num == number:
            t0 = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failed criterion, not a crashed run
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - t0
            if budget is not None and elapsed > budget:
                passed = False
                detail += "; over time budget"
            return CheckResult(num, name, passed, detail, elapsed, budget)
    raise KeyError(number)


def run_all(echo: Callable[[str], None] | None = print) -> list[CheckResult]:
    results = []
    for num, *_ in CHECKS:
        r = run_check(num)
        if echo:
            echo(r.line())
        results.append(r)
    return results
