"""Command-line front end.

Exit codes: 0 success, 2 domain or configuration error, 3 a selfcheck
criterion failed. Values given with ``--config FILE`` (flat ``key = value``
lines) are overridden by explicit flags.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import logging
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kinematics as kin
from . import montecarlo as mc
from . import paradox as px
from . import quantum as qm
from ._csvio import kv_line, write_rows
from ._errors import DomainError, GridRangeError, ParameterError



class ConfigError(ValueError):
    pass


def parse_kv(text: str, source: str = "<config>") -> dict[str, tuple[str, int]]:
    """``key = value`` per line; ``#`` starts a comment. Returns ``key -> (value, lineno)``."""
    out: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = (value, lineno)
    return out


def _number(value: str, key: str, lineno: int, source: str, kind=float):
    try:
        v = kind(value)
    except ValueError:
        raise ConfigError(f"{source}:{lineno}: {key} expects a {kind.__name__}, got {value!r}") from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(f"{source}:{lineno}: {key} must be finite, got {value!r}")
    return v


def parse_range(value: str, key: str, lineno: int, source: str) -> list[float]:
    """``start:stop:steps`` (inclusive), ``a,b,c``, or a single number."""
    if ":" in value:
        parts = value.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{source}:{lineno}: {key} range must be start:stop:steps")
        start = _number(parts[0], key, lineno, source)
        stop = _number(parts[1], key, lineno, source)
        steps = _number(parts[2], key, lineno, source, int)
        if steps < 1:
            raise ConfigError(f"{source}:{lineno}: {key} needs at least one step")
        vals = [start] if steps == 1 else np.linspace(start, stop, steps).tolist()
    else:
        vals = [_number(v.strip(), key, lineno, source) for v in value.split(",") if v.strip()]
    if not vals:
        raise ConfigError(f"{source}:{lineno}: {key} range is empty")
    return sorted(vals)


# ---------------------------------------------------------------- sweep


SWEEP_KEYS = {"d", "beta", "t_e", "t0", "E0", "epsilon", "grid_n", "seed", "output", "mc_trials", "workers"}
MC_COLUMNS = ("delta_fraction", "empirical_var_tA", "flip_fraction")


@dataclass
class SweepSpec:
    d: list[float]
    beta: list[float]
    t_e: list[float]
    t0: float | None = None
    E0: float = 0.0
    epsilon: float | None = None
    grid_n: int = 1024
    seed: int = 0
    mc_trials: int = 0
    output: str | None = None
    workers: int = 1
    source: str = "<sweep>"
    lines: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str, source: str = "<sweep>") -> "SweepSpec":
        kv = parse_kv(text, source)
        for key, (_, lineno) in kv.items():
            if key not in SWEEP_KEYS:
                raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        for key in ("d", "beta", "t_e"):
            if key not in kv:
                raise ConfigError(f"{source}: missing required key {key!r}")
        ranges = {k: parse_range(kv[k][0], k, kv[k][1], source) for k in ("d", "beta", "t_e")}
        for b in ranges["beta"]:
            if not 0 < b < 1:
                raise ConfigError(f"{source}:{kv['beta'][1]}: beta values must lie in (0, 1), got {b!r}")
        for v in ranges["d"]:
            if not v > 0:
                raise ConfigError(f"{source}:{kv['d'][1]}: d values must be positive, got {v!r}")
        for v in ranges["t_e"]:
            if v < 0:
                raise ConfigError(f"{source}:{kv['t_e'][1]}: t_e values must be non-negative, got {v!r}")

        def opt(key, kind=float, default=None):
            if key not in kv:
                return default
            value, lineno = kv[key]
            return _number(value, key, lineno, source, kind)

        return cls(
            d=ranges["d"],
            beta=ranges["beta"],
            t_e=ranges["t_e"],
            t0=opt("t0"),
            E0=opt("E0", default=0.0),
            epsilon=opt("epsilon"),
            grid_n=opt("grid_n", int, 1024),
            seed=opt("seed", int, 0),
            mc_trials=opt("mc_trials", int, 0),
            output=kv["output"][0] if "output" in kv else None,
            workers=opt("workers", int, 1),
            source=source,
            lines={k: v[1] for k, v in kv.items()},
        )


def run_sweep(spec: SweepSpec) -> tuple[tuple[str, ...], list[tuple]]:
    """One row per ``(d, beta, t_e)``, lexicographic in that order."""
    header = px.SWEEP_HEADER + (MC_COLUMNS if spec.mc_trials > 0 else ())
    combos = list(itertools.product(spec.d, spec.beta, spec.t_e))
    states: dict[tuple[float, float], qm.DiscretizedState] = {}

    def projection(d, beta):
        t0 = 2.0 * d if spec.t0 is None else spec.t0
        return qm.ProjectionParams(beta, t0, spec.E0, spec.epsilon)

    for d, beta in itertools.product(spec.d, spec.beta):
        grid = qm.TimeGrid.for_window(d, n=spec.grid_n)
        states[(d, beta)] = qm.project_bob(qm.constrained_initial_state(d, grid), projection(d, beta))

    def row(combo):
        d, beta, t_e = combo
        cfg = kin.ExperimentConfig(d, beta, t_e)
        state = states[(d, beta)]
        out = px.full_report(cfg, state=state).row()
        if spec.mc_trials > 0:
            batch = mc.draw_trials(state, spec.mc_trials, spec.seed)
            s = mc.summarize(cfg, state, batch, spec.seed)
            out += (s.delta_fraction, s.empirical_var_tA, s.flip_fraction)
        return out

    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(row, combos))
    else:
        rows = [row(c) for c in combos]
    return header, rows


# ---------------------------------------------------------------- commands


def _resolve(args, config: dict, name: str, kind=float, default=None, required=False):
    value = getattr(args, name, None)
    if value is None and name in config:
        raw, lineno = config[name]
        value = _number(raw, name, lineno, args.config, kind)
    if value is None:
        value = default
    if value is None and required:
        raise ConfigError(f"missing required parameter --{name.replace('_', '-')}")
    return value


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def cmd_window(args, config) -> int:
    d = _resolve(args, config, "d", required=True)
    beta = _resolve(args, config, "beta", required=True)
    w = kin.emission_window(d, beta)
    print(kv_line([("t_e_min", w.t_e_min), ("t_e_max", w.t_e_max), ("width", w.width)]))
    return 0


def _cfg(args, config) -> kin.ExperimentConfig:
    return kin.ExperimentConfig(
        _resolve(args, config, "d", required=True),
        _resolve(args, config, "beta", required=True),
        _resolve(args, config, "te", required=True),
    )


def _projection(args, config, d: float, default_beta: float | None) -> qm.ProjectionParams:
    beta = _resolve(args, config, "proj_beta", default=default_beta)
    if beta is None:
        raise ConfigError("missing required parameter --beta")
    return qm.ProjectionParams(
        beta,
        _resolve(args, config, "t0", default=2.0 * d),
        _resolve(args, config, "E0", default=0.0),
        _resolve(args, config, "epsilon"),
        args.regularization,
    )


def cmd_report(args, config) -> int:
    cfg = _cfg(args, config)
    p = _projection(args, config, cfg.d, cfg.beta)
    rep = px.full_report(
        cfg, p, grid_n=_resolve(args, config, "grid_n", int, 1024), tol=_resolve(args, config, "tol")
    )
    if args.csv:
        write_rows(sys.stdout, px.SWEEP_HEADER, [rep.row()])
    else:
        print(kv_line(rep.items()))
    return 0


def cmd_sweep(args, config) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        spec = SweepSpec.parse(fh.read(), args.spec)
    if args.workers is not None:
        spec.workers = args.workers
    header, rows = run_sweep(spec)
    out = args.output or spec.output
    with _open_out(out) as fh:
        write_rows(fh, header, rows)
    return 0


def cmd_state(args, config) -> int:
    d = _resolve(args, config, "d", required=True)
    grid = qm.TimeGrid.for_window(d, n=_resolve(args, config, "grid_n", int, 1024))
    state = qm.constrained_initial_state(d, grid)
    beta = _resolve(args, config, "beta")
    if beta is not None:
        state = qm.project_bob(state, _projection(args, config, d, beta))
    with _open_out(args.output) as fh:
        if args.marginals:
            qm.write_marginals_csv(state, fh)
        else:
            qm.write_state_csv(state, fh)
    return 0


def cmd_mc(args, config) -> int:
    cfg = _cfg(args, config)
    p = _projection(args, config, cfg.d, cfg.beta)
    n = _resolve(args, config, "n", int, required=True)
    seed = _resolve(args, config, "seed", int, required=True)
    stats, batch = mc.run_trials(
        cfg, p, n, seed,
        grid_n=_resolve(args, config, "grid_n", int, 1024),
        workers=_resolve(args, config, "workers", int, 1),
        return_batch=True,
    )
    with _open_out(args.output) as fh:
        mc.write_stats_csv(stats, fh)
    if args.dump:
        mc.write_trials_csv(batch, args.dump)
    return 0


def cmd_diagram(args, config) -> int:
    cfg = _cfg(args, config)
    lines = kin.worldline_diagram(cfg, _resolve(args, config, "tmax", required=True))
    with _open_out(args.output) as fh:
        kin.write_diagram_csv(lines, fh)
    return 0


def cmd_selfcheck() -> int:
    from .selfcheck import run_all

    results = run_all()
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collapse-order", description=__doc__.splitlines()[0])
    parser.add_argument("--selfcheck", action="store_true", help="run the built-in verification suite")
    parser.add_argument("--config", help="flat key=value file supplying default flag values")
    parser.add_argument("-v", "--verbose", action="store_true", help="log raw projection weights")
    sub = parser.add_subparsers(dest="command")

    def scenario(p, te=True):
        p.add_argument("--d", type=float, help="Alice's distance from the source")
        p.add_argument("--beta", type=float, help="Bob's speed as a fraction of c")
        if te:
            p.add_argument("--te", type=float, help="emission time")

    def projection(p):
        p.add_argument("--proj-beta", dest="proj_beta", type=float,
                       help="beta of the projected state (defaults to --beta)")
        p.add_argument("--t0", type=float, help="Bob's recorded arrival time (default 2d)")
        p.add_argument("--E0", type=float, help="Bob's recorded energy (default 0)")
        p.add_argument("--epsilon", type=float, help="delta regularization width (default dt)")
        p.add_argument("--regularization", choices=("kronecker", "gaussian"), default="kronecker")
        p.add_argument("--grid-n", dest="grid_n", type=int, help="time grid size (power of two)")

    p = sub.add_parser("window", help="emission window for (d, beta)")
    scenario(p, te=False)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("report", help="ordering, uncertainty band and state diagnostics")
    scenario(p)
    projection(p)
    p.add_argument("--tol", type=float, help="simultaneity tolerance (default 2e-9 d)")
    p.add_argument("--csv", action="store_true", help="print as a CSV row with header")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", help="parameter sweep from a key=value spec file")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("state", help="dump a discretized state or its marginals")
    p.add_argument("--d", type=float)
    p.add_argument("--beta", type=float, help="project at this beta; omit for the constrained state")
    projection(p)
    p.add_argument("--marginals", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("mc", help="Monte Carlo trials of Bob's projection")
    scenario(p)
    projection(p)
    p.add_argument("--n", type=int, help="number of trials")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--dump", help="write per-trial CSV here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("diagram", help="worldline polylines as CSV")
    scenario(p)
    p.add_argument("--tmax", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.selfcheck:
        return cmd_selfcheck()
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        config = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                config = parse_kv(fh.read(), args.config)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args, config)
    except (DomainError, ParameterError, GridRangeError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
