import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapse_order import kinematics as kin
from collapse_order._errors import DomainError, GridRangeError
from collapse_order.kinematics import ExperimentConfig, Regime

betas = st.floats(0.0, 0.99)
spans = st.floats(-100, 100, allow_nan=False)


def gamma_mp(beta):
    mpmath.mp.dps = 40
    return float(1 / mpmath.sqrt(1 - mpmath.mpf(beta) ** 2))


def intersect(cfg):
    """Bob's detection: solve x - t = -t_e, x - beta t = 0."""
    A = np.array([[1.0, -1.0], [1.0, -cfg.beta]])
    x, t = np.linalg.solve(A, [-cfg.t_e, 0.0])
    return x, t


@pytest.mark.parametrize("beta", [0.0, 0.6, 0.8, 0.3, 0.99])
def test_gamma_matches_high_precision(beta):
    assert kin.gamma(beta) == pytest.approx(gamma_mp(beta), rel=1e-15)


def test_gamma_examples():
    assert kin.gamma(0) == 1.0
    assert kin.gamma(0.6) == pytest.approx(1.25, rel=1e-15)
    assert kin.gamma(0.8) == pytest.approx(5 / 3, rel=1e-15)


@pytest.mark.parametrize("beta", [-0.1, 1.0, 1.5, float("nan")])
def test_gamma_rejects_out_of_domain(beta):
    with pytest.raises(DomainError):
        kin.gamma(beta)


@pytest.mark.parametrize(
    "dt, dx, beta, expected",
    [
        (1, 0, 0, (1, 0)),
        (1, 3, 0.5, (-1 / math.sqrt(3), 5 / math.sqrt(3))),
        (2, 2, 0.6, (1, 1)),
    ],
)
def test_boost_examples(dt, dx, beta, expected):
    tp, xp = kin.boost_interval(dt, dx, beta)
    assert tp == pytest.approx(expected[0], rel=1e-14, abs=1e-15)
    assert xp == pytest.approx(expected[1], rel=1e-14, abs=1e-15)


def test_boost_example_interval_preserved():
    tp, xp = kin.boost_interval(1, 3, 0.5)
    assert tp**2 - xp**2 == pytest.approx(-8, rel=1e-14)


@given(spans, spans, betas)
@settings(max_examples=300)
def test_interval_invariant(dt, dx, beta):
    tp, xp = kin.boost_interval(dt, dx, beta)
    scale = max(tp * tp + xp * xp, dt * dt + dx * dx, 1e-300)
    assert abs((tp * tp - xp * xp) - (dt * dt - dx * dx)) <= 1e-12 * scale


@given(spans, spans, betas)
@settings(max_examples=300)
def test_inverse_boost_round_trip(dt, dx, beta):
    bt, bx = kin.inverse_boost_interval(*kin.boost_interval(dt, dx, beta), beta)
    scale = max(abs(dt), abs(dx), 1e-300)
    assert abs(bt - dt) <= 1e-12 * scale and abs(bx - dx) <= 1e-12 * scale


@pytest.mark.parametrize(
    "dt, d, beta, expected", [(1, 1, 0, False), (0.9, 1, 0.5, True), (1.1, 1, 0.5, False)]
)
def test_paradox_condition(dt, d, beta, expected):
    assert kin.paradox_condition(dt, d, beta) is expected


@given(st.floats(0.01, 10), st.floats(0.0, 0.99), st.floats(0.01, 10))
def test_paradox_condition_matches_sign_flip_of_eq1(dt, beta, d):
    flipped = kin.gamma(beta) * (dt - beta * 2 * d) < 0
    assert kin.paradox_condition(dt, d, beta) == flipped


@pytest.mark.parametrize("d, beta, expected", [(1, 0.5, (1, 3, 2)), (2, 0.8, (0.5, 4.5, 4))])
def test_emission_window_examples(d, beta, expected):
    w = kin.emission_window(d, beta)
    assert (w.t_e_min, w.t_e_max, w.width) == pytest.approx(expected, rel=1e-14)


def test_emission_window_rejects_rest():
    with pytest.raises(DomainError):
        kin.emission_window(1.0, 0.0)


def _bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("d, beta", [(1, 0.5), (2, 0.8), (0.3, 0.1), (5, 0.95)])
def test_window_edges_found_by_bisection(d, beta):
    """Oracle: locate the lab and Bob-frame simultaneity crossings by bisection
    on the hand-solved worldline intersection, without the window formula."""

    def lab_dt(t_e):
        x_b, t_b = intersect(ExperimentConfig(d, beta, t_e))
        return t_b - (t_e + d)

    def bob_dt(t_e):
        x_b, t_b = intersect(ExperimentConfig(d, beta, t_e))
        return (t_b - (t_e + d)) - beta * (x_b + d)

    hi = 10 * d / beta
    lo_edge = _bisect(lab_dt, 0.0, hi)
    hi_edge = _bisect(bob_dt, 0.0, hi)
    w = kin.emission_window(d, beta)
    assert w.t_e_min == pytest.approx(lo_edge, rel=1e-9, abs=1e-12)
    assert w.t_e_max == pytest.approx(hi_edge, rel=1e-9)


def test_window_width_randomized(rng):
    for d, beta in zip(rng.uniform(0.1, 10, 1000), rng.uniform(0.05, 0.99, 1000)):
        w = kin.emission_window(d, beta)
        assert w.width == 2 * d
        assert abs((w.t_e_max - w.t_e_min) - 2 * d) < 1e-12 * d


@pytest.mark.parametrize(
    "t_e, alice, bob", [(2.0, (-1, 3), (2, 4)), (0.5, (-1, 1.5), (0.5, 1))]
)
def test_measurement_events_examples(t_e, alice, bob):
    a, b = kin.measurement_events(ExperimentConfig(1, 0.5, t_e))
    assert (a.x, a.t) == pytest.approx(alice)
    assert (b.x, b.t) == pytest.approx(bob)
    assert a.frame is kin.Frame.LAB


@given(st.floats(0.1, 10), st.floats(0.01, 0.99), st.floats(0, 50))
def test_bob_on_photon_line_and_worldline(d, beta, t_e):
    cfg = ExperimentConfig(d, beta, t_e)
    _, b = kin.measurement_events(cfg)
    x, t = intersect(cfg)
    assert b.x == pytest.approx(b.t - t_e, abs=1e-9 * max(1, b.t))
    assert (b.x, b.t) == pytest.approx((x, t), rel=1e-9, abs=1e-12)


def test_event_to_bob_frame_agrees_with_boost():
    ev = kin.SpacetimeEvent(2.0, 4.0)
    bev = ev.to_bob_frame(0.5)
    assert bev.frame is kin.Frame.BOB
    assert (bev.t, bev.x) == pytest.approx(kin.boost_interval(4.0, 2.0, 0.5))
    with pytest.raises(DomainError):
        bev.to_bob_frame(0.5)


def test_event_frame_is_immutable():
    ev = kin.SpacetimeEvent(0.0, 1.0)
    with pytest.raises(AttributeError):
        ev.frame = kin.Frame.BOB


@pytest.mark.parametrize(
    "kwargs", [dict(d=0, beta=0.5, t_e=1), dict(d=1, beta=0, t_e=1), dict(d=1, beta=1, t_e=1), dict(d=1, beta=0.5, t_e=-1)]
)
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        ExperimentConfig(**kwargs)


@pytest.mark.parametrize(
    "dt, d, beta, expected",
    [(1, 1, 0, 1.0), (1, 1, 0.5, (0.75 - 1) * 2 / math.sqrt(3)), (1, 0.1, 0.5, (0.75 - 0.1) * 2 / math.sqrt(3))],
)
def test_delta_t_paper_model(dt, d, beta, expected):
    assert kin.delta_t_paper_model(dt, d, beta) == pytest.approx(expected, rel=1e-14)


def test_paper_model_equals_exact_boost_at_window_start(rng):
    for d, beta in zip(rng.uniform(0.1, 5, 50), rng.uniform(0.05, 0.95, 50)):
        rep = kin.classify_ordering(ExperimentConfig(d, beta, kin.emission_window(d, beta).t_e_min))
        assert rep.delta_t_bob_paper == pytest.approx(rep.delta_t_bob_exact, abs=1e-12 * d)


@pytest.mark.parametrize(
    "t_e, regime", [(0.5, Regime.BOB_FIRST_BOTH), (2.0, Regime.PARADOX), (3.5, Regime.ALICE_FIRST_BOTH)]
)
def test_classify_caption_regimes(t_e, regime):
    assert kin.classify_ordering(ExperimentConfig(1, 0.5, t_e)).regime is regime


def test_paradox_fills_open_window(rng):
    for d, beta, u in zip(rng.uniform(0.1, 10, 1000), rng.uniform(0.05, 0.95, 1000), rng.random(1000)):
        w = kin.emission_window(d, beta)
        tol = kin.default_tolerance(d)
        margin = 10 * tol
        t_e = w.t_e_min + margin + u * (w.width - 2 * margin)
        rep = kin.classify_ordering(ExperimentConfig(d, beta, t_e), tol)
        assert rep.delta_t_lab > 0 and rep.delta_t_bob_exact < 0
        assert rep.regime is Regime.PARADOX


def test_window_edges_are_simultaneity_boundaries(rng):
    for d, beta in zip(rng.uniform(0.1, 10, 200), rng.uniform(0.05, 0.95, 200)):
        w = kin.emission_window(d, beta)
        lo = kin.classify_ordering(ExperimentConfig(d, beta, w.t_e_min))
        hi = kin.classify_ordering(ExperimentConfig(d, beta, w.t_e_max))
        assert abs(lo.delta_t_lab) < lo.tol and lo.regime is Regime.BOUNDARY
        assert abs(hi.delta_t_bob_exact) < hi.tol and hi.regime is Regime.BOUNDARY


def test_brute_force_scan_agrees_with_window():
    d, beta = 1.3, 0.4
    w = kin.emission_window(d, beta)
    grid = np.linspace(0, 3 * w.t_e_max, 3001)
    grid = grid[(np.abs(grid - w.t_e_min) > 1e-6) & (np.abs(grid - w.t_e_max) > 1e-6)]
    paradox = [kin.classify_ordering(ExperimentConfig(d, beta, t)).regime is Regime.PARADOX for t in grid]
    inside = [w.contains(t) for t in grid]
    assert paradox == inside


@given(st.floats(0.1, 10), st.floats(0.05, 0.95), st.floats(0, 1), st.floats(0.01, 100))
def test_classification_scale_invariant(d, beta, frac, s):
    t_e = frac * 3 * d / beta
    tol = kin.default_tolerance(d)
    a = kin.classify_ordering(ExperimentConfig(d, beta, t_e), tol)
    b = kin.classify_ordering(ExperimentConfig(s * d, beta, s * t_e), s * tol)
    assert a.regime is b.regime


def test_classify_rejects_bad_tol():
    with pytest.raises(DomainError):
        kin.classify_ordering(ExperimentConfig(1, 0.5, 2), tol=0)


def test_worldline_diagram_shapes():
    lines = kin.worldline_diagram(ExperimentConfig(1, 0.5, 2), 5)
    by = {(pl.series, pl.label): pl.points for pl in lines}
    alice = by[("alice", "Alice worldline")]
    assert np.all(alice[:, 0] == -1)
    for key in [("photon_alice", "photon to Alice"), ("photon_bob", "photon to Bob")]:
        (x0, t0), (x1, t1) = by[key]
        assert abs((t1 - t0) / (x1 - x0)) == pytest.approx(1.0)
    assert tuple(by[("events", "alice_measurement")][0]) == pytest.approx((-1, 3))
    assert tuple(by[("events", "bob_measurement")][0]) == pytest.approx((2, 4))
    bob = by[("bob", "Bob worldline")]
    assert bob[1, 0] / bob[1, 1] == pytest.approx(0.5)


def test_worldline_diagram_range_error():
    with pytest.raises(GridRangeError):
        kin.worldline_diagram(ExperimentConfig(1, 0.5, 2), 3.5)


def test_diagram_csv_format():
    text = kin.write_diagram_csv(kin.worldline_diagram(ExperimentConfig(1, 0.3, 2), 5))
    lines = text.splitlines()
    assert lines[0] == "series,label,x,t"
    t_b = 2 / 0.7
    assert f"events,bob_measurement,{0.3 * t_b:.17g},{t_b:.17g}" in lines
    row = next(line for line in lines if line.startswith("events,bob_measurement"))
    assert float(row.split(",")[3]) == t_b
