import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collapse_order import kinematics as kin
from collapse_order import paradox as px
from collapse_order import quantum as qm
from collapse_order._errors import DomainError

pos = st.floats(1e-3, 100)
beta_s = st.floats(0.0, 0.99)


def test_resolve_rest_frame():
    r = px.resolve(1.0, 1.0, 0.0)
    assert r.upper == 1.0 and r.sigma_t == 0.0 and r.lower == 1.0


def test_resolve_example():
    r = px.resolve(1.0, 1.0, 0.5)
    assert r.upper == pytest.approx(math.sqrt(0.75), rel=1e-14)
    assert r.sigma_t == 1.0
    assert r.sigma_t_prime == pytest.approx(2 / math.sqrt(3), rel=1e-14)
    assert r.lower == pytest.approx((0.75 - 2) * 2 / math.sqrt(3), rel=1e-14)


@pytest.mark.parametrize("dt", [0.0, -1.0])
def test_resolve_requires_alice_first(dt):
    with pytest.raises(DomainError):
        px.resolve(dt, 1.0, 0.5)


@given(pos, pos, beta_s)
def test_identity_and_positivity(dt, d, beta):
    r = px.resolve(dt, d, beta)
    g = kin.gamma(beta)
    assert r.identity_residual <= 1e-9 * max(1.0, g * dt)
    assert abs(r.upper - dt * math.sqrt(1 - beta * beta)) <= 1e-9 * max(1.0, dt)
    assert r.upper > 0
    assert r.lower <= r.delta_t_prime <= r.upper


@given(pos, pos, st.floats(0.0, 0.98), st.floats(1e-3, 0.01))
def test_upper_strictly_decreasing_in_beta(dt, d, b, step):
    assert px.resolve(dt, d, b + step).upper < px.resolve(dt, d, b).upper


@given(pos, pos, st.floats(0.001, 0.99))
def test_band_straddles_zero_when_paradox_condition_holds(dt, d, beta):
    r = px.resolve(dt, d, beta)
    if kin.paradox_condition(dt, d, beta):
        assert r.straddles_zero


def test_full_report_paradox_row():
    rep = px.full_report(kin.ExperimentConfig(1, 0.5, 2))
    assert rep.ordering.regime is kin.Regime.PARADOX
    assert rep.in_window
    assert rep.resolution.upper == pytest.approx(rep.ordering.delta_t_lab * math.sqrt(0.75))
    assert rep.straddles_zero and rep.status == px.INDETERMINATE
    row = dict(zip(px.SWEEP_HEADER, rep.row()))
    assert row["regime"] == "Paradox" and row["sigma_t_paper"] == 1.0


def test_full_report_out_of_window_uses_magnitude():
    rep = px.full_report(kin.ExperimentConfig(1, 0.5, 0.5))
    assert rep.ordering.regime is kin.Regime.BOB_FIRST_BOTH
    assert not rep.in_window
    expected = px.resolve(abs(rep.ordering.delta_t_lab), 1, 0.5)
    assert rep.resolution == expected


def test_full_report_beta_one_discrepancy_visible():
    rep = px.full_report(kin.ExperimentConfig(1, 0.5, 2), projection=qm.ProjectionParams(1.0, 2.0))
    row = dict(rep.items())
    assert row["state_beta"] == 1.0
    assert row["var_tA_numeric"] == pytest.approx(1 / 3, abs=1e-3)
    assert row["sigma_t_paper"] ** 2 == 4.0


def test_determinate_status_when_band_positive():
    rep = px.full_report(kin.ExperimentConfig(1, 0.05, 40))
    assert rep.resolution.lower > 0 and rep.status == px.DETERMINATE
