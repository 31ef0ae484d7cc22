import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from leraylab import gronwall as gw
from leraylab.ledger import energy_ledger
from leraylab.weights import ContractError


def logistic_crossing(A, B, level=3.0):
    # alpha' = B (alpha + alpha^2)  =>  alpha / (1 + alpha) = A / (1 + A) exp(B t)
    a = level * A
    return math.log((a / (1 + a)) / (A / (1 + A))) / B


def test_t0_bound_closed_form():
    assert gw.t0_bound(gw.GronwallParams(1.0, 1.0, 2.0, 1.0)) == pytest.approx(1 / 18)
    assert gw.t0_bound(gw.GronwallParams(0.1, 0.1, 1.0, 1.0)) == pytest.approx(1 / 6)
    assert gw.t0_bound(gw.GronwallParams(1e-6, 0.0, 2.0, 0.01)) == pytest.approx(0.01)


@pytest.mark.parametrize("kwargs", [{"A": 0.0}, {"B": -1.0}, {"b": 0.5}, {"T1": 0.0}])
def test_invalid_parameters(kwargs):
    base = {"A": 1.0, "B": 1.0, "b": 2.0, "T1": 1.0}
    with pytest.raises(ContractError):
        gw.GronwallParams(**{**base, **kwargs})


def test_too_few_steps_rejected():
    with pytest.raises(ContractError):
        gw.verify_envelope(gw.GronwallParams(1.0, 1.0, 2.0, 1.0), steps=100)


@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0))
def test_rk4_matches_closed_form_for_b2(A, B):
    p = gw.GronwallParams(A, B, 2.0, 1.0)
    t_end = 0.5 * logistic_crossing(A, B, 1e6)  # well before blow-up
    t, a = gw.extremal_trajectory(p, t_end, 10_000)
    c = A / (1 + A) * np.exp(B * t)
    np.testing.assert_allclose(a, c / (1 - c), rtol=1e-8)


@given(st.floats(0.05, 10.0), st.floats(0.05, 10.0))
def test_first_crossing_closed_forms(A, B):
    assert gw.first_crossing(gw.GronwallParams(A, B, 1.0, 1.0)) == pytest.approx(math.log(3) / (2 * B), rel=1e-9)
    assert gw.first_crossing(gw.GronwallParams(A, B, 2.0, 1.0)) == pytest.approx(logistic_crossing(A, B), rel=1e-9)


def test_no_growth_never_crosses():
    assert gw.first_crossing(gw.GronwallParams(1.0, 0.0, 2.0, 1.0)) == math.inf


@given(st.floats(0.01, 10.0), st.floats(0.01, 20.0))
def test_linear_case_holds_exactly_below_threshold(A, B):
    # b = 1: alpha = A exp(2 B t) and T0 = 1/6, so the envelope holds iff B <= 3 ln 3
    threshold = 3 * math.log(3)
    assume(abs(B - threshold) > 1e-3)
    rep = gw.verify_envelope(gw.GronwallParams(A, B, 1.0, 1.0))
    assert rep.envelope_holds is (B < threshold)


@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.sampled_from([1.0, 2.0, 3.0]))
def test_rk4_and_event_paths_agree(A, B, b):
    rep = gw.verify_envelope(gw.GronwallParams(A, B, b, 1.0))
    assume(abs(rep.t_cross - rep.t0) > 1e-6 * rep.t0)
    assert rep.envelope_holds is (rep.t_cross > rep.t0)


def test_sweep_covers_grid():
    reps = gw.sweep()
    assert len(reps) == 27
    assert {(r.params.A, r.params.B, r.params.b) for r in reps} == {
        (A, B, b) for A in (0.1, 1.0, 10.0) for B in (0.1, 1.0, 10.0) for b in (1.0, 2.0, 3.0)
    }


def test_report_serializes_infinite_crossing_as_none():
    d = gw.verify_envelope(gw.GronwallParams(1.0, 0.0, 2.0, 1.0)).as_dict()
    assert d["t_cross"] is None and d["pass"] is True  # alpha stays at A


@given(st.floats(0.2, 2.0), st.floats(0.1, 1.0))
def test_fit_recovers_extremal_rate(A, B):
    p = gw.GronwallParams(A, B, 2.0, 1.0)
    t, a = gw.extremal_trajectory(p, 0.5 * logistic_crossing(A, B), 10_000)
    led = energy_ledger()
    for ti, ai in zip(t[::10], a[::10]):
        led.append((ti, ai, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
    rep = gw.fit_envelope(led, 2.0)
    assert rep.A_fit == pytest.approx(A)
    assert rep.B_fit == pytest.approx(B, rel=1e-3)


def test_fit_of_decaying_series_has_zero_rate():
    led = energy_ledger()
    for i in range(5):
        led.append((0.1 * i, 1.0 - 0.1 * i, 0, 0, 0, 0, 0, 0))
    rep = gw.fit_envelope(led, 2.0)
    assert rep.B_fit == 0.0 and rep.envelope_holds


def test_fit_contract():
    with pytest.raises(ContractError):
        gw.fit_envelope(energy_ledger(), 2.0)
    led = energy_ledger()
    led.append((0.0, 0.0, 0, 0, 0, 0, 0, 0))
    with pytest.raises(ContractError):
        gw.fit_envelope(led, 2.0)
