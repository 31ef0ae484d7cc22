import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leraylab import axisym as ax
from leraylab.ledger import read_checkpoint_axi
from leraylab.weights import ContractError


def manufactured_error(n):
    g = ax.CylGrid(n, n, 6.0, 6.0)
    r, z = g.mesh
    k = 2 * np.pi / g.Z
    chi = np.exp(-r ** 2) * np.cos(k * z)
    # (d_r^2 + (3/r) d_r + d_z^2) chi in closed form
    rhs = (4 * r ** 2 - 8 - k ** 2) * np.exp(-r ** 2) * np.cos(k * z)
    return float(np.abs(g.solve_shifted(rhs, 0.0, 1.0) - chi).max())


def test_elliptic_solve_is_second_order():
    e = [manufactured_error(n) for n in (32, 64, 128)]
    assert e[-1] < 1.5e-3
    for coarse, fine in zip(e, e[1:]):
        assert 3.6 < coarse / fine < 4.4


@given(st.integers(0, 10_000))
def test_operator_is_non_positive(seed):
    g = ax.CylGrid(24, 16, 2.0, 3.0)
    f = np.random.default_rng(seed).normal(size=(24, 16))
    assert np.sum(f * g.apply_operator(f) * g.cell_volume) <= 0.0


@given(st.integers(0, 10_000), st.floats(0.1, 10.0))
def test_shifted_solve_inverts_operator(seed, b):
    g = ax.CylGrid(16, 8, 1.0, 2.0)
    x = np.random.default_rng(seed).normal(size=(16, 8))
    rhs = x - b * g.apply_operator(x)
    np.testing.assert_allclose(g.solve_shifted(rhs, 1.0, -b), x, atol=1e-9)


def test_grid_contract():
    with pytest.raises(ContractError):
        ax.CylGrid(8, 7, 1.0, 1.0)
    with pytest.raises(ContractError):
        ax.CylGrid(8, 8, 0.0, 1.0)


def test_velocity_is_exactly_divergence_free():
    g = ax.CylGrid(64, 64, 6.0, 6.0)
    state = ax.vortex_ring(g, amplitude=10.0)
    assert ax.discrete_divergence(state) < 1e-12
    assert np.all(state.flux_r[0] == 0.0)  # no flux through the axis


def test_stream_solve_rejects_bad_input():
    g = ax.CylGrid(8, 8, 1.0, 1.0)
    with pytest.raises(ContractError):
        ax.stream_solve(np.zeros((8, 6)), g)
    bad = np.zeros((8, 8))
    bad[0, 0] = np.nan
    with pytest.raises(ContractError):
        ax.stream_solve(bad, g)


@pytest.mark.parametrize("kwargs", [
    {"center": (0.4, 0.0), "radius": 0.25},
    {"center": (5.0, 0.0), "radius": 0.25},
    {"center": (1.0, 2.5), "radius": 0.25},
])
def test_ring_must_fit(kwargs):
    with pytest.raises(ContractError):
        ax.vortex_ring(ax.CylGrid(32, 32, 6.0, 6.0), **kwargs)


def test_diffusion_mode_decays_at_its_rate():
    g = ax.CylGrid(128, 32, 2.0, 4.0)
    state, rate = ax.diffusion_mode(g)
    dt, steps = 1e-4, 200
    s = state
    for _ in range(steps):
        s = ax.step_axi(s, dt, advect=False)
    measured = -np.log(np.abs(s.eta).max() / np.abs(state.eta).max()) / (dt * steps)
    assert measured == pytest.approx(rate, rel=5e-3)


def test_step_rejects_large_dt():
    g = ax.CylGrid(32, 32, 6.0, 6.0)
    state = ax.vortex_ring(g, amplitude=100.0)
    with pytest.raises(ContractError, match="advective"):
        ax.step_axi(state, 1.0)


def test_ring_run_invariants(tmp_path):
    cfg = ax.AxiConfig(n_r=64, n_z=64, dt=2e-3, t_end=0.1, output_every=5, checkpoint_every=25)
    res = ax.run_axi(cfg, tmp_path)
    mon = ax.ladyzhenskaya_monitor(res.ledger)
    assert mon["pass"] and mon["initial_bound_holds"]
    assert res.max_divergence < 1e-8
    assert res.min_eta_ratio > -1e-8
    assert len(res.checkpoints) == 3 and res.io_error is None
    ck = read_checkpoint_axi(res.checkpoints[-1])
    np.testing.assert_array_equal(ck["eta"], res.state.eta)
    assert (ck["n_r"], ck["n_z"], ck["R"]) == (64, 64, 6.0)


def test_ring_pair_keeps_sign_structure():
    g = ax.CylGrid(64, 64, 6.0, 6.0)
    state = ax.ring_pair(g, amplitude=20.0)
    for _ in range(20):
        state = ax.step_axi(state, 2e-3)
    # antisymmetric in z up to round-off
    np.testing.assert_allclose(state.eta, -state.eta[:, ::-1], atol=1e-10 * np.abs(state.eta).max())


def test_impulse_drift_shrinks_with_resolution():
    drift = []
    for n, dt in ((64, 2e-3), (128, 1e-3)):
        res = ax.run_axi(ax.AxiConfig(n_r=n, n_z=n, dt=dt, t_end=0.3, output_every=100))
        i0, i1 = res.impulse
        drift.append(abs(i1 - i0) / abs(i0))
    assert drift[1] < 1e-3
    assert drift[1] < drift[0] / 2.5


def test_ladyzhenskaya_monitor_flags_growth():
    from leraylab.ledger import axi_ledger

    led = axi_ledger()
    for t, q in ((0.0, 1.0), (0.1, 0.9), (0.2, 0.95)):
        led.append((t, q, 1.0, 1.0, 1.0))
    assert not ax.ladyzhenskaya_monitor(led)["pass"]


def test_weighted_vorticity_constant_for_ring():
    res = ax.run_axi(ax.AxiConfig(n_r=64, n_z=64, dt=2e-3, t_end=0.1, output_every=5))
    rep = ax.verify_coe1(res.ledger, ax.AxiConfig().phi(), ax.AxiConfig().psi())
    assert rep.envelope_consistent and rep.pair.passed
    assert np.isfinite(rep.c_signed)


def test_stretching_identity_converges_at_second_order():
    res = []
    for n in (64, 128, 256):
        g = ax.CylGrid(n, n, 3.0, 3.0)
        r, z = g.mesh
        res.append(ax.stretching_identity_check(ax.make_state(np.exp(-r ** 2 - z ** 2), g)))
    assert res[-1] < 1e-3
    for coarse, fine in zip(res, res[1:]):
        assert 3.5 < coarse / fine < 4.5


def test_stretching_residual_on_analytic_field():
    rng = np.random.default_rng(0)
    r = rng.uniform(0.5, 2.0, 50)
    z = rng.uniform(-1.0, 1.0, 50)
    theta = rng.uniform(0, 2 * np.pi, 50)
    res = [ax.stretching_residual(lambda rr, zz: rr * np.exp(-rr ** 2 - zz ** 2), r, z, theta, h)
           for h in (0.1, 0.05, 0.025)]
    for coarse, fine in zip(res, res[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=0.05)


def test_zero_vorticity_has_zero_residual():
    g = ax.CylGrid(16, 16, 3.0, 3.0)
    assert ax.stretching_identity_check(ax.make_state(np.zeros((16, 16)), g)) == 0.0
