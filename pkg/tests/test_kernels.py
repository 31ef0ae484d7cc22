import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import solve_banded

from leraylab import _kernels_py, kernels

try:
    from leraylab import _kernels as compiled
except ImportError:  # pragma: no cover - fallback-only install
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def tridiagonal(rng, m, n):
    lower, upper = rng.normal(size=(m, n)), rng.normal(size=(m, n))
    diag = np.abs(lower) + np.abs(upper) + 1.0 + rng.random((m, n))
    return lower, diag, upper, rng.normal(size=(m, n))


@given(st.integers(0, 10_000), st.integers(1, 6), st.integers(2, 40))
def test_thomas_matches_banded_solver(seed, m, n):
    rng = np.random.default_rng(seed)
    lower, diag, upper, rhs = tridiagonal(rng, m, n)
    x = kernels.thomas_batched(lower, diag, upper, rhs)
    for k in range(m):
        ab = np.zeros((3, n))
        ab[0, 1:] = upper[k, :-1]
        ab[1] = diag[k]
        ab[2, :-1] = lower[k, 1:]
        np.testing.assert_allclose(x[k], solve_banded((1, 1), ab, rhs[k]), rtol=1e-10, atol=1e-12)


def test_log_mean_powers_matches_direct_mean():
    centers = np.array([[0.0, 0.0], [3.0, -1.0]])
    halves = np.array([1.0, 0.5])
    out = kernels.log_mean_powers(centers, halves, 8, 1.5, kernels.FORM_ONE_PLUS_ABS, np.array([1.0, -2.0]))
    g = (np.arange(8) + 0.5) / 8 * 2 - 1
    for i, (c, h) in enumerate(zip(centers, halves)):
        x, y = np.meshgrid(c[0] + h * g, c[1] + h * g)
        base = 1.0 + np.hypot(x, y)
        assert out[i, 0] == pytest.approx(np.log(np.mean(base ** -1.5)), rel=1e-12)
        assert out[i, 1] == pytest.approx(np.log(np.mean(base ** 3.0)), rel=1e-12)


def test_log_mean_powers_survives_huge_exponents():
    out = kernels.log_mean_powers(np.array([[1e6, 0.0]]), np.array([1.0]), 8, 2.0,
                                  kernels.FORM_ONE_PLUS_SQ_HALF, np.array([-400.0]))
    assert np.isfinite(out).all()
    assert out[0, 0] == pytest.approx(800.0 * np.log(1e6), rel=1e-6)


@given(st.integers(0, 10_000))
def test_muscl_tendency_conserves_r_weighted_mass(seed):
    rng = np.random.default_rng(seed)
    n_r, n_z, dr, dz = 12, 8, 0.1, 0.2
    eta = rng.normal(size=(n_r, n_z))
    flux_r = rng.normal(size=(n_r + 1, n_z))
    flux_r[0] = 0.0
    flux_z = rng.normal(size=(n_r, n_z))
    r_c = (np.arange(n_r) + 0.5) * dr
    tend = kernels.muscl_tendency(eta, flux_r, flux_z, r_c, dr, dz)
    assert abs(np.sum(tend * r_c[:, None])) * dr * dz < 1e-10 * (1 + np.abs(tend).max())


def test_muscl_tendency_vanishes_without_flow():
    eta = np.random.default_rng(0).normal(size=(6, 4))
    tend = kernels.muscl_tendency(eta, np.zeros((7, 4)), np.zeros((6, 4)), np.arange(6) + 0.5, 1.0, 1.0)
    assert not tend.any()


@needs_compiled
def test_backends_agree():
    rng = np.random.default_rng(1)
    args = tridiagonal(rng, 5, 30)
    np.testing.assert_array_equal(compiled.thomas_batched(*args), _kernels_py.thomas_batched(*args))
    centers, halves = rng.normal(size=(20, 3)) * 5, rng.random(20) + 0.1
    for form in (0, 1):
        a = compiled.log_mean_powers(centers, halves, 8, 1.3, form, np.array([1.0, -3.0]))
        b = _kernels_py.log_mean_powers(centers, halves, 8, 1.3, form, np.array([1.0, -3.0]))
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)
    eta = rng.normal(size=(16, 8))
    fr, fz = rng.normal(size=(17, 8)), rng.normal(size=(16, 8))
    r_c = (np.arange(16) + 0.5) * 0.1
    np.testing.assert_allclose(compiled.muscl_tendency(eta, fr, fz, r_c, 0.1, 0.2),
                               _kernels_py.muscl_tendency(eta, fr, fz, r_c, 0.1, 0.2), rtol=1e-14, atol=1e-12)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch(monkeypatch):
    import importlib

    monkeypatch.setenv("LERAYLAB_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.thomas_batched is _kernels_py.thomas_batched
    finally:
        monkeypatch.delenv("LERAYLAB_PURE_PYTHON")
        importlib.reload(kernels)
