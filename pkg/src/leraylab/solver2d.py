"""Mollified 2D Navier-Stokes on a periodic box with weighted energy ledgers.

The system solved is ``du/dt = Lap u - P[(b . grad) u]`` with ``b`` the
mollified velocity (``b = u`` when ``epsilon = 0``) and viscosity 1.  Time
stepping is a fourth-order integrating-factor Runge-Kutta scheme: the heat
semigroup is applied exactly in transform space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import ledger as ledger_mod
from .ledger import Ledger, cumulative_trapezoid
from .spectral import (
    MollifierShape, MollifierSpec, PeriodicGrid, dealias_coeffs, leray_coeffs,
    mollifier_symbol, weighted_lp_values,
)
from .weights import ContractError, Family, Form, WeightSpec

CFL_FRACTION = 0.25


class BlowUpError(RuntimeError):
    """Non-finite values appeared; ``last_state`` is the last finite state."""

    def __init__(self, message: str, last_state: "SimState2D"):
        super().__init__(message)
        self.last_state = last_state


class CFLError(ContractError):
    pass


@dataclass(frozen=True)
class SimState2D:
    t: float
    uh: np.ndarray  # (2, n, n//2+1) transform-space velocity
    epsilon: float
    grid: PeriodicGrid
    shape: MollifierShape = MollifierShape.COMPACT_BUMP

    @property
    def u(self) -> np.ndarray:
        return self.grid.inverse(self.uh)

    @classmethod
    def from_values(cls, grid: PeriodicGrid, u: np.ndarray, t: float = 0.0, epsilon: float = 0.0,
                    shape=MollifierShape.COMPACT_BUMP) -> "SimState2D":
        return cls(t, grid.forward(np.asarray(u, dtype=np.float64)), epsilon, grid, MollifierShape(shape))


@dataclass
class RunConfig:
    n: int = 64
    L: float = 2.0 * math.pi
    dt: float = 1e-3
    t_end: float = 1.0
    epsilon: float = 0.0
    mollifier: str = "compact_bump"
    weight_family: str = "constant"
    weight_gamma: float = 0.0
    weight_form: str = "one_plus_abs"
    init: str = "taylor_green"
    init_file: str = ""
    amplitude: float = 1.0
    spectrum_slope: float = 3.0
    envelope_offset: float = 0.125  # envelope centre, as a fraction of L along x1
    envelope_width: float = 0.05  # envelope standard deviation, as a fraction of L
    cutoff_radius: float = 0.0  # > 0 applies a radial cutoff before projecting
    output_every: int = 10
    dense_start: int = 10
    checkpoint_every: int = 0
    seed: int = 0

    def weight(self) -> WeightSpec:
        fam = Family(self.weight_family)
        return WeightSpec(fam, self.weight_gamma, 2, Form(self.weight_form))

    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.n, self.L)


# ---------------------------------------------------------------- initial data

def taylor_green(grid: PeriodicGrid, amplitude: float = 1.0) -> np.ndarray:
    k0 = 2.0 * np.pi / grid.L
    x1, x2 = grid.mesh
    return amplitude * np.stack([
        np.cos(k0 * x1) * np.sin(k0 * x2),
        -np.sin(k0 * x1) * np.cos(k0 * x2),
    ])


RANDOM_MODE_BAND = 12
FIELD_BAND = 20  # final cutoff; inside the 2/3 band of every grid with n >= 64


def random_divfree(grid: PeriodicGrid, seed: int, amplitude: float = 1.0, slope: float = 3.0,
                   offset: float = 0.125, width: float = 0.05) -> np.ndarray:
    """Localized random divergence-free field.

    A stream function with power-law energy spectrum ``|k|^(-slope)`` on the
    modes ``|m_j| <= RANDOM_MODE_BAND`` is multiplied by a Gaussian envelope;
    the velocity is its perpendicular gradient, cut to ``|m_j| <= FIELD_BAND``,
    projected and rescaled so ``||u||_2 = amplitude``.  Everything depends
    only on the seed, so grids of different resolution sample the same
    band-limited field.
    """
    band = RANDOM_MODE_BAND
    if grid.n < 3 * FIELD_BAND:
        raise ContractError(f"random data needs n >= {3 * FIELD_BAND}")
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=(2 * band + 1, band + 1)) + 1j * rng.normal(size=(2 * band + 1, band + 1))
    m1 = np.arange(-band, band + 1)[:, None]
    m2 = np.arange(band + 1)[None, :]
    km = np.hypot(m1, m2)
    with np.errstate(divide="ignore"):
        # E(k) ~ k^-slope in 2D means |psi_k| ~ k^(-(slope + 3) / 2)
        amp = np.where(km > 0, km, 1.0) ** (-(slope + 3.0) / 2.0) * (km > 0)
    ph = np.zeros(grid.spectral_shape, dtype=np.complex128)
    # phase so each mode is exp(i k . x) in physical coordinates, not grid indices
    shift = np.exp(1j * (2.0 * np.pi / grid.L) * (m1 + m2) * grid.nodes[0])
    ph[m1 % grid.n, m2] = amp * noise * shift
    ph[:, 0] = 0.0  # keep the m2 = 0 column Hermitian by dropping it
    psi = grid.inverse(ph) * grid.n ** 2 / (2 * band + 1) ** 2
    x1, x2 = grid.mesh
    sigma = width * grid.L
    env = np.exp(-((x1 - offset * grid.L) ** 2 + x2 ** 2) / (2.0 * sigma ** 2))
    m1g, m2g = grid.mode_index
    ph = grid.forward(psi * env) * ((np.abs(m1g) <= FIELD_BAND) & (np.abs(m2g) <= FIELD_BAND))
    k1, k2 = grid.kd
    uh = leray_coeffs(grid, np.stack([1j * k2 * ph, -1j * k1 * ph]))
    u = grid.inverse(uh)
    norm = np.sqrt(np.sum(u * u) * grid.cell_area)
    return u * (amplitude / norm) if norm > 0 else u


def read_field_file(path, grid: PeriodicGrid) -> np.ndarray:
    """Read ``i j u1 u2`` lines (``#`` comments allowed); missing nodes are zero."""
    u = np.zeros((2, grid.n, grid.n))
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise OSError(f"{path}:{lineno}: expected 'i j u1 u2', got {len(parts)} fields")
        try:
            i, j = int(parts[0]), int(parts[1])
            v1, v2 = float(parts[2]), float(parts[3])
        except ValueError as exc:
            raise OSError(f"{path}:{lineno}: {exc}") from exc
        if not (0 <= i < grid.n and 0 <= j < grid.n):
            raise OSError(f"{path}:{lineno}: node ({i}, {j}) outside a {grid.n}x{grid.n} grid")
        u[:, i, j] = (v1, v2)
    return u


def init_data(kind: str, grid: PeriodicGrid, seed: int = 0, config: RunConfig | None = None) -> np.ndarray:
    cfg = config or RunConfig(n=grid.n, L=grid.L, seed=seed)
    if kind == "taylor_green":
        u = taylor_green(grid, cfg.amplitude)
    elif kind == "random_divfree":
        u = random_divfree(grid, seed, cfg.amplitude, cfg.spectrum_slope,
                           cfg.envelope_offset, cfg.envelope_width)
    elif kind == "file":
        u = read_field_file(cfg.init_file, grid)
    else:
        raise ContractError(f"unknown initial data kind {kind!r}")
    if cfg.cutoff_radius > 0:
        x1, x2 = grid.mesh
        rho = np.hypot(x1, x2) / cfg.cutoff_radius
        mask = np.where(rho < 1.0, 1.0, np.exp(-((rho - 1.0) / 0.1) ** 2))
        u = u * mask
    return grid.inverse(leray_coeffs(grid, grid.forward(u)))


# ---------------------------------------------------------------- stepping

def nonlinear(state_grid: PeriodicGrid, uh: np.ndarray, mol_sym: np.ndarray | None) -> np.ndarray:
    """``-P[(b . grad) u]`` in transform space, dealiased."""
    g = state_grid
    bh = uh if mol_sym is None else uh * mol_sym
    b = g.inverse(dealias_coeffs(g, bh))
    k1, k2 = g.kd
    ud = dealias_coeffs(g, uh)
    d1 = g.inverse(1j * k1 * ud)
    d2 = g.inverse(1j * k2 * ud)
    adv = b[0] * d1 + b[1] * d2
    return -leray_coeffs(g, dealias_coeffs(g, g.forward(adv)))


def _mollifier(state: SimState2D):
    if state.epsilon == 0.0:
        return None
    return mollifier_symbol(state.grid, MollifierSpec(state.epsilon, state.shape))


def step(state: SimState2D, dt: float, advect: bool = True) -> SimState2D:
    """One integrating-factor RK4 step; ``advect=False`` gives the pure heat flow."""
    g = state.grid
    e_full = np.exp(-g.k_sq * dt)
    e_half = np.exp(-g.k_sq * (0.5 * dt))
    u = state.uh
    if advect:
        sym = _mollifier(state)
        k1 = dt * nonlinear(g, u, sym)
        k2 = dt * nonlinear(g, e_half * (u + 0.5 * k1), sym)
        k3 = dt * nonlinear(g, e_half * u + 0.5 * k2, sym)
        k4 = dt * nonlinear(g, e_full * u + e_half * k3, sym)
        new = e_full * u + (e_full * k1 + 2.0 * e_half * (k2 + k3) + k4) / 6.0
    else:
        new = e_full * u
    if not np.all(np.isfinite(new)):
        raise BlowUpError(f"non-finite velocity at t={state.t + dt:g}", state)
    return replace(state, t=state.t + dt, uh=new)


def max_speed(state: SimState2D) -> float:
    u = state.u
    return float(np.sqrt((u * u).sum(axis=0)).max())


def cfl_limit(state: SimState2D) -> float:
    vmax = max_speed(state)
    return math.inf if vmax == 0 else CFL_FRACTION * state.grid.h / vmax


# ---------------------------------------------------------------- diagnostics

def _parseval_weights(g: PeriodicGrid) -> np.ndarray:
    w = np.full(g.spectral_shape, 2.0)
    w[:, 0] = 1.0
    w[:, -1] = 1.0
    return w * g.cell_area / g.n ** 2


def modal_energy(g: PeriodicGrid, uh: np.ndarray) -> np.ndarray:
    """Per-mode contribution to ``||u||_2^2``."""
    return _parseval_weights(g) * (np.abs(uh[0]) ** 2 + np.abs(uh[1]) ** 2)


def _exp_trapezoid_weights(kappa: np.ndarray, dt: float):
    """Weights (w0, w1) with ``int_0^dt e(s) ds = w0 e(0) + w1 e(dt)``.

    Exact when ``e(s) = exp(-2 kappa s)`` times a linear function, which is
    how each Fourier mode's energy evolves under the heat flow.
    """
    x = 2.0 * kappa * dt
    small = x < 1e-3
    xs = np.where(small, 1.0, x)
    f0 = np.where(small, 0.5 - x / 6.0 + x * x / 24.0,
                  (-np.expm1(-xs)) / xs - (-np.expm1(-xs) - xs * np.exp(-xs)) / xs ** 2)
    # e(dt) already carries the factor exp(-x); f1 includes exp(+x) to undo it
    xc = np.minimum(xs, 700.0)
    f1 = np.where(small, 0.5 + x / 6.0 + x * x / 24.0, (np.expm1(xc) - xc) / xc ** 2)
    return dt * f0, dt * f1


def ledger_row(state: SimState2D, weight: WeightSpec, diss_cum: float) -> tuple:
    g = state.grid
    uh = state.uh
    k1, k2 = g.kd
    u = g.inverse(uh)
    grads = g.inverse(np.stack([1j * k1 * uh, 1j * k2 * uh]))  # (2 deriv, 2 comp, n, n)
    om_h = 1j * (k1 * uh[1] - k2 * uh[0])
    om = g.inverse(om_h)
    gom = g.inverse(np.stack([1j * k1 * om_h, 1j * k2 * om_h]))
    w = g.weight_values(weight)
    da = g.cell_area
    return (
        state.t,
        float(np.sum(w * (u * u).sum(axis=0)) * da),
        float(np.sum(w * (grads * grads).sum(axis=(0, 1))) * da),
        float(np.sum(w * om * om) * da),
        float(np.sum(w * (gom * gom).sum(axis=0)) * da),
        diss_cum,
        float(modal_energy(g, uh).sum()),
        weighted_lp_values(g, u, weight, 4.0),
    )


@dataclass
class RunResult:
    state: SimState2D
    ledger: Ledger
    checkpoints: list = field(default_factory=list)
    io_error: str | None = None


def run(config: RunConfig, output_dir=None, initial_u: np.ndarray | None = None,
        advect: bool = True) -> RunResult:
    grid = config.grid()
    weight = config.weight()
    u0 = init_data(config.init, grid, config.seed, config) if initial_u is None else initial_u
    state = SimState2D.from_values(grid, u0, 0.0, config.epsilon, config.mollifier)
    mollifier_symbol(grid, MollifierSpec(config.epsilon, config.mollifier))  # validates epsilon
    led = ledger_mod.energy_ledger()
    led.meta.update({"n": config.n, "L": config.L, "dt": config.dt, "epsilon": config.epsilon})
    result = RunResult(state, led)
    n_steps = int(round(config.t_end / config.dt)) if config.t_end > 0 else 0
    kappa = grid.k_sq
    w0, w1 = _exp_trapezoid_weights(kappa, config.dt)
    diss = 0.0
    led.append(ledger_row(state, weight, diss))
    out = Path(output_dir) if output_dir is not None else None
    e_prev = modal_energy(grid, state.uh)
    if advect and n_steps and config.dt > cfl_limit(state):
        raise CFLError(f"dt={config.dt:g} exceeds the advective bound {cfl_limit(state):.3g}")
    for s in range(1, n_steps + 1):
        state = step(state, config.dt, advect)
        e_new = modal_energy(grid, state.uh)
        diss += float(np.sum(2.0 * kappa * (w0 * e_prev + w1 * e_new)))
        e_prev = e_new
        if s <= config.dense_start or s % config.output_every == 0 or s == n_steps:
            led.append(ledger_row(state, weight, diss))
            if advect and config.dt > cfl_limit(state):
                raise CFLError(f"dt={config.dt:g} exceeds the advective bound at t={state.t:g}")
        if out is not None and config.checkpoint_every and s % config.checkpoint_every == 0:
            _checkpoint(result, out, state, s)
    result.state = state
    if out is not None:
        _checkpoint(result, out, state, n_steps)
        try:
            led.write_csv(out / "ledger.csv")
        except OSError as exc:
            result.io_error = str(exc)
            led.meta["io_error"] = str(exc)
    return result


def _checkpoint(result: RunResult, out: Path, state: SimState2D, s: int) -> None:
    path = out / f"checkpoint_{s:07d}.bin"
    try:
        ledger_mod.write_checkpoint_2d(path, state.grid.n, state.grid.L, state.t, state.epsilon, state.u)
        result.checkpoints.append(str(path))
    except OSError as exc:
        result.io_error = str(exc)
        result.ledger.meta["io_error"] = str(exc)


# ---------------------------------------------------------------- verifiers

def _min_constant(excess: np.ndarray, integral: np.ndarray) -> tuple[float, float]:
    """Smallest ``c`` with ``excess <= c * integral`` row-wise.

    The right-hand side is affine in ``c`` so the threshold is a maximum of
    ratios; returns (clamped at zero, signed).
    """
    mask = integral > 0
    tight = excess[~mask]
    if np.any(tight > 1e-14 * (1.0 + np.abs(tight))):
        return math.inf, math.inf
    if not np.any(mask):
        return 0.0, 0.0
    signed = float(np.max(excess[mask] / integral[mask]))
    return max(0.0, signed), signed


@dataclass
class ConstantReport:
    name: str
    c_min: float
    c_signed: float
    holds: bool | None = None
    c_tested: float | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "c_min": self.c_min, "c_signed": self.c_signed,
                "holds": self.holds, "c_tested": self.c_tested, **self.details}


def verify_pc(led: Ledger, c_phi: float | None = None, d: int = 2) -> ConstantReport:
    """Weighted energy inequality: ``LHS(t) <= e(0) + c int (e + e^d)``."""
    t = led["t"]
    e = led["e_phi_u"]
    lhs = e + cumulative_trapezoid(t, led["e_phi_grad_u"])
    integral = cumulative_trapezoid(t, e + e ** d)
    excess = lhs - e[0]
    c_min, c_signed = _min_constant(excess, integral)
    rep = ConstantReport("pc", c_min, c_signed)
    if c_phi is not None:
        rep.c_tested = c_phi
        rep.holds = bool(np.all(excess <= c_phi * integral + 1e-12 * (1.0 + np.abs(lhs))))
    return rep


def verify_vorticity_2d(led: Ledger) -> ConstantReport:
    """``Omega(t) <= Omega(0) exp(C int (1 + ||sqrt(Phi) u||_4^(4/3)))``, minimal C."""
    t = led["t"]
    om = led["e_phi_omega"]
    if om[0] == 0.0:
        if np.all(om == 0.0):
            return ConstantReport("vorticity_2d", 0.0, 0.0, holds=True)
        return ConstantReport("vorticity_2d", math.inf, math.inf, holds=False)
    integral = cumulative_trapezoid(t, 1.0 + led["u_l4_phi"] ** (4.0 / 3.0))
    with np.errstate(divide="ignore"):
        excess = np.log(om / om[0])
    c_min, c_signed = _min_constant(excess, integral)
    return ConstantReport("vorticity_2d", c_min, c_signed, holds=bool(np.isfinite(c_min)))


def energy_drift(led: Ledger) -> float:
    """``max_t |E(t) + diss(t) - E(0)| / E(0)`` for the unweighted energy."""
    e = led["e_u_l2"]
    if e[0] == 0.0:
        return 0.0
    return float(np.max(np.abs(e + led["diss_cum"] - e[0])) / e[0])


def continuity_at_zero(led: Ledger, n_fit: int = 4, tol: float = 1e-4) -> dict:
    """Extrapolate ``||sqrt(Phi) u(t)||^2`` to ``t = 0`` from the first rows."""
    t = led["t"]
    e = led["e_phi_u"]
    if len(t) < 3:
        raise ContractError("need at least three ledger rows near t = 0")
    k = min(n_fit, len(t) - 1)
    ts, es = t[1:k + 1], e[1:k + 1]
    coeffs = np.polyfit(ts, es, min(2, k - 1))
    limit = float(np.polyval(coeffs, 0.0))
    scale = abs(e[0]) if e[0] != 0 else 1.0
    rel = abs(limit - e[0]) / scale
    return {"limit": limit, "initial": float(e[0]), "relative_gap": rel, "pass": bool(rel <= tol)}


# ---------------------------------------------------------------- scaling

def _interp_matrix(grid: PeriodicGrid, targets: np.ndarray) -> np.ndarray:
    """Rows evaluate the real trigonometric interpolant at ``targets``."""
    n = grid.n
    k = 2.0 * np.pi / grid.L * np.arange(n // 2 + 1)
    diff = targets[:, None] - grid.nodes[None, :]
    c = np.ones(n // 2 + 1)
    c[1:-1] = 2.0
    return np.cos(diff[..., None] * k).dot(c) / n


def scale_state(state: SimState2D, lam: float, extension: str = "zero") -> SimState2D:
    """``u_lam(x) = lam * u(lam x)`` at time ``t / lam^2`` with mollifier ``epsilon / lam``.

    Points with ``lam * x`` outside the box use a zero extension (decaying
    data) or the periodic one.
    """
    g = state.grid
    if lam < 1.0:
        raise ContractError("lambda must be >= 1")
    if lam * g.h > g.L / 8.0:
        raise ContractError(f"lambda={lam:g} is not resolvable on this grid")
    if lam == 1.0:
        return state
    y = lam * g.nodes
    M = _interp_matrix(g, y)
    if extension == "zero":
        inside = np.abs(y) <= 0.5 * g.L
        M = M * inside[:, None]
    elif extension != "periodic":
        raise ContractError(f"unknown extension {extension!r}")
    u = state.u
    scaled = lam * np.einsum("ai,cij,bj->cab", M, u, M)
    return SimState2D.from_values(g, scaled, state.t / lam ** 2, state.epsilon / lam, state.shape)
