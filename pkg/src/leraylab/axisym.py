"""Axisymmetric Navier-Stokes without swirl in the ``eta = omega_theta / r`` form.

Unknown: ``eta(r, z)`` on a cell-centred grid, ``r_i = (i + 1/2) dr`` on
``[0, R]`` and ``z`` periodic with period ``Z``.  It obeys

    d_t eta + u . grad eta = (d_r^2 + (3/r) d_r + d_z^2) eta.

The Stokes stream function is ``psi = r^2 chi`` with
``(d_r^2 + (3/r) d_r + d_z^2) chi = -eta``, which is the same operator, so
one discretization serves both the elliptic solve and the implicit
diffusion.  Boundary conditions: ``eta`` and ``chi`` even across the axis,
zero at ``r = R``.

Velocities live on cell faces and are differences of ``psi`` sampled at cell
corners, which makes the discrete divergence vanish identically.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy.fft as sfft
from scipy.interpolate import RectBivariateSpline
from scipy.special import jn_zeros

from . import kernels
from . import ledger as ledger_mod
from .ledger import Ledger, cumulative_trapezoid
from .weights import ContractError, Family, Form, PairReport, WeightSpec, check_pair

CFL_MAX = 0.5


class BlowUpError(RuntimeError):
    def __init__(self, message: str, last_state: "AxiState"):
        super().__init__(message)
        self.last_state = last_state


@dataclass(frozen=True)
class CylGrid:
    n_r: int
    n_z: int
    R: float
    Z: float

    def __post_init__(self):
        if self.n_r < 4 or self.n_z < 4 or self.n_z % 2:
            raise ContractError("need n_r >= 4 and an even n_z >= 4")
        if not (self.R > 0 and self.Z > 0):
            raise ContractError("R and Z must be positive")

    @property
    def dr(self) -> float:
        return self.R / self.n_r

    @property
    def dz(self) -> float:
        return self.Z / self.n_z

    @functools.cached_property
    def r(self) -> np.ndarray:
        return (np.arange(self.n_r) + 0.5) * self.dr

    @functools.cached_property
    def r_faces(self) -> np.ndarray:
        return np.arange(self.n_r + 1) * self.dr

    @functools.cached_property
    def z(self) -> np.ndarray:
        return -0.5 * self.Z + (np.arange(self.n_z) + 0.5) * self.dz

    @functools.cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.r, self.z, indexing="ij"))

    @functools.cached_property
    def radial_operator(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Tridiagonal ``(lower, diag, upper)`` for ``d_r^2 + (3/r) d_r``.

        Written as the cylindrical Laplacian plus ``(2/r)`` times a centred
        difference, which keeps it non-positive in the ``r dr`` inner
        product and gives an M-matrix.
        """
        r, dr = self.r, self.dr
        rm, rp = r - 0.5 * dr, r + 0.5 * dr
        lower = rm / (r * dr * dr) - 1.0 / (r * dr)
        upper = rp / (r * dr * dr) + 1.0 / (r * dr)
        diag = -(rp + rm) / (r * dr * dr)
        diag[0] += lower[0]  # even reflection across the axis
        lower[0] = 0.0
        diag[-1] -= upper[-1]  # zero value at r = R
        upper[-1] = 0.0
        return lower, diag, upper

    @functools.cached_property
    def z_symbol(self) -> np.ndarray:
        """Eigenvalues of ``-d_z^2`` (second-order differences) per rfft mode."""
        k = 2.0 * np.pi * np.arange(self.n_z // 2 + 1) / self.Z
        return (2.0 - 2.0 * np.cos(k * self.dz)) / self.dz ** 2

    def apply_operator(self, f: np.ndarray) -> np.ndarray:
        lo, di, up = self.radial_operator
        out = di[:, None] * f
        out[1:] += lo[1:, None] * f[:-1]
        out[:-1] += up[:-1, None] * f[1:]
        out += (np.roll(f, 1, axis=1) - 2.0 * f + np.roll(f, -1, axis=1)) / self.dz ** 2
        return out

    def solve_shifted(self, rhs: np.ndarray, a: float, b: float) -> np.ndarray:
        """Solve ``(a I + b * Op) x = rhs`` with ``Op`` the full (r, z) operator."""
        lo, di, up = self.radial_operator
        rh = sfft.rfft(rhs, axis=1).T  # (modes, n_r)
        m = rh.shape[0]
        diag = a + b * (di[None, :] - self.z_symbol[:, None])
        if np.any(np.abs(diag) == 0.0):
            raise ContractError("singular tridiagonal system; check the grid")
        lower = np.broadcast_to(b * lo, (m, self.n_r))
        upper = np.broadcast_to(b * up, (m, self.n_r))
        sol = kernels.thomas_batched(
            np.concatenate([lower, lower]), np.concatenate([diag, diag]),
            np.concatenate([upper, upper]), np.concatenate([rh.real, rh.imag]),
        )
        if not np.all(np.isfinite(sol)):
            raise ContractError("singular tridiagonal system; check the grid")
        xh = (sol[:m] + 1j * sol[m:]).T
        return sfft.irfft(xh, n=self.n_z, axis=1)

    @property
    def cell_volume(self) -> np.ndarray:
        """``r dr dz`` per cell (the ``2 pi`` is left out)."""
        return self.r[:, None] * self.dr * self.dz


@dataclass(frozen=True)
class AxiState:
    t: float
    eta: np.ndarray  # (n_r, n_z)
    psi: np.ndarray  # (n_r + 1, n_z) at corners (r_f, z_{j+1/2})
    flux_r: np.ndarray  # (n_r + 1, n_z): r u_r on radial faces
    u_z: np.ndarray  # (n_r, n_z): u_z on the upper axial face of each cell
    grid: CylGrid

    @property
    def omega(self) -> np.ndarray:
        return self.grid.r[:, None] * self.eta

    @property
    def u_r_cells(self) -> np.ndarray:
        rf = self.grid.r_faces
        face = np.zeros_like(self.flux_r)
        face[1:] = self.flux_r[1:] / rf[1:, None]
        return 0.5 * (face[1:] + face[:-1])

    @property
    def u_z_cells(self) -> np.ndarray:
        return 0.5 * (self.u_z + np.roll(self.u_z, 1, axis=1))


# ---------------------------------------------------------------- elliptic

def stream_solve(eta: np.ndarray, grid: CylGrid):
    """Stream function and face velocities from ``eta``.

    Returns ``(psi, flux_r, u_z, chi)``: ``psi`` at cell corners,
    ``flux_r = r u_r = -d_z psi`` on radial faces, ``u_z = (1/r) d_r psi``
    on axial faces, and the cell-centred ``chi = psi / r^2``.
    """
    eta = np.asarray(eta, dtype=np.float64)
    if eta.shape != (grid.n_r, grid.n_z):
        raise ContractError(f"eta must have shape {(grid.n_r, grid.n_z)}")
    if not np.all(np.isfinite(eta)):
        raise ContractError("eta must be finite")
    chi = grid.solve_shifted(-eta, 0.0, 1.0)
    # chi extended to n_r + 2 rows: even ghost at the axis, odd ghost at R
    ext = np.empty((grid.n_r + 2, grid.n_z))
    ext[1:-1] = chi
    ext[0] = chi[0]
    ext[-1] = -chi[-1]
    radial_avg = 0.5 * (ext[1:] + ext[:-1])  # at r faces, z centres
    corner_chi = 0.5 * (radial_avg + np.roll(radial_avg, -1, axis=1))  # z_{j+1/2}
    psi = grid.r_faces[:, None] ** 2 * corner_chi
    psi[0] = 0.0
    psi[-1] = 0.0
    flux_r = -(psi - np.roll(psi, 1, axis=1)) / grid.dz
    u_z = (psi[1:] - psi[:-1]) / (grid.r[:, None] * grid.dr)
    return psi, flux_r, u_z, chi


def make_state(eta: np.ndarray, grid: CylGrid, t: float = 0.0) -> AxiState:
    psi, fr, uz, _ = stream_solve(eta, grid)
    return AxiState(t, np.asarray(eta, dtype=np.float64), psi, fr, uz, grid)


def discrete_divergence(state: AxiState) -> float:
    """``max |div u|`` relative to ``max |u| / min(dr, dz)``."""
    g = state.grid
    div = (state.flux_r[1:] - state.flux_r[:-1]) / (g.r[:, None] * g.dr) \
        + (state.u_z - np.roll(state.u_z, 1, axis=1)) / g.dz
    scale = max(np.abs(state.u_r_cells).max(), np.abs(state.u_z).max()) / min(g.dr, g.dz)
    return float(np.abs(div).max() / scale) if scale > 0 else 0.0


# ---------------------------------------------------------------- initial data

def vortex_ring(grid: CylGrid, center=(1.0, 0.0), radius: float = 0.25, amplitude: float = 1.0) -> AxiState:
    """Gaussian ring ``eta = amplitude * exp(-((r - r0)^2 + (z - z0)^2) / a^2)``."""
    r0, z0 = center
    _check_ring(grid, r0, z0, radius)
    r, z = grid.mesh
    eta = amplitude * np.exp(-((r - r0) ** 2 + (z - z0) ** 2) / radius ** 2)
    return make_state(eta, grid)


def ring_pair(grid: CylGrid, r0: float = 1.0, separation: float = 1.0, radius: float = 0.25,
              amplitude: float = 1.0) -> AxiState:
    """Two opposite rings at ``z = -+separation/2`` moving toward each other."""
    for z0 in (-0.5 * separation, 0.5 * separation):
        _check_ring(grid, r0, z0, radius)
    r, z = grid.mesh
    lobe = lambda z0: np.exp(-((r - r0) ** 2 + (z - z0) ** 2) / radius ** 2)  # noqa: E731
    eta = amplitude * (lobe(-0.5 * separation) - lobe(0.5 * separation))
    return make_state(eta, grid)


def _check_ring(grid: CylGrid, r0: float, z0: float, a: float) -> None:
    if not r0 > 2.0 * a:
        raise ContractError("ring centre must satisfy r0 > 2a")
    if r0 + 6.0 * a > grid.R or abs(z0) + 6.0 * a > 0.5 * grid.Z:
        raise ContractError("ring support reaches the far boundary")


def diffusion_mode(grid: CylGrid, kz_index: int = 1, amplitude: float = 1.0):
    """Separable decaying mode ``J1(alpha r)/r * cos(k z)`` and its decay rate."""
    from scipy.special import j1

    alpha = jn_zeros(1, 1)[0] / grid.R
    k = 2.0 * np.pi * kz_index / grid.Z
    r, z = grid.mesh
    eta = amplitude * j1(alpha * r) / r * np.cos(k * z)
    return make_state(eta, grid), alpha ** 2 + k ** 2


# ---------------------------------------------------------------- stepping

def advective_cfl(state: AxiState, dt: float) -> float:
    """Largest outflow fraction of any cell in one step."""
    g = state.grid
    fr = np.abs(state.flux_r)
    radial = (fr[1:] + fr[:-1]) / (g.r[:, None] * g.dr)
    uz = np.abs(state.u_z)
    axial = (uz + np.roll(uz, 1, axis=1)) / g.dz
    return float(dt * (radial + axial).max())


def _tendency(state: AxiState, eta: np.ndarray, flux_r, u_z) -> np.ndarray:
    g = state.grid
    return kernels.muscl_tendency(eta, flux_r, u_z, g.r, g.dr, g.dz)


def step_axi(state: AxiState, dt: float, advect: bool = True) -> AxiState:
    """SSP-RK2 MUSCL advection, then backward-Euler diffusion, then a stream solve."""
    g = state.grid
    eta = state.eta
    if advect:
        cfl = advective_cfl(state, dt)
        if cfl > CFL_MAX:
            raise ContractError(f"dt={dt:g} violates the advective bound (CFL {cfl:.3g})")
        eta1 = eta + dt * _tendency(state, eta, state.flux_r, state.u_z)
        _, fr1, uz1, _ = stream_solve(eta1, g)
        eta = 0.5 * eta + 0.5 * (eta1 + dt * _tendency(state, eta1, fr1, uz1))
    eta = g.solve_shifted(eta, 1.0, -dt)
    if not np.all(np.isfinite(eta)):
        raise BlowUpError(f"non-finite eta at t={state.t + dt:g}", state)
    new = make_state(eta, g, state.t + dt)
    return new


# ---------------------------------------------------------------- diagnostics

def _d_r_omega(state: AxiState) -> np.ndarray:
    g = state.grid
    om = state.omega
    ext = np.empty((g.n_r + 2, g.n_z))
    ext[1:-1] = om
    ext[0] = -om[0]  # omega_theta is odd across the axis
    ext[-1] = -(g.R + 0.5 * g.dr) * state.eta[-1]  # eta is odd across r = R
    return (ext[2:] - ext[:-2]) / (2.0 * g.dr)


def grad_omega_sq_density(state: AxiState) -> np.ndarray:
    """``|grad (x) omega|^2 = |grad omega_theta|^2 + (omega_theta / r)^2`` per cell."""
    g = state.grid
    om = state.omega
    dzo = (np.roll(om, -1, axis=1) - np.roll(om, 1, axis=1)) / (2.0 * g.dz)
    return _d_r_omega(state) ** 2 + dzo ** 2 + state.eta ** 2


def lady_q(state: AxiState) -> float:
    return float(np.sum(state.eta ** 2 * state.grid.cell_volume))


def impulse(state: AxiState) -> float:
    """``int eta r^3 dr dz``, proportional to the axial fluid impulse."""
    g = state.grid
    return float(np.sum(state.eta * g.r[:, None] ** 3) * g.dr * g.dz)


def axi_weighted_norms(state: AxiState, phi: WeightSpec, psi_w: WeightSpec) -> tuple[float, float, float]:
    g = state.grid
    vol = 2.0 * np.pi * g.cell_volume
    fp = phi.profile(g.r)[:, None]
    fs = psi_w.profile(g.r)[:, None]
    u2 = state.u_r_cells ** 2 + state.u_z_cells ** 2
    return (
        float(np.sum(fp * u2 * vol)),
        float(np.sum(fs * state.omega ** 2 * vol)),
        float(np.sum(fs * grad_omega_sq_density(state) * vol)),
    )


def grad_omega_l2_sq(state: AxiState) -> float:
    return float(np.sum(grad_omega_sq_density(state) * 2.0 * np.pi * state.grid.cell_volume))


def ledger_row(state: AxiState, phi: WeightSpec, psi_w: WeightSpec) -> tuple:
    return (state.t, lady_q(state), *axi_weighted_norms(state, phi, psi_w))


# ---------------------------------------------------------------- runs

@dataclass
class AxiConfig:
    n_r: int = 128
    n_z: int = 128
    R: float = 6.0
    Z: float = 6.0
    dt: float = 1e-3
    t_end: float = 0.5
    init: str = "vortex_ring"  # vortex_ring | ring_pair | diffusion_mode
    r0: float = 1.0
    z0: float = 0.0
    ring_radius: float = 0.25
    separation: float = 1.0
    amplitude: float = 50.0
    kz_index: int = 1
    advect: bool = True
    phi_family: str = "cylindrical_power"
    phi_gamma: float = 1.0
    phi_form: str = "one_plus_abs"
    psi_family: str = "cylindrical_power"
    psi_gamma: float = 1.0
    psi_form: str = "one_plus_sq_half"
    output_every: int = 10
    checkpoint_every: int = 0
    seed: int = 0

    def grid(self) -> CylGrid:
        return CylGrid(self.n_r, self.n_z, self.R, self.Z)

    def phi(self) -> WeightSpec:
        return WeightSpec(Family(self.phi_family), self.phi_gamma, 3, Form(self.phi_form))

    def psi(self) -> WeightSpec:
        return WeightSpec(Family(self.psi_family), self.psi_gamma, 3, Form(self.psi_form))


def initial_state(cfg: AxiConfig) -> AxiState:
    g = cfg.grid()
    if cfg.init == "vortex_ring":
        return vortex_ring(g, (cfg.r0, cfg.z0), cfg.ring_radius, cfg.amplitude)
    if cfg.init == "ring_pair":
        return ring_pair(g, cfg.r0, cfg.separation, cfg.ring_radius, cfg.amplitude)
    if cfg.init == "diffusion_mode":
        return diffusion_mode(g, cfg.kz_index, cfg.amplitude)[0]
    raise ContractError(f"unknown initial data kind {cfg.init!r}")


@dataclass
class AxiRunResult:
    state: AxiState
    ledger: Ledger
    checkpoints: list = field(default_factory=list)
    min_eta_ratio: float = 0.0  # min eta over the run divided by max eta0
    max_divergence: float = 0.0
    axis_eta_max: float = 0.0
    impulse: tuple = (0.0, 0.0)
    io_error: str | None = None


def run_axi(cfg: AxiConfig, output_dir=None) -> AxiRunResult:
    state = initial_state(cfg)
    phi, psi_w = cfg.phi(), cfg.psi()
    led = ledger_mod.axi_ledger()
    led.meta.update({"n_r": cfg.n_r, "n_z": cfg.n_z, "dt": cfg.dt,
                     "grad_omega0_sq": grad_omega_l2_sq(state)})
    led.append(ledger_row(state, phi, psi_w))
    eta_scale = float(np.abs(state.eta).max()) or 1.0
    res = AxiRunResult(state, led)
    imp0 = impulse(state)
    min_eta = float(state.eta.min())
    max_div = discrete_divergence(state)
    axis_max = float(np.abs(state.eta[0]).max())
    out = Path(output_dir) if output_dir is not None else None
    n_steps = int(round(cfg.t_end / cfg.dt)) if cfg.t_end > 0 else 0
    for s in range(1, n_steps + 1):
        state = step_axi(state, cfg.dt, cfg.advect)
        min_eta = min(min_eta, float(state.eta.min()))
        axis_max = max(axis_max, float(np.abs(state.eta[0]).max()))
        if s % cfg.output_every == 0 or s == n_steps:
            led.append(ledger_row(state, phi, psi_w))
            max_div = max(max_div, discrete_divergence(state))
        if out is not None and cfg.checkpoint_every and s % cfg.checkpoint_every == 0:
            _checkpoint(res, out, state, s)
    res.state = state
    res.min_eta_ratio = min_eta / eta_scale
    res.max_divergence = max_div
    res.axis_eta_max = axis_max
    res.impulse = (imp0, impulse(state))
    if out is not None:
        _checkpoint(res, out, state, n_steps)
        try:
            led.write_csv(out / "ledger.csv")
        except OSError as exc:
            res.io_error = str(exc)
            led.meta["io_error"] = str(exc)
    return res


def _checkpoint(res: AxiRunResult, out: Path, state: AxiState, s: int) -> None:
    g = state.grid
    path = out / f"checkpoint_{s:07d}.bin"
    try:
        ledger_mod.write_checkpoint_axi(path, g.n_r, g.R, state.t, g.n_z, g.Z, state.eta)
        res.checkpoints.append(str(path))
    except OSError as exc:
        res.io_error = str(exc)
        res.ledger.meta["io_error"] = str(exc)


# ---------------------------------------------------------------- verifiers

def ladyzhenskaya_monitor(led: Ledger, grad_omega0_sq: float | None = None, rel_tol: float = 1e-6) -> dict:
    q = led["lady_q"]
    increases = np.maximum(q[1:] - q[:-1] * (1.0 + rel_tol), 0.0)
    worst = float(np.max((q[1:] - q[:-1]) / np.where(q[:-1] > 0, q[:-1], 1.0))) if len(q) > 1 else 0.0
    monotone = bool(np.all(increases <= 0.0))
    g0 = grad_omega0_sq if grad_omega0_sq is not None else led.meta.get("grad_omega0_sq")
    # int |omega/r|^2 dx = 2 pi * lady_q
    initial_ok = None if g0 is None else bool(2.0 * np.pi * q[0] <= g0 * (1.0 + 1e-12))
    return {
        "monotone": monotone, "worst_relative_change": worst, "rows": int(len(q)),
        "initial_bound_holds": initial_ok, "q0": float(q[0]),
        "grad_omega0_sq": None if g0 is None else float(g0),
        "pass": monotone and (initial_ok is not False),
    }


@dataclass
class Coe1Report:
    c_min: float
    c_signed: float
    envelope_consistent: bool
    pair: PairReport | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"c_min": self.c_min, "c_signed": self.c_signed,
               "envelope_consistent": self.envelope_consistent, **self.details}
        if self.pair is not None:
            out["pair_pass"] = self.pair.passed
            out["pair_failures"] = list(self.pair.failures)
        return out


def coe1_terms(led: Ledger) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(lhs, omega0_sq, integral)`` of the weighted vorticity inequality.

    The integrand is ``(1 + U + U^(4/3)) W + W^3`` with ``U = ||sqrt(Phi) u||_2``
    and ``W = ||sqrt(Psi) omega||_2^2``.
    """
    t = led["t"]
    w = led["e_psi_omega"]
    u = np.sqrt(led["e_phi_u"])
    lhs = w + cumulative_trapezoid(t, led["e_psi_grad_omega"])
    integrand = (1.0 + u + u ** (4.0 / 3.0)) * w + w ** 3
    return lhs, w[0], cumulative_trapezoid(t, integrand)


def verify_coe1(led: Ledger, phi: WeightSpec | None = None, psi_w: WeightSpec | None = None) -> Coe1Report:
    lhs, w0, integral = coe1_terms(led)
    excess = lhs - w0
    mask = integral > 0
    if np.any(excess[~mask] > 1e-12 * (1.0 + abs(w0))):
        c_signed = math.inf
    elif np.any(mask):
        c_signed = float(np.max(excess[mask] / integral[mask]))
    else:
        c_signed = 0.0
    c_min = max(0.0, c_signed)
    envelope = w0 + c_min * integral
    consistent = bool(np.all(led["e_psi_omega"] <= envelope * (1.0 + 1e-12) + 1e-300))
    pair = check_pair(phi, psi_w) if phi is not None and psi_w is not None else None
    return Coe1Report(c_min, c_signed, consistent, pair)


# ---------------------------------------------------------------- stretching

def _cartesian_omega(omega_fn, pts: np.ndarray) -> np.ndarray:
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    r = np.hypot(x, y)
    w = omega_fn(r, z)
    return np.stack([-w * y / r, w * x / r, np.zeros_like(w)], axis=-1)


def stretching_residual(omega_fn, r: np.ndarray, z: np.ndarray, theta: np.ndarray, h: float) -> float:
    """Max relative gap between ``(omega . grad) omega`` and ``-(omega_theta^2 / r) e_r``.

    ``omega_fn(r, z)`` gives ``omega_theta``; the left side uses centred
    differences of step ``h`` in Cartesian coordinates.
    """
    pts = np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=-1)
    om = _cartesian_omega(omega_fn, pts)
    lhs = np.zeros_like(om)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        d = (_cartesian_omega(omega_fn, pts + e) - _cartesian_omega(omega_fn, pts - e)) / (2.0 * h)
        lhs += om[..., j:j + 1] * d
    w = omega_fn(r, z)
    er = np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=-1)
    rhs = -(w ** 2 / r)[..., None] * er
    scale = np.abs(rhs).max()
    return float(np.abs(lhs - rhs).max() / scale) if scale > 0 else float(np.abs(lhs).max())


def stretching_identity_check(state: AxiState, n_points: int = 400, seed: int = 0) -> float:
    """Stretching identity on a diagnostic shell around the vorticity support."""
    g = state.grid
    om = state.omega
    peak = np.abs(om).max()
    if peak == 0.0:
        return 0.0
    spline = RectBivariateSpline(g.r, g.z, om, kx=3, ky=3)
    omega_fn = lambda rr, zz: spline.ev(rr, zz)  # noqa: E731
    rng = np.random.default_rng(seed)
    ii, jj = np.nonzero(om ** 2 >= 1e-2 * peak ** 2)
    keep = (ii > 2) & (ii < g.n_r - 3) & (jj > 2) & (jj < g.n_z - 3)
    ii, jj = ii[keep], jj[keep]
    pick = rng.choice(ii.size, size=min(n_points, ii.size), replace=False)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=pick.size)
    return stretching_residual(omega_fn, g.r[ii[pick]], g.z[jj[pick]], theta, min(g.dr, g.dz))
