"""Periodic-grid transform machinery for the 2D solver.

Fields live on an ``n x n`` cell-centred grid over ``[-L/2, L/2)^2``; array
axis 0 is x1 and axis 1 is x2.  Transform-space arrays use the real FFT along
axis 1, shape ``(n, n//2 + 1)``.

First-derivative symbols drop the Nyquist row/column (a real field cannot
carry an odd multiplier there), and every odd operator here (Riesz
transforms, divergence, the Leray projector) is built from those symbols so
the discrete identities hold exactly.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .weights import ContractError, Family, WeightSpec


@dataclass(frozen=True)
class PeriodicGrid:
    n: int
    L: float
    dim: int = 2

    def __post_init__(self):
        if self.dim != 2:
            raise ContractError("only two-dimensional grids are supported")
        if self.n < 16 or self.n & (self.n - 1):
            raise ContractError(f"n must be a power of two >= 16, got {self.n}")
        if not self.L > 0:
            raise ContractError("box length must be positive")

    @property
    def h(self) -> float:
        return self.L / self.n

    @property
    def cell_area(self) -> float:
        return self.h ** 2

    @functools.cached_property
    def nodes(self) -> np.ndarray:
        return -0.5 * self.L + (np.arange(self.n) + 0.5) * self.h

    @functools.cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.nodes, self.nodes, indexing="ij"))

    @functools.cached_property
    def mode_index(self) -> tuple[np.ndarray, np.ndarray]:
        m1 = np.fft.fftfreq(self.n, 1.0 / self.n)[:, None]
        m2 = np.arange(self.n // 2 + 1)[None, :].astype(np.float64)
        return np.broadcast_to(m1, self.spectral_shape), np.broadcast_to(m2, self.spectral_shape)

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return (self.n, self.n // 2 + 1)

    @functools.cached_property
    def k(self) -> tuple[np.ndarray, np.ndarray]:
        """Exact wavenumbers (used by even multipliers such as the heat factor)."""
        m1, m2 = self.mode_index
        s = 2.0 * np.pi / self.L
        return s * m1, s * m2

    @functools.cached_property
    def k_sq(self) -> np.ndarray:
        k1, k2 = self.k
        return k1 * k1 + k2 * k2

    @functools.cached_property
    def kd(self) -> tuple[np.ndarray, np.ndarray]:
        """First-derivative symbols: exact wavenumbers with Nyquist zeroed."""
        m1, m2 = self.mode_index
        nyq = self.n // 2
        k1, k2 = self.k
        return np.where(np.abs(m1) == nyq, 0.0, k1), np.where(m2 == nyq, 0.0, k2)

    @functools.cached_property
    def kd_sq(self) -> np.ndarray:
        a, b = self.kd
        return a * a + b * b

    @functools.cached_property
    def inv_kd_sq(self) -> np.ndarray:
        ks = self.kd_sq
        with np.errstate(divide="ignore"):
            return np.where(ks > 0, 1.0 / np.where(ks > 0, ks, 1.0), 0.0)

    @functools.cached_property
    def dealias_mask(self) -> np.ndarray:
        m1, m2 = self.mode_index
        cut = self.n / 3.0
        return (np.abs(m1) <= cut) & (m2 <= cut)

    def forward(self, values: np.ndarray) -> np.ndarray:
        return sfft.rfft2(values, axes=(-2, -1))

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        return sfft.irfft2(coeffs, s=(self.n, self.n), axes=(-2, -1))

    def weight_values(self, spec: WeightSpec) -> np.ndarray:
        return _weight_on_grid(self, spec)


@functools.lru_cache(maxsize=64)
def _weight_on_grid(grid: PeriodicGrid, spec: WeightSpec) -> np.ndarray:
    if spec.family is not Family.CONSTANT and spec.profile_dim != 2:
        raise ContractError("a 2D grid needs a weight whose radius is planar")
    x1, x2 = grid.mesh
    w = spec.profile(np.hypot(x1, x2))
    w.setflags(write=False)
    return w


class SpectralField:
    """A real scalar field with a lazily computed transform-space mirror."""

    __slots__ = ("grid", "_values", "_coeffs")

    def __init__(self, grid: PeriodicGrid, values=None, coeffs=None):
        if values is None and coeffs is None:
            raise ValueError("need values or coefficients")
        self.grid = grid
        self._values = None if values is None else np.asarray(values, dtype=np.float64)
        self._coeffs = None if coeffs is None else np.asarray(coeffs, dtype=np.complex128)
        if self._values is not None and self._values.shape != (grid.n, grid.n):
            raise ContractError(f"values must have shape {(grid.n, grid.n)}")

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = self.grid.inverse(self._coeffs)
        return self._values

    @property
    def coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = self.grid.forward(self._values)
        return self._coeffs

    def with_coeffs(self, coeffs) -> "SpectralField":
        return SpectralField(self.grid, coeffs=coeffs)

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls(grid, values=np.zeros((grid.n, grid.n)))


def _same_grid(*fields: SpectralField) -> PeriodicGrid:
    grid = fields[0].grid
    if any(f.grid != grid for f in fields[1:]):
        raise ContractError("fields live on different grids")
    return grid


# ---------------------------------------------------------------- multipliers

def riesz_symbol(grid: PeriodicGrid, j: int) -> np.ndarray:
    kd = grid.kd[j]
    return -1j * kd * np.sqrt(grid.inv_kd_sq)


def riesz(field: SpectralField, j: int) -> SpectralField:
    """Riesz transform with multiplier ``-i k_j / |k|`` (zero at k = 0)."""
    if j not in (0, 1):
        raise ContractError("axis index must be 0 or 1")
    return field.with_coeffs(field.coeffs * riesz_symbol(field.grid, j))


def leray_coeffs(grid: PeriodicGrid, uh: np.ndarray) -> np.ndarray:
    """Leray projection on a stacked (2, ...) coefficient array."""
    k1, k2 = grid.kd
    dot = (k1 * uh[0] + k2 * uh[1]) * grid.inv_kd_sq
    return np.stack([uh[0] - k1 * dot, uh[1] - k2 * dot])


def leray_project(u) -> tuple[SpectralField, SpectralField]:
    grid = _same_grid(*u)
    out = leray_coeffs(grid, np.stack([c.coeffs for c in u]))
    return SpectralField(grid, coeffs=out[0]), SpectralField(grid, coeffs=out[1])


def divergence_coeffs(grid: PeriodicGrid, uh: np.ndarray) -> np.ndarray:
    k1, k2 = grid.kd
    return 1j * (k1 * uh[0] + k2 * uh[1])


def divergence(u) -> SpectralField:
    grid = _same_grid(*u)
    return SpectralField(grid, coeffs=divergence_coeffs(grid, np.stack([c.coeffs for c in u])))


def curl_coeffs(grid: PeriodicGrid, uh: np.ndarray) -> np.ndarray:
    k1, k2 = grid.kd
    return 1j * (k1 * uh[1] - k2 * uh[0])


def gradient_coeffs(grid: PeriodicGrid, fh: np.ndarray) -> np.ndarray:
    """Stacked gradient; leading axes of ``fh`` are kept in front."""
    k1, k2 = grid.kd
    return np.stack([1j * k1 * fh, 1j * k2 * fh])


def dealias_coeffs(grid: PeriodicGrid, fh: np.ndarray) -> np.ndarray:
    return fh * grid.dealias_mask


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Product with the 2/3 rule: inputs and result keep only ``|m_j| <= n/3``."""
    grid = _same_grid(f, g)
    fv = grid.inverse(dealias_coeffs(grid, f.coeffs))
    gv = grid.inverse(dealias_coeffs(grid, g.coeffs))
    return SpectralField(grid, coeffs=dealias_coeffs(grid, grid.forward(fv * gv)))


def pressure_coeffs(grid: PeriodicGrid, uh: np.ndarray, bh: np.ndarray) -> np.ndarray:
    """``sum_ij R_i R_j (b_i u_j)`` from stacked coefficients, products dealiased."""
    kd = grid.kd
    bv = grid.inverse(dealias_coeffs(grid, bh))
    uv = grid.inverse(dealias_coeffs(grid, uh))
    acc = np.zeros(grid.spectral_shape, dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            t = dealias_coeffs(grid, grid.forward(bv[i] * uv[j]))
            acc -= kd[i] * kd[j] * t
    return acc * grid.inv_kd_sq


def pressure_field(u, b=None) -> SpectralField:
    """Pressure with ``-Lap p = div div (b (x) u)``; mean-free by convention."""
    b = u if b is None else b
    grid = _same_grid(*u, *b)
    uh = np.stack([c.coeffs for c in u])
    bh = np.stack([c.coeffs for c in b])
    return SpectralField(grid, coeffs=pressure_coeffs(grid, uh, bh))


def divdiv_coeffs(grid: PeriodicGrid, uh: np.ndarray, bh: np.ndarray) -> np.ndarray:
    """``div div (b (x) u)`` with the same dealiased products as the pressure."""
    kd = grid.kd
    bv = grid.inverse(dealias_coeffs(grid, bh))
    uv = grid.inverse(dealias_coeffs(grid, uh))
    acc = np.zeros(grid.spectral_shape, dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            acc -= kd[i] * kd[j] * dealias_coeffs(grid, grid.forward(bv[i] * uv[j]))
    return acc


def laplacian_coeffs(grid: PeriodicGrid, fh: np.ndarray) -> np.ndarray:
    """div grad, built from the first-derivative symbols."""
    return -grid.kd_sq * fh


# ---------------------------------------------------------------- mollifier

class MollifierShape(str, enum.Enum):
    COMPACT_BUMP = "compact_bump"
    GAUSSIAN_SURROGATE = "gaussian_surrogate"


@dataclass(frozen=True)
class MollifierSpec:
    epsilon: float
    shape: MollifierShape = MollifierShape.COMPACT_BUMP

    def __post_init__(self):
        object.__setattr__(self, "shape", MollifierShape(self.shape))
        if not self.epsilon >= 0.0:
            raise ContractError("epsilon must be non-negative")

    def profile(self, s: np.ndarray) -> np.ndarray:
        """Unnormalized kernel as a function of ``|x| / epsilon``."""
        if self.shape is MollifierShape.COMPACT_BUMP:
            out = np.zeros_like(s)
            inside = s < 1.0
            out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
            return out
        # standard deviation epsilon / 3; support effectively within epsilon
        return np.exp(-4.5 * s * s)


def mollifier_weights(grid: PeriodicGrid, m: MollifierSpec) -> np.ndarray:
    """Kernel samples at periodic offsets, normalized to unit sum."""
    return _mollifier_weights(grid, m)


@functools.lru_cache(maxsize=64)
def _mollifier_weights(grid: PeriodicGrid, m: MollifierSpec) -> np.ndarray:
    idx = np.arange(grid.n)
    off = np.minimum(idx, grid.n - idx) * grid.h
    d1, d2 = np.meshgrid(off, off, indexing="ij")
    if m.epsilon == 0.0:
        w = np.zeros((grid.n, grid.n))
        w[0, 0] = 1.0
    else:
        w = m.profile(np.hypot(d1, d2) / m.epsilon)
        if w.sum() == 0.0:  # epsilon below the grid spacing
            w[0, 0] = 1.0
    w = w / w.sum()
    w.setflags(write=False)
    return w


@functools.lru_cache(maxsize=64)
def mollifier_symbol(grid: PeriodicGrid, m: MollifierSpec) -> np.ndarray:
    if m.epsilon >= grid.L / 4.0:
        raise ContractError(f"epsilon {m.epsilon} too large for box length {grid.L}")
    sym = grid.forward(mollifier_weights(grid, m)).real
    sym.setflags(write=False)
    return sym


def mollify(field: SpectralField, m: MollifierSpec) -> SpectralField:
    return field.with_coeffs(field.coeffs * mollifier_symbol(field.grid, m))


# ---------------------------------------------------------------- quadrature

def _stack_values(field) -> tuple[PeriodicGrid, np.ndarray]:
    if isinstance(field, SpectralField):
        return field.grid, field.values[None]
    grid = _same_grid(*field)
    return grid, np.stack([c.values for c in field])


def weighted_norm_sq(field, spec: WeightSpec) -> float:
    """Midpoint quadrature of ``|f|^2 Phi`` over the box."""
    grid, vals = _stack_values(field)
    return weighted_norm_sq_values(grid, vals, spec)


def weighted_norm_sq_values(grid: PeriodicGrid, vals: np.ndarray, spec: WeightSpec) -> float:
    w = grid.weight_values(spec)
    return float(np.sum(vals * vals * w) * grid.cell_area)


def weighted_lp_values(grid: PeriodicGrid, vals: np.ndarray, spec: WeightSpec, p: float) -> float:
    """``|| sqrt(Phi) |f| ||_p`` where ``|f|`` is the pointwise Euclidean norm."""
    w = grid.weight_values(spec)
    mag = np.sqrt(np.sum(vals * vals, axis=0)) if vals.ndim == 3 else np.abs(vals)
    return float((np.sum((np.sqrt(w) * mag) ** p) * grid.cell_area) ** (1.0 / p))


def inner(f: SpectralField, g: SpectralField) -> float:
    grid = _same_grid(f, g)
    return float(np.sum(f.values * g.values) * grid.cell_area)


def random_field(grid: PeriodicGrid, rng: np.random.Generator, n_bumps: int = 6) -> np.ndarray:
    """Sum of Gaussian bumps with random centres, widths and signs."""
    x1, x2 = grid.mesh
    out = np.zeros((grid.n, grid.n))
    for _ in range(n_bumps):
        c = rng.uniform(-0.35 * grid.L, 0.35 * grid.L, size=2)
        width = grid.L * 10 ** rng.uniform(-2.0, -0.7)
        out += rng.normal() * np.exp(-((x1 - c[0]) ** 2 + (x2 - c[1]) ** 2) / (2 * width ** 2))
    return out


def mollifier_ratio_table(grid: PeriodicGrid, spec: WeightSpec, epsilons, n_fields: int = 100,
                          seed: int = 0, shape=MollifierShape.COMPACT_BUMP) -> np.ndarray:
    """``||sqrt(Phi)(theta_eps * f)|| / ||sqrt(Phi) f||`` for random ``f``.

    Returns an array of shape ``(len(epsilons), n_fields)``; the same fields
    are used for every epsilon.
    """
    rng = np.random.default_rng(seed)
    w = grid.weight_values(spec)
    fields = [random_field(grid, rng) for _ in range(n_fields)]
    table = np.empty((len(epsilons), n_fields))
    for a, eps in enumerate(epsilons):
        sym = mollifier_symbol(grid, MollifierSpec(eps, shape))
        for b, f in enumerate(fields):
            g = grid.inverse(grid.forward(f) * sym)
            table[a, b] = np.sqrt(np.sum(g * g * w) / np.sum(f * f * w))
    return table
