"""Power-type weights and numerical checks of the adapted-weight axioms.

A weight is a function ``Phi = f(rho)**(-gamma)`` where ``rho`` is either the
full Euclidean norm (radial family) or the distance to the x3 axis
(cylindrical family) and ``f`` is ``1 + rho`` or ``sqrt(1 + rho**2)``.
Gradients and Laplacians come from closed forms.

Axiom labels used in reports:

* H1: ``0 < Phi <= 1``
* H2: ``|grad Phi| <= C1 Phi**1.5``
* H3: ``Phi**r`` is a Muckenhoupt ``A_r`` weight for some ``r`` in (1, 2]
* H4: ``Phi(x) <= Phi(x/lam) <= C2 lam**2 Phi(x)`` for ``lam >= 1``
"""
from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from . import kernels


class Family(str, enum.Enum):
    CONSTANT = "constant"
    RADIAL_POWER = "radial_power"
    CYLINDRICAL_POWER = "cylindrical_power"
    PRODUCT_PAIR_MEMBER = "product_pair_member"


class Form(str, enum.Enum):
    ONE_PLUS_ABS = "one_plus_abs"
    ONE_PLUS_SQ_HALF = "one_plus_sq_half"


class AqSentinel(enum.Enum):
    """Non-finite outcomes of an A_q scan."""

    DIVERGES = "diverges"
    OVERFLOW = "overflow"


class ContractError(ValueError):
    """An operation was called outside its documented preconditions."""


# relative growth per dyadic shell still treated as "not growing"
SHELL_GROWTH_TOL = 1e-5
DIVERGENCE_GROWTH = 1.05
DIVERGENCE_SCALES = 3


@dataclass(frozen=True)
class WeightSpec:
    family: Family = Family.CONSTANT
    gamma: float = 0.0
    dim: int = 3
    form: Form = Form.ONE_PLUS_ABS

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "form", Form(self.form))
        if self.dim not in (2, 3):
            raise ContractError(f"dim must be 2 or 3, got {self.dim}")
        if not self.gamma >= 0.0:
            raise ContractError(f"gamma must be >= 0, got {self.gamma}")
        if self.family in (Family.CYLINDRICAL_POWER, Family.PRODUCT_PAIR_MEMBER) and self.dim != 3:
            raise ContractError(f"{self.family.value} weights live in dimension 3")

    @classmethod
    def radial(cls, gamma: float, dim: int, form: Form = Form.ONE_PLUS_ABS) -> "WeightSpec":
        return cls(Family.RADIAL_POWER, gamma, dim, form)

    @classmethod
    def cylindrical(cls, gamma: float, form: Form = Form.ONE_PLUS_ABS) -> "WeightSpec":
        return cls(Family.CYLINDRICAL_POWER, gamma, 3, form)

    @property
    def is_cylindrical(self) -> bool:
        return self.family in (Family.CYLINDRICAL_POWER, Family.PRODUCT_PAIR_MEMBER)

    @property
    def effective_gamma(self) -> float:
        return 0.0 if self.family is Family.CONSTANT else float(self.gamma)

    @property
    def profile_dim(self) -> int:
        """Dimension of the space the weight's radius lives in."""
        return 2 if self.is_cylindrical else self.dim

    def power(self, theta: float) -> "WeightSpec":
        """The weight ``Phi**theta``."""
        return replace(self, gamma=self.effective_gamma * theta)

    def radius(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.shape[-1] != self.dim:
            raise ContractError(f"points have dimension {pts.shape[-1]}, weight has {self.dim}")
        if self.is_cylindrical:
            pts = pts[..., :2]
        return np.sqrt(np.sum(pts * pts, axis=-1))

    # radial profile and its derivatives
    def profile(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        g = self.effective_gamma
        if self.form is Form.ONE_PLUS_ABS:
            return np.exp(-g * np.log1p(rho))
        return np.exp(-0.5 * g * np.log1p(rho * rho))

    def d_profile(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        g = self.effective_gamma
        if self.form is Form.ONE_PLUS_ABS:
            return -g * (1.0 + rho) ** (-g - 1.0)
        return -g * rho * (1.0 + rho * rho) ** (-0.5 * g - 1.0)

    def d2_profile(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        g = self.effective_gamma
        if self.form is Form.ONE_PLUS_ABS:
            return g * (g + 1.0) * (1.0 + rho) ** (-g - 2.0)
        s = 1.0 + rho * rho
        return -g * s ** (-0.5 * g - 1.0) + g * (g + 2.0) * rho * rho * s ** (-0.5 * g - 2.0)

    def laplacian_profile(self, rho) -> np.ndarray:
        """Laplacian as a function of the radius; requires ``rho > 0``."""
        rho = np.asarray(rho, dtype=np.float64)
        m = self.profile_dim
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.d2_profile(rho) + (m - 1) * self.d_profile(rho) / rho

    def __call__(self, points) -> np.ndarray:
        return self.profile(self.radius(points))

    def gradient(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        rho = self.radius(pts)
        dp = self.d_profile(rho)
        direction = pts.copy()
        if self.is_cylindrical:
            direction[..., 2] = 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            unit = np.where(rho[..., None] > 0, direction / rho[..., None], 0.0)
        return dp[..., None] * unit

    def laplacian(self, points) -> np.ndarray:
        return self.laplacian_profile(self.radius(points))


def eval_weight(spec: WeightSpec, point) -> float:
    p = np.asarray(point, dtype=np.float64)
    if p.shape != (spec.dim,):
        raise ContractError(f"expected a point of dimension {spec.dim}, got shape {p.shape}")
    return float(spec(p))


# ---------------------------------------------------------------- sampling

def radial_cloud(
    dim: int,
    rho_max: float = 1e4,
    rho_min: float = 2.0 ** -20,
    per_shell: int = 32,
    seed: int = 0,
) -> np.ndarray:
    """Points at log-spaced radii in every dyadic shell, random directions.

    Includes the origin and points exactly on the shell boundaries so
    suprema attained at a radius endpoint are seen.
    """
    rng = np.random.default_rng(seed)
    k_lo = int(np.floor(np.log2(rho_min)))
    k_hi = int(np.ceil(np.log2(rho_max)))
    radii = [0.0]
    for k in range(k_lo, k_hi):
        radii.extend(np.exp2(k + np.linspace(0.0, 1.0, per_shell, endpoint=False)))
    radii.append(rho_max)
    radii = np.clip(np.asarray(radii), 0.0, rho_max)
    dirs = rng.normal(size=(radii.size, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs


def _shell_maxima(rho: np.ndarray, ratio: np.ndarray):
    keep = rho > 0
    shells = np.floor(np.log2(rho[keep])).astype(int)
    vals = ratio[keep]
    ids = np.unique(shells)
    return ids, np.array([vals[shells == s].max() for s in ids])


def _bounded_at_ends(rho: np.ndarray, ratio: np.ndarray, n_shells: int = 3) -> dict:
    """Is the shell-wise supremum of ``ratio`` flat or shrinking at both ends?

    Outer end: the last ``n_shells`` shell maxima do not grow outward.
    Inner end: the first ``n_shells`` do not grow toward the origin.
    """
    if not np.all(np.isfinite(ratio)):
        return {"outer": False, "inner": False}
    _, m = _shell_maxima(rho, ratio)
    outer = m[-n_shells:]
    inner = m[:n_shells][::-1]

    def flat(seq):
        return bool(np.all(seq[1:] <= seq[:-1] * (1.0 + SHELL_GROWTH_TOL) + 1e-300))

    return {"outer": flat(outer), "inner": flat(inner)}


def _require_coverage(spec: WeightSpec, cloud) -> np.ndarray:
    rho = spec.radius(cloud)
    if rho.size == 0:
        raise ContractError("sample cloud is empty")
    if rho.max() < 1e3:
        raise ContractError("sample cloud must reach radius 1e3")
    return rho


# ---------------------------------------------------------------- H2 / H4

def check_h2(spec: WeightSpec, sample_cloud=None) -> tuple[bool, float]:
    cloud = radial_cloud(spec.dim) if sample_cloud is None else sample_cloud
    rho = _require_coverage(spec, cloud)
    ratio = np.abs(spec.d_profile(rho)) / spec.profile(rho) ** 1.5
    c1 = float(ratio.max())
    ends = _bounded_at_ends(rho, ratio)
    return bool(np.isfinite(c1) and ends["outer"] and ends["inner"]), c1


def default_lambda_grid() -> np.ndarray:
    return np.exp2(np.arange(0, 12, 0.5))


def check_h4(spec: WeightSpec, lambda_grid=None, sample_cloud=None) -> tuple[bool, float]:
    lams = default_lambda_grid() if lambda_grid is None else np.asarray(lambda_grid, float)
    if lams.min() < 1.0 or lams.max() < 1e3:
        raise ContractError("lambda grid must lie in [1, inf) and reach 1e3")
    cloud = radial_cloud(spec.dim) if sample_cloud is None else sample_cloud
    rho = _require_coverage(spec, cloud)
    phi = spec.profile(rho)
    scaled = spec.profile(rho[None, :] / lams[:, None])
    lower_ok = bool(np.all(phi[None, :] <= scaled * (1.0 + 1e-12)))
    per_lam = (scaled / (lams[:, None] ** 2 * phi[None, :])).max(axis=1)
    c2 = float(per_lam.max())
    tail = per_lam[-DIVERGENCE_SCALES:]
    not_growing = bool(np.all(tail[1:] <= tail[:-1] * (1.0 + SHELL_GROWTH_TOL)))
    return lower_ok and np.isfinite(c2) and not_growing, c2


# ---------------------------------------------------------------- A_q

@dataclass(frozen=True)
class CubeFamily:
    """Cubes ``center + half * [-1, 1]^dim`` for every center and half-side."""

    centers: tuple
    half_sides: tuple
    samples_per_cube: int = 8

    def __post_init__(self):
        hs = tuple(float(h) for h in self.half_sides)
        object.__setattr__(self, "half_sides", hs)
        object.__setattr__(self, "centers", tuple(tuple(float(v) for v in c) for c in self.centers))
        if any(b <= a for a, b in zip(hs, hs[1:])) or min(hs) <= 0:
            raise ContractError("half_sides must be positive and strictly increasing")
        if self.samples_per_cube < 8:
            raise ContractError("need at least 8 samples per axis")
        if len({len(c) for c in self.centers}) != 1:
            raise ContractError("all centers must share a dimension")

    @property
    def dim(self) -> int:
        return len(self.centers[0])

    @classmethod
    def dyadic(cls, dim: int, scales: int = 16, offsets=(0.0, 1.0, 8.0, 64.0),
               samples_per_cube: int = 8) -> "CubeFamily":
        centers = [tuple([float(o)] + [0.0] * (dim - 1)) for o in offsets]
        return cls(tuple(centers), tuple(2.0 ** k for k in range(scales + 1)), samples_per_cube)

    def restricted(self, dim: int) -> "CubeFamily":
        """Project onto the first ``dim`` coordinates.

        Averages over a cube of a function of (x1, x2) equal averages over
        its square face, so cylindrical weights are scanned in the plane.
        """
        if dim == self.dim:
            return self
        return replace(self, centers=tuple(c[:dim] for c in self.centers))


@functools.lru_cache(maxsize=4096)
def _leaves(center: tuple, half: float, min_half: float = 0.5):
    """Adaptive dyadic partition of a cube, refined toward the origin.

    A cell is split while it is larger than ``min_half`` and closer to the
    origin than twice its half-side, so every leaf sees a weight that varies
    by a bounded factor.
    """
    dim = len(center)
    out_c, out_h = [], []
    stack = [(np.asarray(center, dtype=np.float64), half)]
    signs = np.array(list(itertools.product((-0.5, 0.5), repeat=dim)))
    while stack:
        c, h = stack.pop()
        dist = np.sqrt(np.sum(np.maximum(np.abs(c) - h, 0.0) ** 2))
        if h > min_half and dist < 2.0 * h:
            for s in signs:
                stack.append((c + s * h, h / 2.0))
        else:
            out_c.append(c)
            out_h.append(h)
    return np.array(out_c), np.array(out_h)


def _form_code(form: Form) -> int:
    return kernels.FORM_ONE_PLUS_ABS if form is Form.ONE_PLUS_ABS else kernels.FORM_ONE_PLUS_SQ_HALF


def log_cube_means(spec: WeightSpec, center, half: float, exponents, n: int = 8) -> np.ndarray:
    """``log(avg over the cube of Phi**p)`` for each ``p`` in ``exponents``."""
    centers, halves = _leaves(tuple(center), float(half))
    lm = kernels.log_mean_powers(
        centers, halves, int(n), spec.effective_gamma, _form_code(spec.form),
        np.asarray(exponents, dtype=np.float64),
    )
    log_vol = centers.shape[1] * np.log(halves)
    return logsumexp(lm + log_vol[:, None], axis=0) - logsumexp(log_vol)


@dataclass
class AqScan:
    q: float
    per_scale: np.ndarray  # supremum over centers at each half-side
    value: float | AqSentinel


def aq_scan(spec: WeightSpec, q: float, cubes: CubeFamily | None = None) -> AqScan:
    if not q > 1.0:
        raise ContractError(f"q must exceed 1, got {q}")
    dim = spec.profile_dim
    cubes = CubeFamily.dyadic(dim) if cubes is None else cubes.restricted(dim)
    if cubes.dim != dim:
        raise ContractError(f"cube family has dimension {cubes.dim}, weight needs {dim}")
    exps = (1.0, -1.0 / (q - 1.0))
    logs = []
    for h in cubes.half_sides:
        best = -np.inf
        for c in cubes.centers:
            a, b = log_cube_means(spec, c, h, exps, cubes.samples_per_cube)
            best = max(best, a / q + b * (1.0 - 1.0 / q))
        logs.append(best)
    logs = np.array(logs)
    if not np.all(np.isfinite(logs)) or logs.max() > np.log(np.finfo(float).max):
        return AqScan(q, np.exp(np.minimum(logs, 700.0)), AqSentinel.OVERFLOW)
    per_scale = np.exp(logs)
    value: float | AqSentinel = float(per_scale.max())
    k = DIVERGENCE_SCALES
    if per_scale.size > k:
        tail = per_scale[-(k + 1):]
        if np.all(np.diff(tail) > 0) and tail[-1] / tail[0] > DIVERGENCE_GROWTH:
            value = AqSentinel.DIVERGES
    return AqScan(q, per_scale, value)


def aq_estimate(spec: WeightSpec, q: float, cubes: CubeFamily | None = None) -> float | AqSentinel:
    return aq_scan(spec, q, cubes).value


def aq_finite(value) -> bool:
    return not isinstance(value, AqSentinel)


def muckenhoupt_criterion(gamma: float, dim: int, q: float) -> bool:
    """Exact membership of ``(1+|x|)**(-gamma)`` in ``A_q(R^dim)``."""
    return -dim * (q - 1.0) < gamma < dim


# ---------------------------------------------------------------- reports

@dataclass
class WeightConstants:
    c1: float
    c2: float
    c3: float
    aq_table: dict = field(default_factory=dict)


@dataclass
class AdaptedReport:
    spec: WeightSpec
    h1: bool
    h2: bool
    h3: bool
    h4: bool
    h3_exponent: float | None
    constants: WeightConstants

    @property
    def adapted(self) -> bool:
        return self.h1 and self.h2 and self.h3 and self.h4

    def records(self) -> list[dict]:
        c = self.constants
        h3_const = c.aq_table.get(self.h3_exponent) if self.h3_exponent else None
        return [
            {"axiom": "H1", "pass": self.h1, "constant": 1.0, "evidence_scale": None},
            {"axiom": "H2", "pass": self.h2, "constant": c.c1, "evidence_scale": 1e4},
            {"axiom": "H3", "pass": self.h3, "constant": _jsonable(h3_const),
             "evidence_scale": 2.0 ** 16, "exponent": self.h3_exponent},
            {"axiom": "H4", "pass": self.h4, "constant": c.c2, "evidence_scale": 2.0 ** 11.5},
        ]


def _jsonable(value):
    if isinstance(value, AqSentinel):
        return value.value
    return value


def check_h1(spec: WeightSpec, sample_cloud=None) -> bool:
    cloud = radial_cloud(spec.dim) if sample_cloud is None else sample_cloud
    vals = spec(cloud)
    # every supported family is a positive power of a quantity >= 1
    return bool(np.all(vals > 0.0) and np.all(vals <= 1.0))


def check_adapted(spec: WeightSpec, r_scan: Sequence[float] = (1.05, 1.1, 1.2, 1.5, 2.0),
                  cubes: CubeFamily | None = None, sample_cloud=None) -> AdaptedReport:
    if len(r_scan) == 0:
        raise ContractError("r_scan must be nonempty")
    if any(not (1.0 < r <= 2.0) for r in r_scan):
        raise ContractError("H3 exponents must lie in (1, 2]")
    h1 = check_h1(spec, sample_cloud)
    h2, c1 = check_h2(spec, sample_cloud)
    h4, c2 = check_h4(spec, None, sample_cloud)
    table = {}
    h3_exp = None
    for r in r_scan:
        table[r] = aq_estimate(spec.power(r), r, cubes)
        if aq_finite(table[r]):
            h3_exp = r
            break
    c3, _ = lemma4_bound(spec, c1)
    return AdaptedReport(spec, h1, h2, h3_exp is not None, h4, h3_exp,
                         WeightConstants(c1, c2, c3, table))


@dataclass
class PairReport:
    ordered: bool  # Phi <= Psi <= 1
    psi_a2: bool
    psi_a2_value: float | AqSentinel
    grad_ok: bool
    grad_constant: float
    lap_ok: bool
    lap_constant: float
    failures: list

    @property
    def passed(self) -> bool:
        return self.ordered and self.psi_a2 and self.grad_ok and self.lap_ok


def check_pair(phi: WeightSpec, psi: WeightSpec, sample_cloud=None,
               cubes: CubeFamily | None = None) -> PairReport:
    """Check ``Phi <= Psi <= 1``, ``Psi in A_2`` and the two derivative bounds.

    The bounds ``|grad Psi| <= C sqrt(Phi) Psi`` and
    ``|Lap Psi| <= C Phi Psi`` are read as: the ratio's shell-wise supremum
    stays flat both toward the axis and toward infinity.
    """
    for w in (phi, psi):
        if not (w.is_cylindrical or w.family is Family.CONSTANT) or w.dim != 3:
            raise ContractError("weight pairs must be cylindrical weights in dimension 3")
    cloud = radial_cloud(3) if sample_cloud is None else sample_cloud
    r = _require_coverage(psi, cloud)
    r = r[r > 0]
    fp, fs = phi.profile(r), psi.profile(r)
    failures = []
    ordered = bool(np.all(fp <= fs * (1.0 + 1e-12)) and np.all(fs <= 1.0))
    if not ordered:
        failures.append("ordering")
    a2 = aq_estimate(psi, 2.0, cubes)
    if not aq_finite(a2):
        failures.append("psi_a2")
    g_ratio = np.abs(psi.d_profile(r)) / (np.sqrt(fp) * fs)
    l_ratio = np.abs(psi.laplacian_profile(r)) / (fp * fs)
    g_ends = _bounded_at_ends(r, g_ratio)
    l_ends = _bounded_at_ends(r, l_ratio)
    for name, ends in (("gradient", g_ends), ("laplacian", l_ends)):
        if not ends["inner"]:
            failures.append(f"{name}_axis")
        if not ends["outer"]:
            failures.append(f"{name}_far_field")
    return PairReport(
        ordered, aq_finite(a2), a2,
        g_ends["inner"] and g_ends["outer"], float(g_ratio.max()),
        l_ends["inner"] and l_ends["outer"], float(l_ratio.max()),
        failures,
    )


# ---------------------------------------------------------------- derived bounds

def lemma4_bound(spec: WeightSpec, c1: float, rho_max: float = 1e6) -> tuple[float, bool]:
    """Constant with ``(1+rho)**-2 <= c3 Phi`` obtained by integrating H2 along rays."""
    phi0 = float(spec.profile(0.0))
    c3 = (phi0 ** -0.5 + 0.5 * c1) ** 2
    rho = np.concatenate([[0.0], np.geomspace(1e-6, rho_max, 20001)])
    lhs = (1.0 + rho) ** -2.0
    ok = bool(np.all(lhs <= c3 * spec.profile(rho) * (1.0 + 1e-12)))
    return c3, ok


def lemma2_power(spec: WeightSpec, s: float, theta: float,
                 cubes: CubeFamily | None = None) -> tuple[float, bool]:
    """Exponent ``p`` with ``Phi**theta in A_p`` given ``Phi in A_s``."""
    if not (0.0 < theta <= 1.0):
        raise ContractError("theta must lie in (0, 1]")
    if not aq_finite(aq_estimate(spec, s, cubes)):
        raise ContractError(f"weight is not in A_{s} on this cube family")
    p = 1.0 + theta * (s - 1.0)
    return p, aq_finite(aq_estimate(spec.power(theta), p, cubes))
