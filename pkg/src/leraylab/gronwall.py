"""Nonlinear Gronwall bound for ``alpha(t) <= A + B int_0^t (alpha + alpha^b)``.

The claimed conclusion is ``alpha <= 3A`` on ``[0, T0]`` with
``T0 = min(T1, 1 / (3^b (A^(b-1) + (B T1)^(b-1))))``.  It is tested against
the extremal trajectory ``alpha' = B (alpha + alpha^b)``, ``alpha(0) = A``,
which saturates the integral inequality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .ledger import Ledger, cumulative_trapezoid
from .weights import ContractError


@dataclass(frozen=True)
class GronwallParams:
    A: float
    B: float
    b: float
    T1: float

    def __post_init__(self):
        if not (self.A > 0 and self.T1 > 0 and self.B >= 0 and self.b >= 1):
            raise ContractError(f"invalid parameters {self}")

    @property
    def rate_factor(self) -> float:
        """``3^b (A^(b-1) + (B T1)^(b-1))``; ``0**0`` counts as 1."""
        return 3.0 ** self.b * (self.A ** (self.b - 1) + (self.B * self.T1) ** (self.b - 1))


def t0_bound(p: GronwallParams) -> float:
    return min(p.T1, 1.0 / p.rate_factor)


def _rhs(p: GronwallParams):
    return lambda a: p.B * (a + a ** p.b)


def extremal_trajectory(p: GronwallParams, t_end: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Classical RK4 for the extremal ODE on ``[0, t_end]``."""
    f = _rhs(p)
    h = t_end / steps
    a = np.empty(steps + 1)
    a[0] = p.A
    for i in range(steps):
        x = a[i]
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        a[i + 1] = x + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        if not math.isfinite(a[i + 1]):
            a[i + 1:] = math.inf
            break
    return np.linspace(0.0, t_end, steps + 1), a


def first_crossing(p: GronwallParams, level: float = 3.0) -> float:
    """First time the extremal trajectory reaches ``level * A`` (inf if never)."""
    if p.B == 0.0:
        return math.inf
    event = lambda t, y: y[0] - level * p.A  # noqa: E731
    event.terminal = True
    event.direction = 1
    # alpha grows at least like A exp(B t), so it reaches 3A before this horizon
    horizon = 2.0 * math.log(level) / p.B + 1.0
    sol = solve_ivp(lambda t, y: [p.B * (y[0] + y[0] ** p.b)], (0.0, horizon), [p.A],
                    method="DOP853", rtol=1e-12, atol=1e-14 * p.A, events=event)
    if sol.t_events[0].size:
        return float(sol.t_events[0][0])
    return math.inf


@dataclass
class EnvelopeReport:
    params: GronwallParams
    t0: float
    max_ratio: float
    envelope_holds: bool
    t_cross: float
    crossing_product: float
    crossing_holds: bool
    blew_up: bool = False

    @property
    def passed(self) -> bool:
        return self.envelope_holds and self.crossing_holds and not self.blew_up

    def as_dict(self) -> dict:
        p = self.params
        return {
            "A": p.A, "B": p.B, "b": p.b, "T1": p.T1, "t0": self.t0,
            "max_ratio": self.max_ratio, "envelope_holds": self.envelope_holds,
            "t_cross": None if math.isinf(self.t_cross) else self.t_cross,
            "crossing_product": None if math.isinf(self.crossing_product) else self.crossing_product,
            "crossing_holds": self.crossing_holds, "blew_up": self.blew_up, "pass": self.passed,
        }


def verify_envelope(p: GronwallParams, steps: int = 10_000) -> EnvelopeReport:
    if steps < 10_000:
        raise ContractError("use at least 1e4 steps")
    t0 = t0_bound(p)
    _, a = extremal_trajectory(p, t0, steps)
    blew_up = not np.all(np.isfinite(a))
    ratio = float(np.max(a) / p.A)
    t_cross = first_crossing(p)
    product = t_cross * p.rate_factor
    return EnvelopeReport(
        p, t0, ratio, bool(ratio <= 3.0 * (1.0 + 1e-12)) and not blew_up,
        t_cross, product, bool(product >= 1.0), blew_up,
    )


def sweep(As=(0.1, 1.0, 10.0), Bs=(0.1, 1.0, 10.0), bs=(1.0, 2.0, 3.0), T1: float = 1.0,
          steps: int = 10_000) -> list[EnvelopeReport]:
    return [verify_envelope(GronwallParams(A, B, b, T1), steps) for A in As for B in Bs for b in bs]


@dataclass
class FitReport:
    A_fit: float
    B_fit: float
    b: float
    t0: float
    envelope_holds: bool
    max_ratio_on_t0: float
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"A_fit": self.A_fit, "B_fit": self.B_fit, "b": self.b, "t0": self.t0,
                "envelope_holds": self.envelope_holds, "max_ratio_on_t0": self.max_ratio_on_t0,
                **self.details}


def fit_envelope(led: Ledger, b: float, column: str = "e_phi_u", T_end: float | None = None) -> FitReport:
    """Fit ``(A, B)`` to a ledger column and test the ``3A`` envelope on it.

    ``B`` enters the integral inequality linearly, so the minimal ``B`` is the
    largest row-wise ratio ``(alpha - A) / int (alpha + alpha^b)``.
    """
    if len(led) == 0:
        raise ContractError("empty ledger")
    t = led["t"]
    alpha = led[column]
    A = float(alpha[0])
    if A <= 0:
        raise ContractError("initial value must be positive")
    integral = cumulative_trapezoid(t, alpha + alpha ** b)
    excess = alpha - A
    mask = integral > 0
    B = float(max(0.0, np.max(excess[mask] / integral[mask]))) if np.any(mask) else 0.0
    horizon = float(T_end if T_end is not None else max(t[-1], 1e-300))
    t0 = t0_bound(GronwallParams(A, B, b, horizon))
    window = t <= t0
    ratio = float(np.max(alpha[window]) / A)
    return FitReport(A, B, b, t0, bool(ratio <= 3.0), ratio)
