"""Registered experiments that tie the modules into reproducible checks.

Each preset writes ledgers (CSV), reports (JSON) and a manifest into a fresh
run directory and returns one outcome per criterion it covers.
"""
from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import axisym, gronwall, solver2d, spectral, weights
from .config import canonical_text, config_hash
from .runs import RunDirectory

CRITERIA = {
    "C1": "weight census matches the A_q membership criterion",
    "C2": "adapted-weight table for the three example families",
    "C3": "spectral identities below 1e-10",
    "C4": "Taylor-Green decay and energy equality",
    "C5": "weighted energy constant uniform in epsilon and n",
    "C6": "nonlinear Gronwall envelope sweep",
    "C7": "monotone axisymmetric invariant",
    "C8": "weighted vorticity constant and weight-pair hypotheses",
    "C9": "mollifier bound uniform in epsilon",
    "C10": "byte-identical ledgers on re-run",
    "vorticity_2d": "2D weighted vorticity constant stable under dt halving",
    "continuity_at_zero": "weighted energy continuous at t = 0",
    "energy_fit": "Gronwall fit of a solver ledger",
    "axisym_structure": "divergence, positivity, axis regularity and stretching identity",
    "pair_examples": "weight-pair examples",
}


@dataclass
class Outcome:
    criterion: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "description": CRITERIA[self.criterion],
                "pass": self.passed, "seconds": self.seconds, **self.detail}


@dataclass
class Context:
    run: RunDirectory
    seed: int = 0
    threads: int = 1

    def map(self, fn, items):
        if self.threads <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.threads) as pool:
            return list(pool.map(fn, items))


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    targets: tuple
    runner: Callable[[Context], list]
    expected: dict
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.expected) - set(CRITERIA)
        if unknown:
            raise ValueError(f"preset {self.name} names unregistered criteria {sorted(unknown)}")


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def _relative_spread(values, reference) -> float:
    values = np.asarray(values, dtype=float)
    if reference == 0:
        return 0.0 if np.all(values == 0) else float("inf")
    return float(np.max(np.abs(values - reference)) / abs(reference))


def _save_ledger(ctx: Context, name: str, led, config=None) -> str:
    path = ctx.run.write_text(f"ledgers/{name}.csv", led.to_csv_text())
    if config is not None:
        ctx.run.write_text(f"configs/{name}.cfg", canonical_text(config))
    return str(path.relative_to(ctx.run.path))


# ---------------------------------------------------------------- weights

CENSUS_GAMMAS = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
CENSUS_QS = (1.2, 1.5, 2.0)


def census_table():
    rows = []
    for d in (2, 3):
        for g in CENSUS_GAMMAS:
            for q in CENSUS_QS:
                scan = weights.aq_scan(weights.WeightSpec.radial(g, d), q)
                finite = weights.aq_finite(scan.value)
                expect = weights.muckenhoupt_criterion(g, d, q)
                rows.append({
                    "dim": d, "gamma": g, "q": q,
                    "value": scan.value if finite else scan.value.value,
                    "finite": finite, "expected_finite": expect, "match": finite == expect,
                    "growth_last_scales": float(scan.per_scale[-1] / scan.per_scale[-4]),
                })
    return rows


ADAPTED_FAMILIES = {
    # family label -> (spec factory, verdict rule)
    "radial_d2": (lambda g: weights.WeightSpec.radial(g, 2), lambda g: g < 2.0),
    "radial_d3": (lambda g: weights.WeightSpec.radial(g, 3), lambda g: g <= 2.0),
    "cylindrical_d3": (lambda g: weights.WeightSpec.cylindrical(g), lambda g: g < 2.0),
}
ADAPTED_GAMMAS = CENSUS_GAMMAS


def adapted_table():
    rows = []
    for label, (make, rule) in ADAPTED_FAMILIES.items():
        for g in ADAPTED_GAMMAS:
            rep = weights.check_adapted(make(g))
            rows.append({
                "family": label, "gamma": g, "adapted": rep.adapted, "expected": rule(g),
                "match": rep.adapted == rule(g), "h1": rep.h1, "h2": rep.h2, "h3": rep.h3,
                "h4": rep.h4, "h3_exponent": rep.h3_exponent, "c1": rep.constants.c1,
                "c2": rep.constants.c2, "c3": rep.constants.c3,
            })
    return rows


def run_weights_census(ctx: Context) -> list:
    with _Timer() as t1:
        rows = census_table()
    ctx.run.write_report("reports/census.json", {"cells": rows})
    c1 = Outcome("C1", all(r["match"] for r in rows) and t1.seconds < 60.0,
                 {"cells": len(rows), "mismatches": sum(not r["match"] for r in rows)}, t1.seconds)
    with _Timer() as t2:
        table = adapted_table()
    ctx.run.write_report("reports/adapted.json", {"rows": table})
    c2 = Outcome("C2", all(r["match"] for r in table) and t2.seconds < 120.0,
                 {"rows": len(table), "mismatches": sum(not r["match"] for r in table)}, t2.seconds)
    return [c1, c2]


# ---------------------------------------------------------------- 2D

def spectral_identities(n: int = 64, seed: int = 0) -> dict:
    grid = spectral.PeriodicGrid(n, 2.0 * np.pi)
    rng = np.random.default_rng(seed)

    def rfield():
        return spectral.SpectralField(grid, values=rng.normal(size=(n, n)))

    def l2(c):
        return float(np.sqrt(np.sum(np.abs(c) ** 2)))

    u = (rfield(), rfield())
    pu = spectral.leray_project(u)
    ppu = spectral.leray_project(pu)
    idem = max(l2(a.values - b.values) for a, b in zip(ppu, pu)) / max(l2(a.values) for a in pu)
    div = spectral.divergence(pu)
    div_res = l2(div.values) / max(l2(a.values) for a in u)
    phi = rfield()
    grad = grid.inverse(spectral.gradient_coeffs(grid, phi.coeffs))
    pg = spectral.leray_project(tuple(spectral.SpectralField(grid, values=g) for g in grad))
    annihil = max(l2(a.values) for a in pg) / l2(grad)
    b = (rfield(), rfield())
    uh = np.stack([c.coeffs for c in u])
    bh = np.stack([c.coeffs for c in b])
    p = spectral.pressure_coeffs(grid, uh, bh)
    dd = spectral.divdiv_coeffs(grid, uh, bh)
    press = l2(-spectral.laplacian_coeffs(grid, p) - dd) / l2(dd)
    return {"idempotence": idem, "divergence": div_res, "gradient_annihilation": annihil,
            "pressure_identity": press}


def pc_config(n: int, epsilon: float, seed: int, dt: float = 1e-3) -> solver2d.RunConfig:
    return solver2d.RunConfig(
        n=n, L=2.0 * np.pi, dt=dt, t_end=0.5, epsilon=epsilon,
        weight_family="radial_power", weight_gamma=1.0, init="random_divfree",
        amplitude=5.0, envelope_offset=0.2, envelope_width=0.08, output_every=5, seed=seed,
    )


PC_EPSILONS = (0.4, 0.2, 0.1)
PC_GRIDS = (64, 128)


def run_thm1_energy(ctx: Context) -> list:
    out = []
    with _Timer() as t:
        ident = spectral_identities(64, ctx.seed)
    ctx.run.write_report("reports/spectral_identities.json", ident)
    out.append(Outcome("C3", all(v < 1e-10 for v in ident.values()) and t.seconds < 10.0, ident, t.seconds))

    with _Timer() as t:
        cfg = solver2d.RunConfig(n=64, dt=1e-3, t_end=1.0, init="taylor_green", seed=ctx.seed)
        res = solver2d.run(cfg)
        u0 = solver2d.taylor_green(cfg.grid())
        exact = np.exp(-2.0 * res.state.t) * u0
        err = float(np.linalg.norm(res.state.u - exact) / np.linalg.norm(exact))
        drift = solver2d.energy_drift(res.ledger)
    _save_ledger(ctx, "taylor_green", res.ledger, cfg)
    out.append(Outcome("C4", err < 1e-6 and drift < 1e-6 and t.seconds < 60.0,
                       {"relative_l2_error": err, "energy_drift": drift}, t.seconds))

    jobs = [(n, e) for n in PC_GRIDS for e in PC_EPSILONS]
    with _Timer() as t:
        results = ctx.map(lambda job: solver2d.run(pc_config(job[0], job[1], ctx.seed)), jobs)
    table = []
    for (n, e), r in zip(jobs, results):
        rep = solver2d.verify_pc(r.ledger, d=2)
        _save_ledger(ctx, f"pc_n{n}_eps{e:g}", r.ledger, pc_config(n, e, ctx.seed))
        table.append({"n": n, "epsilon": e, "c_min": rep.c_min, "c_signed": rep.c_signed,
                      "energy_drift": solver2d.energy_drift(r.ledger)})
    signed = [row["c_signed"] for row in table]
    reference = float(np.median(signed))
    spread = _relative_spread(signed, reference)
    ctx.run.write_report("reports/pc_uniformity.json", {"runs": table, "reference": reference,
                                                        "relative_spread": spread})
    out.append(Outcome("C5", bool(np.all(np.isfinite(signed))) and spread <= 0.2 and t.seconds < 900.0,
                       {"reference_c_signed": reference, "relative_spread": spread,
                        "c_min_values": [row["c_min"] for row in table]}, t.seconds))

    with _Timer() as t:
        base = results[jobs.index((64, 0.2))]
        fit = gronwall.fit_envelope(base.ledger, b=2.0, T_end=base.state.t)
    ctx.run.write_report("reports/energy_fit.json", fit.as_dict())
    out.append(Outcome("energy_fit", bool(np.isfinite(fit.B_fit)) and fit.envelope_holds,
                       fit.as_dict(), t.seconds))

    with _Timer() as t:
        c9 = mollifier_uniformity(seed=ctx.seed)
    ctx.run.write_report("reports/mollifier_uniformity.json", c9)
    out.append(Outcome("C9", c9["pass"] and t.seconds < 60.0,
                       {k: c9[k] for k in ("max_by_epsilon", "bound", "literal_monotone")}, t.seconds))
    return out


MOLLIFIER_EPSILONS = (0.8, 0.4, 0.2, 0.1, 0.05)


def mollifier_uniformity(n: int = 128, L: float = 8.0, gamma: float = 1.0, n_fields: int = 100,
                         seed: int = 0, epsilons=MOLLIFIER_EPSILONS) -> dict:
    """Maximum weighted norm ratio of mollified to raw fields per epsilon.

    Passes when no finer epsilon exceeds ``max(1, M(coarsest))``, with ``M``
    the per-epsilon maximum over fields.
    """
    grid = spectral.PeriodicGrid(n, L)
    spec = weights.WeightSpec.radial(gamma, 2)
    tab = spectral.mollifier_ratio_table(grid, spec, epsilons, n_fields, seed)
    maxima = tab.max(axis=1)
    bound = max(1.0, float(maxima[0]))
    return {
        "epsilons": list(epsilons), "max_by_epsilon": maxima.tolist(), "bound": bound,
        "literal_monotone": bool(np.all(np.diff(maxima) <= 1e-12)),
        "pass": bool(np.all(maxima <= bound * (1.0 + 1e-12))),
    }


def vorticity_config(dt: float, seed: int) -> solver2d.RunConfig:
    cfg = pc_config(64, 0.0, seed, dt)
    return dataclasses.replace(cfg, output_every=max(1, int(round(5e-3 / dt))), dense_start=10)


def run_thm2_vorticity(ctx: Context) -> list:
    out = []
    with _Timer() as t:
        tg_cfg = solver2d.RunConfig(n=64, dt=1e-3, t_end=0.25, init="taylor_green")
        tg = solver2d.run(tg_cfg)
        tg_rep = solver2d.verify_vorticity_2d(tg.ledger)
        dts = (1e-3, 5e-4)
        runs = ctx.map(lambda dt: solver2d.run(vorticity_config(dt, ctx.seed)), dts)
    _save_ledger(ctx, "vorticity_taylor_green", tg.ledger, tg_cfg)
    reps = []
    for dt, r in zip(dts, runs):
        _save_ledger(ctx, f"vorticity_dt{dt:g}", r.ledger, vorticity_config(dt, ctx.seed))
        reps.append(solver2d.verify_vorticity_2d(r.ledger))
    signed = [r.c_signed for r in reps]
    spread = _relative_spread(signed[1:], signed[0])
    detail = {"taylor_green_c": tg_rep.c_min, "c_signed": signed, "relative_change": spread}
    ctx.run.write_report("reports/vorticity_2d.json", detail)
    out.append(Outcome("vorticity_2d", tg_rep.c_min == 0.0 and spread <= 0.1, detail, t.seconds))
    short = dataclasses.replace(vorticity_config(1e-4, ctx.seed), t_end=2e-3, output_every=1)
    cont = solver2d.continuity_at_zero(solver2d.run(short).ledger)
    ctx.run.write_report("reports/continuity_at_zero.json", cont)
    out.append(Outcome("continuity_at_zero", cont["pass"], cont))
    return out


# ---------------------------------------------------------------- Gronwall

def run_lemma5_sweep(ctx: Context) -> list:
    with _Timer() as t:
        reports = gronwall.sweep()
    rows = [r.as_dict() for r in reports]
    ctx.run.write_report("reports/lemma5_sweep.json", {"triples": rows})
    failed = [r for r in rows if not r["pass"]]
    return [Outcome("C6", not failed and t.seconds < 30.0,
                    {"triples": len(rows), "failed": len(failed),
                     "failed_triples": [(r["A"], r["B"], r["b"]) for r in failed]}, t.seconds)]


# ---------------------------------------------------------------- axisymmetric

def ring_config(dt: float = 1e-3) -> axisym.AxiConfig:
    return axisym.AxiConfig(n_r=128, n_z=128, R=6.0, Z=6.0, dt=dt, t_end=0.5, init="vortex_ring",
                            amplitude=50.0, output_every=max(1, int(round(1e-2 / dt))))


def run_thm3_axisym(ctx: Context) -> list:
    with _Timer() as t:
        cfg = ring_config()
        res = axisym.run_axi(cfg)
        mon = axisym.ladyzhenskaya_monitor(res.ledger)
    _save_ledger(ctx, "vortex_ring", res.ledger, cfg)
    ctx.run.write_report("reports/ladyzhenskaya.json", mon)
    c7 = Outcome("C7", mon["pass"] and t.seconds < 600.0, mon, t.seconds)
    stretch = axisym.stretching_identity_check(res.state)
    axis_ratio = res.axis_eta_max / float(np.abs(axisym.initial_state(cfg).eta).max())
    structure = {
        "max_divergence": res.max_divergence, "min_eta_ratio": res.min_eta_ratio,
        "axis_eta_ratio": axis_ratio, "stretching_residual": stretch,
    }
    ctx.run.write_report("reports/axisym_structure.json", structure)
    ok = (res.max_divergence < 1e-8 and res.min_eta_ratio >= -1e-8 and stretch < 1e-2
          and np.isfinite(axis_ratio))
    return [c7, Outcome("axisym_structure", bool(ok), structure)]


PAIR_EXAMPLES = {
    "gamma1.5_delta1": (weights.WeightSpec.cylindrical(1.5),
                        weights.WeightSpec.cylindrical(1.0, weights.Form.ONE_PLUS_SQ_HALF), True),
    "degenerate_sq": (weights.WeightSpec.cylindrical(1.0, weights.Form.ONE_PLUS_SQ_HALF),
                      weights.WeightSpec.cylindrical(1.0, weights.Form.ONE_PLUS_SQ_HALF), True),
    "degenerate_abs": (weights.WeightSpec.cylindrical(1.0), weights.WeightSpec.cylindrical(1.0), False),
    "gamma1_delta1.5": (weights.WeightSpec.cylindrical(1.0),
                        weights.WeightSpec.cylindrical(1.5, weights.Form.ONE_PLUS_SQ_HALF), False),
}


def run_thm4_pair(ctx: Context) -> list:
    out = []
    rows = {}
    for name, (phi, psi, expect) in PAIR_EXAMPLES.items():
        rep = weights.check_pair(phi, psi)
        rows[name] = {"pass": rep.passed, "expected": expect, "failures": rep.failures,
                      "grad_constant": rep.grad_constant, "lap_constant": rep.lap_constant}
    ctx.run.write_report("reports/pair_examples.json", rows)
    out.append(Outcome("pair_examples", all(r["pass"] == r["expected"] for r in rows.values()), rows))

    with _Timer() as t:
        cfg = ring_config()
        phi, psi = cfg.phi(), cfg.psi()
        dts = (1e-3, 5e-4)
        runs = ctx.map(lambda dt: axisym.run_axi(ring_config(dt)), dts)
        reps = [axisym.verify_coe1(r.ledger) for r in runs]
        pair = weights.check_pair(phi, psi)
    for dt, r in zip(dts, runs):
        _save_ledger(ctx, f"coe1_dt{dt:g}", r.ledger, ring_config(dt))
    signed = [r.c_signed for r in reps]
    spread = _relative_spread(signed[1:], signed[0])
    detail = {"c_signed": signed, "c_min": [r.c_min for r in reps], "relative_change": spread,
              "envelope_consistent": all(r.envelope_consistent for r in reps),
              "pair_pass": pair.passed, "pair_failures": pair.failures}
    ctx.run.write_report("reports/coe1.json", detail)
    ok = (all(np.isfinite(signed)) and spread <= 0.25 and pair.passed
          and detail["envelope_consistent"] and t.seconds < 900.0)
    out.append(Outcome("C8", bool(ok), detail, t.seconds))
    return out


# ---------------------------------------------------------------- registry

PRESETS = {
    p.name: p for p in (
        ExperimentPreset("weights-census", ("weights",), run_weights_census, {"C1": True, "C2": True}),
        ExperimentPreset("thm1-energy", ("spectral", "solver2d", "gronwall"), run_thm1_energy,
                         {"C3": True, "C4": True, "C5": True, "C9": True, "energy_fit": True}),
        ExperimentPreset("thm2-vorticity-2d", ("solver2d",), run_thm2_vorticity,
                         {"vorticity_2d": True, "continuity_at_zero": True}),
        ExperimentPreset("thm3-axisym-local", ("axisym",), run_thm3_axisym,
                         {"C7": True, "axisym_structure": True}),
        ExperimentPreset("thm4-weight-pair", ("weights", "axisym"), run_thm4_pair,
                         {"pair_examples": True, "C8": True}),
        ExperimentPreset("lemma5-sweep", ("gronwall",), run_lemma5_sweep, {"C6": True}),
    )
}


class UnknownPreset(KeyError):
    pass


@dataclass
class PresetResult:
    name: str
    outcomes: list
    run_dir: RunDirectory

    @property
    def ok(self) -> bool:
        expected = PRESETS[self.name].expected
        got = {o.criterion: o.passed for o in self.outcomes}
        return all(got.get(k) == v for k, v in expected.items())

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1


def run_preset(name: str, root, seed: int = 0, threads: int = 1) -> PresetResult:
    if name not in PRESETS:
        raise UnknownPreset(name)
    preset = PRESETS[name]
    run = RunDirectory.create(root, name, seed)
    run.config_hash = config_hash(_PresetIdentity(name, seed))
    ctx = Context(run, seed, threads)
    outcomes = preset.runner(ctx)
    result = PresetResult(name, outcomes, run)
    run.write_report("criteria.json", {
        "preset": name, "pass": result.ok,
        "outcomes": [o.as_dict() for o in outcomes],
        "expected": preset.expected,
    })
    run.finish({"preset": name, "targets": list(preset.targets), "pass": result.ok})
    return result


@dataclass
class _PresetIdentity:
    preset: str
    seed: int
