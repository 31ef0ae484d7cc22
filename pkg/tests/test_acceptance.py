"""End-to-end acceptance checks, one test per numbered criterion.

Each test runs (or reuses) the preset that owns the criterion, asserts the
stated tolerance and runtime budget, and prints a one-line verdict.
"""
import filecmp
import math
from pathlib import Path

import pytest

from leraylab import presets

pytestmark = pytest.mark.slow

BUDGET = {1: 60, 2: 120, 3: 10, 4: 60, 5: 900, 6: 30, 7: 600, 8: 900, 9: 60}


@pytest.fixture(scope="module")
def preset_outcomes(tmp_path_factory):
    cache = {}

    def get(name):
        if name not in cache:
            res = presets.run_preset(name, tmp_path_factory.mktemp(name), seed=0)
            cache[name] = {o.criterion: o for o in res.outcomes}
        return cache[name]

    return get


def brief(outcome, *keys):
    parts = []
    for k in keys:
        v = outcome.detail[k]
        parts.append(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}")
    parts.append(f"{outcome.seconds:.1f}s")
    return " ".join(parts)


def check(record, criterion, outcome, *keys):
    ok = outcome.passed and outcome.seconds < BUDGET[criterion]
    record(criterion, ok, brief(outcome, *keys))
    return ok


def test_criterion_01_weight_census(preset_outcomes, acceptance_record):
    o = preset_outcomes("weights-census")["C1"]
    assert o.detail["cells"] == 42
    assert check(acceptance_record, 1, o, "cells", "mismatches")
    assert o.detail["mismatches"] == 0


def test_criterion_02_adapted_table(preset_outcomes, acceptance_record):
    o = preset_outcomes("weights-census")["C2"]
    assert check(acceptance_record, 2, o, "rows", "mismatches")


def test_criterion_03_spectral_identities(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm1-energy")["C3"]
    residuals = [o.detail[k] for k in ("idempotence", "gradient_annihilation", "pressure_identity")]
    ok = check(acceptance_record, 3, o, "idempotence", "gradient_annihilation", "pressure_identity")
    assert ok and max(residuals) < 1e-10


def test_criterion_04_taylor_green(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm1-energy")["C4"]
    ok = check(acceptance_record, 4, o, "relative_l2_error", "energy_drift")
    assert ok and o.detail["relative_l2_error"] < 1e-6 and o.detail["energy_drift"] < 1e-6


def test_criterion_05_energy_constant_uniform(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm1-energy")["C5"]
    assert len(o.detail["c_min_values"]) == 6  # 3 epsilons x 2 grids
    ok = check(acceptance_record, 5, o, "relative_spread", "reference_c_signed")
    assert ok and o.detail["relative_spread"] <= 0.20


def test_criterion_06_gronwall_sweep(preset_outcomes, acceptance_record):
    o = preset_outcomes("lemma5-sweep")["C6"]
    assert o.detail["triples"] == 27
    ok = check(acceptance_record, 6, o, "triples", "failed")
    assert ok, f"envelope violated for {o.detail['failed_triples']}"


def test_criterion_07_ladyzhenskaya(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm3-axisym-local")["C7"]
    ok = check(acceptance_record, 7, o, "rows", "worst_relative_change", "initial_bound_holds")
    assert ok and o.detail["monotone"] and o.detail["initial_bound_holds"] is True


def test_criterion_08_weight_pair(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm4-weight-pair")["C8"]
    assert all(math.isfinite(c) for c in o.detail["c_signed"])
    ok = check(acceptance_record, 8, o, "relative_change", "pair_pass")
    assert ok and o.detail["relative_change"] <= 0.25 and o.detail["pair_pass"]


def test_criterion_09_mollifier_uniform(preset_outcomes, acceptance_record):
    o = preset_outcomes("thm1-energy")["C9"]
    assert check(acceptance_record, 9, o, "bound", "literal_monotone")


def ledger_files(root: Path) -> dict:
    (run,) = [p for p in root.iterdir() if p.is_dir()]
    return {p.relative_to(run): p for p in sorted(run.rglob("*.csv"))}


def test_criterion_10_rerun_is_byte_identical(tmp_path, acceptance_record):
    compared, mismatched = 0, []
    for name in ("thm2-vorticity-2d", "thm3-axisym-local"):
        a, b = tmp_path / name / "a", tmp_path / name / "b"
        presets.run_preset(name, a, seed=3)
        presets.run_preset(name, b, seed=3)
        fa, fb = ledger_files(a), ledger_files(b)
        assert fa and fa.keys() == fb.keys()
        compared += len(fa)
        mismatched += [f"{name}/{k}" for k in fa if not filecmp.cmp(fa[k], fb[k], shallow=False)]
    acceptance_record(10, not mismatched, f"{compared} ledger CSVs compared, {len(mismatched)} differ")
    assert not mismatched, mismatched
