import json
import tempfile
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leraylab import ledger as lg
from leraylab.config import ConfigError, canonical_text, config_hash, parse_config
from leraylab.runs import SCHEMA_VERSION, RunDirectory, dumps
from leraylab.solver2d import RunConfig
from leraylab.weights import AqSentinel

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(*[finite] * 5), max_size=20))
def test_ledger_csv_round_trip_is_exact(rows):
    led = lg.axi_ledger()
    for r in rows:
        led.append(r)
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "l.csv"
        led.write_csv(path)
        back = lg.Ledger.read_csv(path)
    assert back.columns == led.columns
    assert back.rows == led.rows


def test_ledger_rejects_wrong_row_length():
    with pytest.raises(ValueError):
        lg.energy_ledger().append((1.0, 2.0))


def test_ledger_read_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("t,x\n0,1\n0.1,oops\n")
    with pytest.raises(ValueError, match=":3:"):
        lg.Ledger.read_csv(p)
    (tmp_path / "e.csv").write_text("")
    with pytest.raises(ValueError, match="empty"):
        lg.Ledger.read_csv(tmp_path / "e.csv")


def test_cumulative_trapezoid():
    t = np.linspace(0, 1, 11)
    np.testing.assert_allclose(lg.cumulative_trapezoid(t, 2 * t), t ** 2, atol=1e-15)


def test_checkpoint_header_is_32_bytes(tmp_path):
    u = np.random.default_rng(0).normal(size=(2, 16, 16))
    p = tmp_path / "c.bin"
    lg.write_checkpoint_2d(p, 16, 2.0, 0.5, 0.1, u)
    assert p.stat().st_size == 32 + u.nbytes
    back = lg.read_checkpoint_2d(p)
    np.testing.assert_array_equal(back["u"], u)
    assert (back["n"], back["L"], back["t"], back["epsilon"]) == (16, 2.0, 0.5, 0.1)


def test_checkpoint_kinds_are_distinguished(tmp_path):
    p = tmp_path / "c.bin"
    lg.write_checkpoint_2d(p, 16, 2.0, 0.5, 0.1, np.zeros((2, 16, 16)))
    with pytest.raises(ValueError):
        lg.read_checkpoint_axi(p)
    q = tmp_path / "junk.bin"
    q.write_bytes(b"XXXX" + bytes(100))
    with pytest.raises(ValueError):
        lg.read_checkpoint_2d(q)


# ---------------------------------------------------------------- config

def test_config_parses_and_keeps_defaults():
    cfg = parse_config("n = 128  # finer\n\ndt=5e-4\nweight_family=radial_power\n", RunConfig)
    assert cfg.n == 128 and cfg.dt == 5e-4 and cfg.weight_family == "radial_power"
    assert cfg.t_end == RunConfig().t_end


@pytest.mark.parametrize("text,message", [
    ("dt=frog\n", "line 1: key 'dt' expects float, got 'frog'"),
    ("\nbogus=1\n", "line 2: unknown key 'bogus'"),
    ("n=64\nn=128\n", "line 2: key 'n' already set on line 1"),
    ("n 64\n", "line 1: expected key=value"),
])
def test_config_errors(text, message):
    with pytest.raises(ConfigError) as err:
        parse_config(text, RunConfig)
    assert str(err.value).startswith(message)


@given(st.integers(16, 512), st.floats(1e-6, 1.0), st.floats(0.0, 1.0), st.integers(0, 2 ** 31))
def test_canonical_text_round_trips(n, dt, eps, seed):
    cfg = RunConfig(n=n, dt=dt, epsilon=eps, seed=seed)
    back = parse_config(canonical_text(cfg), RunConfig)
    assert back == cfg
    assert config_hash(back) == config_hash(cfg)


def test_hash_changes_with_config():
    assert config_hash(RunConfig()) != config_hash(RunConfig(dt=5e-4))


# ---------------------------------------------------------------- run directories

def test_run_directories_are_never_reused(tmp_path):
    a = RunDirectory.create(tmp_path, "x", 0)
    b = RunDirectory.create(tmp_path, "x", 0)
    assert a.path != b.path and a.path.exists() and b.path.exists()


def test_manifest_contents(tmp_path):
    run = RunDirectory.create(tmp_path, "demo", 7)
    run.config_hash = "abc"
    run.write_report("reports/r.json", {"value": np.float64(1.5), "sentinel": AqSentinel.DIVERGES,
                                        "big": float("inf")})
    run.finish({"pass": True})
    manifest = json.loads((run.path / "manifest.json").read_text())
    assert manifest["schema_version"] == SCHEMA_VERSION
    assert manifest["seed"] == 7 and manifest["config_hash"] == "abc"
    assert manifest["files"] == ["reports/r.json"]
    assert {"code_version", "started", "finished"} <= set(manifest)
    report = json.loads((run.path / "reports/r.json").read_text())
    assert report == {"schema_version": SCHEMA_VERSION, "value": 1.5, "sentinel": "diverges", "big": "inf"}


def test_dumps_is_key_sorted():
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
