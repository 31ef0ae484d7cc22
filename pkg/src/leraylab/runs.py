"""Run directories, manifests and JSON reports."""
from __future__ import annotations

import datetime as _dt
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, kernels

SCHEMA_VERSION = 1
OUTPUT_ENV = "LERAYLAB_OUTPUT"


def output_root(explicit: str | None = None) -> Path:
    return Path(explicit or os.environ.get(OUTPUT_ENV) or "runs")


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="microseconds")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


@dataclass
class RunDirectory:
    path: Path
    kind: str
    seed: int
    config_hash: str = ""
    started: str = field(default_factory=_now)
    files: list = field(default_factory=list)

    @classmethod
    def create(cls, root, kind: str, seed: int = 0) -> "RunDirectory":
        root = Path(root)
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y%m%dT%H%M%S%f")
        base = root / f"{kind}-{stamp}"
        path, k = base, 1
        while path.exists():  # never reuse a directory
            path = Path(f"{base}-{k}")
            k += 1
        path.mkdir(parents=True)
        return cls(path, kind, seed)

    def sub(self, name: str) -> Path:
        p = self.path / name
        p.mkdir(parents=True, exist_ok=True)
        return p

    def write_report(self, name: str, payload: dict) -> Path:
        body = {"schema_version": SCHEMA_VERSION, **payload}
        return self.write_text(name, dumps(body) + "\n")

    def write_text(self, name: str, text: str) -> Path:
        p = self.path / name
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        self.files.append(str(p.relative_to(self.path)))
        return p

    def register(self, path) -> None:
        self.files.append(str(Path(path).relative_to(self.path)))

    def finish(self, extra: dict | None = None) -> Path:
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "code_version": f"{__version__}+{kernels.BACKEND}",
            "started": self.started,
            "finished": _now(),
            "files": sorted(set(self.files)),
            **(extra or {}),
        }
        p = self.path / "manifest.json"
        p.write_text(dumps(manifest) + "\n")
        return p
