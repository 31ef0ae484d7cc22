"""Time-series ledgers (CSV) and binary checkpoints shared by both solvers."""
from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

ENERGY_COLUMNS = (
    "t", "e_phi_u", "e_phi_grad_u", "e_phi_omega", "e_phi_grad_omega",
    "diss_cum", "e_u_l2", "u_l4_phi",
)
AXI_COLUMNS = ("t", "lady_q", "e_phi_u", "e_psi_omega", "e_psi_grad_omega")

CHECKPOINT_MAGIC = b"LRYL"
_HEADER = struct.Struct("<4sIddd")  # magic, n, L, t, epsilon: 32 bytes
AXI_TAG = b"A"


@dataclass
class Ledger:
    columns: tuple
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def append(self, row) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} entries, ledger has {len(self.columns)} columns")
        self.rows.append(tuple(float(v) for v in row))

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=np.float64)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.columns) + "\n")
        for r in self.rows:
            buf.write(",".join("%.17g" % v for v in r) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text())

    @classmethod
    def read_csv(cls, path) -> "Ledger":
        lines = Path(path).read_text().splitlines()
        if not lines:
            raise ValueError(f"{path}: empty ledger file")
        cols = tuple(c.strip() for c in lines[0].split(","))
        led = cls(cols)
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                led.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
        return led


def energy_ledger() -> Ledger:
    return Ledger(ENERGY_COLUMNS)


def axi_ledger() -> Ledger:
    return Ledger(AXI_COLUMNS)


def cumulative_trapezoid(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Running trapezoidal integral starting at 0."""
    out = np.zeros_like(np.asarray(y, dtype=np.float64))
    if len(t) > 1:
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


def write_checkpoint_2d(path, n: int, L: float, t: float, epsilon: float, u: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CHECKPOINT_MAGIC, n, L, t, epsilon))
        fh.write(np.ascontiguousarray(u, dtype="<f8").tobytes())


def read_checkpoint_2d(path) -> dict:
    data = Path(path).read_bytes()
    magic, n, L, t, eps = _HEADER.unpack_from(data)
    if magic != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not a checkpoint file")
    u = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(2, n, n)
    return {"n": n, "L": L, "t": t, "epsilon": eps, "u": u.copy()}


def write_checkpoint_axi(path, n_r: int, R: float, t: float, n_z: int, Z: float, eta: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CHECKPOINT_MAGIC, n_r, R, t, 0.0))
        fh.write(AXI_TAG)
        fh.write(struct.pack("<Id", n_z, Z))
        fh.write(np.ascontiguousarray(eta, dtype="<f8").tobytes())


def read_checkpoint_axi(path) -> dict:
    data = Path(path).read_bytes()
    magic, n_r, R, t, _ = _HEADER.unpack_from(data)
    off = _HEADER.size
    if magic != CHECKPOINT_MAGIC or data[off:off + 1] != AXI_TAG:
        raise ValueError(f"{path}: not an axisymmetric checkpoint")
    n_z, Z = struct.unpack_from("<Id", data, off + 1)
    eta = np.frombuffer(data, dtype="<f8", offset=off + 13).reshape(n_r, n_z)
    return {"n_r": n_r, "R": R, "t": t, "n_z": n_z, "Z": Z, "eta": eta.copy()}
