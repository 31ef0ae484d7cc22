"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Also times the end-to-end workloads that lean on each kernel: an A_q census
row and an axisymmetric solver run.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from leraylab import _kernels_py

try:
    from leraylab import _kernels as _compiled
except ImportError:
    _compiled = None


def kernel_cases(rng: np.random.Generator) -> dict:
    m, n = 256, 256
    diag = 4.0 + rng.random((m, n))
    lower, upper, rhs = rng.random((m, n)), rng.random((m, n)), rng.random((m, n))
    centers = rng.normal(size=(512, 2)) * 10.0
    halves = rng.random(512) + 0.1
    n_r, n_z = 256, 256
    eta = rng.normal(size=(n_r, n_z))
    flux_r = rng.normal(size=(n_r + 1, n_z))
    flux_z = rng.normal(size=(n_r, n_z))
    r_c = (np.arange(n_r) + 0.5) * 0.02
    return {
        "thomas_batched 256x256": ("thomas_batched", (lower, diag, upper, rhs)),
        "log_mean_powers 512 cubes x 8^2": ("log_mean_powers", (centers, halves, 8, 1.5, 0, np.array([1.0, -1.0]))),
        "muscl_tendency 256x256": ("muscl_tendency", (eta, flux_r, flux_z, r_c, 0.02, 0.02)),
    }


def time_call(fn, args, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


WORKLOADS = {
    "A_q scan, radial d=3": "from leraylab import weights as w; w.aq_scan(w.WeightSpec.radial(1.0, 3), 2.0)",
    "axisym run 128^2, 100 steps": (
        "from leraylab import axisym as a; a.run_axi(a.AxiConfig(t_end=0.1, output_every=50))"
    ),
}


def time_workload(code: str, pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["LERAYLAB_PURE_PYTHON"] = "1"
    else:
        env.pop("LERAYLAB_PURE_PYTHON", None)
    script = f"import time; t=time.perf_counter(); {code}; print(time.perf_counter()-t)"
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-workloads", action="store_true")
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the fallback is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':36s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s} {'max |diff|':>11s}")
    for label, (name, call_args) in kernel_cases(rng).items():
        py_fn, cy_fn = getattr(_kernels_py, name), getattr(_compiled, name)
        t_py = time_call(py_fn, call_args, args.repeat)
        t_cy = time_call(cy_fn, call_args, args.repeat)
        diff = float(np.max(np.abs(py_fn(*call_args) - cy_fn(*call_args))))
        print(f"{label:36s} {1e3 * t_py:11.2f} {1e3 * t_cy:12.2f} {t_py / t_cy:8.1f} {diff:11.1e}")
    if not args.skip_workloads:
        print()
        print(f"{'workload':36s} {'numpy [s]':>11s} {'cython [s]':>12s} {'speedup':>8s}")
        for label, code in WORKLOADS.items():
            t_py = time_workload(code, pure=True)
            t_cy = time_workload(code, pure=False)
            print(f"{label:36s} {t_py:11.2f} {t_cy:12.2f} {t_py / t_cy:8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
