#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel in a subprocess with ANOSOV_NUMBA=1 / ANOSOV_NUMBA=0 and
reports wall times.  Usage:

    python benchmarks/bench_backends.py [--rows-n 32] [--rows-N 256] [--ulam-m 64]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, os, time
import numpy as np

from anosov import backend
from anosov.grids import GridSpec, coarse_freqs, fine_points
from anosov.operators import get_assembler
from anosov.torus import PerturbedCat
from anosov.ulam import build_ulam

cfg = json.loads(os.environ["BENCH_CONFIG"])
out = {"backend": backend.backend_name()}
m = PerturbedCat(0.01, "section7")

# twisted row blocks (operator assembly inner loop)
n, N = cfg["rows_n"], cfg["rows_N"]
asm = get_assembler(m, GridSpec(n, N))
pow1, pow2 = asm._power_tables()
w = np.ones((N, N), dtype=complex)
js = coarse_freqs(n).astype(np.int64)
block = np.empty((n, N, N), dtype=complex)
backend.twisted_rows(pow1, pow2, w, np.full(n, 1, dtype=np.int64), js, block)  # warmup/jit
t0 = time.perf_counter()
reps = cfg["rows_reps"]
for r in range(reps):
    j1 = js[r % len(js)]
    backend.twisted_rows(pow1, pow2, w, np.full(n, j1, dtype=np.int64), js, block)
out["twisted_rows_ms_per_block"] = (time.perf_counter() - t0) / reps * 1e3

# perturbed-cat image evaluation (Ulam build inner loop)
x = np.random.default_rng(0).random((2, cfg["map_points"]))
backend.perturbed_cat_images(x[0][:16], x[1][:16], 0.01, 2.0)  # warmup/jit
t0 = time.perf_counter()
backend.perturbed_cat_images(x[0], x[1], 0.01, 2.0)
out["map_images_ms"] = (time.perf_counter() - t0) * 1e3

# end-to-end Ulam build
t0 = time.perf_counter()
build_ulam(m, cfg["ulam_m"], cfg["ulam_k"])
out["ulam_build_s"] = time.perf_counter() - t0

print(json.dumps(out))
"""


def run(flag: str, cfg: dict) -> dict:
    env = dict(os.environ, ANOSOV_NUMBA=flag, BENCH_CONFIG=json.dumps(cfg))
    res = subprocess.run(
        [sys.executable, "-c", WORKER], env=env, capture_output=True, text=True
    )
    if res.returncode != 0:
        raise RuntimeError(res.stderr)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows-n", type=int, default=32)
    ap.add_argument("--rows-N", type=int, default=256)
    ap.add_argument("--rows-reps", type=int, default=8)
    ap.add_argument("--map-points", type=int, default=2_000_000)
    ap.add_argument("--ulam-m", type=int, default=64)
    ap.add_argument("--ulam-k", type=int, default=400)
    args = ap.parse_args()
    cfg = {
        "rows_n": args.rows_n,
        "rows_N": args.rows_N,
        "rows_reps": args.rows_reps,
        "map_points": args.map_points,
        "ulam_m": args.ulam_m,
        "ulam_k": args.ulam_k,
    }
    results = {flag: run(flag, cfg) for flag in ("0", "1")}
    numpy_r, numba_r = results["0"], results["1"]
    print(f"{'kernel':<28}{'numpy':>12}{'numba':>12}{'speedup':>9}")
    for key, unit in (
        ("twisted_rows_ms_per_block", "ms"),
        ("map_images_ms", "ms"),
        ("ulam_build_s", "s"),
    ):
        a, b = numpy_r[key], numba_r[key]
        print(f"{key:<28}{a:>10.2f}{unit:<2}{b:>10.2f}{unit:<2}{a / b:>8.2f}x")


if __name__ == "__main__":
    main()
