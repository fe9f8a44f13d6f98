"""Compiled versus NumPy kernels, plus one end-to-end learning run per backend.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from fuzzyols import kernels
from fuzzyols.ols import TIE_TOL

ROOT = Path(__file__).resolve().parents[1]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    values = rng.normal(size=20000)
    init = np.linspace(values.min(), values.max(), 7)
    yield "kmeans_lloyd n=20000 k=7", "kmeans_lloyd", (values, init, 1000)

    n, r = 400, 150
    w = rng.random((n, r)) ** 4
    P = w / w.sum(axis=1, keepdims=True)
    y = rng.normal(size=n) + 5.0
    yield f"mgs_select n={n} r={r}", "mgs_select", (P, y, 0.0, -1, 1e-10, TIE_TOL)

    n, q = 5000, 6
    lo = rng.integers(0, 4, size=(n, q)).astype(np.int64)
    mu_hi = rng.random((n, q))
    mu_lo = 1.0 - mu_hi
    strides = (5 ** np.arange(q - 1, -1, -1)).astype(np.int64)
    yield f"fired_premises n={n} q={q}", "fired_premises", (lo, mu_lo, mu_hi, strides, False, 0.0)


def end_to_end(backend):
    env = dict(os.environ)
    env.pop("FUZZYOLS_PURE_PYTHON", None)
    if backend == "python":
        env["FUZZYOLS_PURE_PYTHON"] = "1"
    code = (
        "import time; from fuzzyols import load_csv, learn, PipelineConfig, BACKEND;"
        f"d = load_csv(r'{ROOT / 'data' / 'auto_mpg.csv'}');"
        "t = time.perf_counter(); learn(d, PipelineConfig(iter_max=7)); print(BACKEND, time.perf_counter() - t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, secs = out.stdout.split()
    return name, float(secs)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the NumPy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for label, name, a in cases(rng):
        t = {b: _best(lambda m=m: getattr(m, name)(*a), args.repeat) for b, m in backends.items()}
        speed = t["python"] / t["cython"] if "cython" in t else 1.0
        print(f"{label:32s} " + " ".join(f"{t[b] * 1e3:8.2f}ms" for b in backends) + f"   {speed:6.1f}x")
    for b in backends:
        name, secs = end_to_end(b)
        print(f"learn auto_mpg iter_max=7 [{name}]: {secs:.2f}s")


if __name__ == "__main__":
    main()
