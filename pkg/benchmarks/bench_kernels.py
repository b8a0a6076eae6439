#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy reference backend.

Kernel-level timings run both implementations in-process; the end-to-end
pencil-condition check is timed in subprocesses so each run selects its
backend at import (GAMMA_INTERP_BACKEND).

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from symbidisc import _kernels
from symbidisc._kernels import _pyref

E2E_SNIPPET = """
import time
from symbidisc import families as fam, KERNEL_BACKEND
from symbidisc.cnu import check_cnu
data = fam.sample_data(fam.h_nu(1, 0.5), (0.2, -0.3+0.25j, 0.45j))
t0 = time.perf_counter()
rep = check_cnu(data, 1)
dt = time.perf_counter() - t0
print(f"{KERNEL_BACKEND} {dt:.3f} {rep.evaluations}")
"""


def kernel_rows(repeat):
    rng = np.random.default_rng(1)
    n = 4
    lam = rng.uniform(0.1, 0.7, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    z = rng.uniform(0, 0.9, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    w = rng.uniform(0, 0.9, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    s, p = z + w, z * w
    zeros = rng.uniform(0, 0.9, 2) * np.exp(2j * np.pi * rng.uniform(size=2))
    gram = 1.0 / (1.0 - np.outer(lam, np.conj(lam)))
    chol = np.linalg.cholesky(gram)
    lh = np.ascontiguousarray(chol.conj().T)
    linvh = np.ascontiguousarray(np.linalg.inv(lh))
    herm = random_hermitian(rng, 6)

    cases = [
        ("blaschke_values (deg 2, 4 pts)",
         lambda k: k.blaschke_values(0.3, zeros, lam)),
        ("hermitian_eigvals (6x6)",
         lambda k: k.hermitian_eigvals(herm)),
        ("xnorm_eval (n=4, deg 2)",
         lambda k: k.xnorm_eval(0.3, zeros, lam, s, p, lh, linvh)),
        ("pencil_min_eig (n=4, deg 2)",
         lambda k: k.pencil_min_eig(0.3, zeros, lam, s, p)),
    ]
    rows = []
    for name, fn in cases:
        if _kernels.BACKEND == "compiled":
            tc = timeit.timeit(lambda: fn(_kernels), number=repeat) / repeat
        else:
            tc = None
        tp = timeit.timeit(lambda: fn(_pyref), number=max(repeat // 10, 100)) \
            / max(repeat // 10, 100)
        rows.append((name, tc, tp))
    return rows


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def run_e2e(backend):
    env = dict(os.environ, GAMMA_INTERP_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", E2E_SNIPPET],
                         capture_output=True, text=True, env=env, check=True)
    name, dt, evals = out.stdout.split()
    return float(dt), int(evals)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    repeat = 2000 if args.quick else 20000

    print(f"active backend: {_kernels.BACKEND}")
    print()
    print(f"{'kernel':36s} {'compiled':>12s} {'python':>12s} {'speedup':>9s}")
    for name, tc, tp in kernel_rows(repeat):
        ctxt = f"{tc * 1e6:9.2f} us" if tc is not None else "        n/a"
        stxt = f"{tp / tc:8.1f}x" if tc else "      n/a"
        print(f"{name:36s} {ctxt:>12s} {tp * 1e6:9.2f} us {stxt:>9s}")

    print()
    print("end-to-end degree-1 condition check (subprocess per backend):")
    for backend in ("compiled", "python"):
        try:
            dt, evals = run_e2e(backend)
        except subprocess.CalledProcessError as exc:
            print(f"  {backend:9s} unavailable: {exc.stderr.strip().splitlines()[-1]}")
            continue
        print(f"  {backend:9s} {dt:7.3f} s   ({evals} evaluations)")


if __name__ == "__main__":
    main()
