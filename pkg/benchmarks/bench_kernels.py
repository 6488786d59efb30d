"""Compare the compiled and pure-Python kernels.

Micro: ``mul_terms`` on random dense operands, both backends in this process.
Macro: end-to-end workloads in fresh subprocesses, once per backend
(``FGLSCHUR_PURE_PYTHON=1`` selects the fallback).

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from gmpy2 import mpq

from fglschur import _pykernels
from fglschur.series import TruncatedSeries, x

try:
    from fglschur import _ckernels
except ImportError:  # extension not built
    _ckernels = None

MACRO = {
    "schur_Q universal (3,2,1) n=3 D=8": (
        "from fglschur.schur import schur_Q; from fglschur.fgl import UNIVERSAL; "
        "schur_Q((3,2,1), 3, UNIVERSAL, True, 8)"
    ),
    "extract_duals k-theory n_x=n_y=4 D=5": (
        "from fglschur.dual import extract_duals; from fglschur.fgl import K_THEORY; "
        "extract_duals(4, 4, K_THEORY, 'Q_with_phat', True, 5, enforce_stable=False)"
    ),
    "exact duals beta=-1 max_size=4": (
        "from fglschur.dual import exact_duals; from fglschur.fgl import FormalGroupLaw; "
        "exact_duals(FormalGroupLaw.multiplicative(-1), 'P_with_qhat', 4, 4)"
    ),
}


def random_operand(rng, nvars, degree, nterms, cutoff, big=False):
    out = {}
    while len(out) < nterms:
        exps = {}
        for _ in range(rng.randint(0, degree)):
            v = x(rng.randint(1, nvars))
            exps[v] = exps.get(v, 0) + 1
        c = rng.randint(-(10**30), 10**30) if big else rng.randint(-9, 9)
        if c:
            out[exps and tuple(sorted(exps.items())) or ()] = mpq(c, rng.choice([1, 2, 3]))
    return TruncatedSeries(((dict(k), c) for k, c in out.items()), cutoff).raw_terms


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def micro(repeat):
    rng = random.Random(1)
    rows = []
    for label, nvars, deg, nterms, big in (
        ("small 40x40", 4, 4, 40, False),
        ("medium 300x300", 6, 6, 300, False),
        ("large 1500x1500", 8, 7, 1500, False),
        ("big coefficients 300x300", 6, 6, 300, True),
    ):
        cutoff = 12
        a = random_operand(rng, nvars, deg, nterms, cutoff, big)
        b = random_operand(rng, nvars, deg, nterms, cutoff, big)
        tp = time_call(lambda: _pykernels.mul_terms(a, b, cutoff, 0), repeat)
        if _ckernels is not None:
            assert _ckernels.mul_terms(a, b, cutoff, 0) == _pykernels.mul_terms(a, b, cutoff, 0)
            tc = time_call(lambda: _ckernels.mul_terms(a, b, cutoff, 0), repeat)
        else:
            tc = float("nan")
        rows.append((label, tp, tc))
    return rows


def macro(repeat):
    rows = []
    for label, code in MACRO.items():
        times = {}
        for backend, env in (("python", "1"), ("cython", "0")):
            e = dict(os.environ, FGLSCHUR_PURE_PYTHON=env)
            best = float("inf")
            for _ in range(repeat):
                script = f"import time; t=time.perf_counter(); {code}; print(time.perf_counter()-t)"
                out = subprocess.run([sys.executable, "-c", script], env=e, capture_output=True, text=True, check=True)
                best = min(best, float(out.stdout.strip()))
            times[backend] = best
        rows.append((label, times["python"], times["cython"]))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-macro", action="store_true")
    args = ap.parse_args(argv)
    print(f"{'case':42s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    rows = micro(args.repeat)
    if not args.skip_macro:
        rows += macro(args.repeat)
    for label, tp, tc in rows:
        print(f"{label:42s} {tp:10.4f} {tc:10.4f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
