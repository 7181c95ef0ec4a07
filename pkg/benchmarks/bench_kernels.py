"""Compiled vs numpy kernels on the workloads the package actually runs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from gensqueeze import _kernels_py
from gensqueeze.wehrl import _gh_rule

try:
    from gensqueeze import _kernels
except ImportError:
    _kernels = None


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def rk4_case(sectors=49, width=25, columns=25, steps=256):
    rng = np.random.default_rng(1)
    w = np.sqrt(rng.integers(0, 625, size=(sectors, width))).astype(float)
    y0 = (rng.normal(size=(sectors, width, columns)) + 1j * rng.normal(size=(sectors, width, columns)))
    args = (w, y0, 0.3 + 0.1j, 0.05, 1.0, steps)
    return f"rk4 {sectors}x{width}x{columns} steps={steps}", args


def gh_case(order=40, dims=4):
    nodes, logw = _gh_rule(order)
    rng = np.random.default_rng(2)
    a = rng.normal(size=(dims, dims))
    q = 0.5 * np.eye(dims) + 0.05 * (a + a.T)
    args = (nodes, logw, q, rng.normal(scale=0.1, size=dims), -0.3)
    return f"gh order={order} dims={dims}", args


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'kernel':32s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s} {'max diff':>10s}")
    for name, case in (("rk4_sector_chain", rk4_case()), ("gh_log_quadratic", gh_case())):
        label, cargs = case
        tp, outp = _best(lambda: getattr(_kernels_py, name)(*cargs), args.repeat)
        if _kernels is None:
            print(f"{label:32s} {tp:11.3f} {'-':>13s} {'-':>8s} {'-':>10s}")
            continue
        tc, outc = _best(lambda: getattr(_kernels, name)(*cargs), args.repeat)
        diff = float(np.max(np.abs(np.asarray(outp) - np.asarray(outc))))
        print(f"{label:32s} {tp:11.3f} {tc:13.3f} {tp / tc:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
