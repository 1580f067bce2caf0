"""Time the flow right-hand side: compiled kernel vs the same code uncompiled.

    python3 benchmarks/bench_rhs.py [--sizes 8 64 256] [--repeat 200]

Set ISOSTRING_DISABLE_NUMBA=1 to confirm the package runs without numba;
in that case both columns time the interpreter.
"""

import argparse
import time

import numpy as np

from isostring import _kernels
from isostring.fields import FlowSpec
from isostring.flow import flow_rhs_float
from isostring.string_core import BoundaryConditions, DIRICHLET


def random_string(n, rng):
    xs = np.sort(rng.uniform(0.02, 0.98, n))
    while np.any(np.diff(xs) <= 1e-6):
        xs = np.sort(rng.uniform(0.02, 0.98, n))
    return xs, rng.uniform(0.5, 2.0, n)


def per_call(fn, repeat):
    fn()  # warm up / compile
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 64, 256, 1024])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(1)
    bc = BoundaryConditions(DIRICHLET, 0)
    specs = {"limit": FlowSpec.limit(), "3 poles": FlowSpec.multi_pole([(0.5, 1), (2.0, 1), (5.0, 1)])}
    print(f"numba active: {_kernels.HAVE_NUMBA}")
    print(f"{'N':>6} {'flow':>8} {'numba us':>10} {'python us':>10} {'speedup':>8} {'max diff':>10}")
    for n in args.sizes:
        xs, ms = random_string(n, rng)
        for name, spec in specs.items():
            fast = lambda: flow_rhs_float(xs, ms, bc, spec)
            slow = lambda: flow_rhs_float(xs, ms, bc, spec, kernel=_kernels.omega_masses_python)
            tf = per_call(fast, args.repeat)
            ts = per_call(slow, max(1, args.repeat // 10))
            diff = max(np.max(np.abs(a - b)) for a, b in zip(fast(), slow()))
            print(f"{n:>6} {name:>8} {tf * 1e6:>10.1f} {ts * 1e6:>10.1f} {ts / tf:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
