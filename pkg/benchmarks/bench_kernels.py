"""Compiled vs numpy kernels: agreement and wall time.

    python3 benchmarks/bench_kernels.py [--grid 101] [--repeat 3]
"""
import argparse
import time

import numpy as np

from kerrqd import _kernels_py
from kerrqd.states import TruncationPolicy, coherent_state, squeezed_vacuum_state

try:
    from kerrqd import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    xs = np.linspace(-8, 8, args.grid)
    X, P = np.meshgrid(xs, xs)
    x, p = X.ravel(), P.ravel()
    states = {
        "coherent alpha=4": coherent_state(4.0),
        "squeezed R=4": squeezed_vacuum_state(4.0, TruncationPolicy(tail_eps=1e-12)),
    }
    backends = {"numpy": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled kernels not built; numpy only")

    print(f"{'case':24s} {'dim':>5s} " + " ".join(f"{b:>10s}" for b in backends) + "   max|diff|")
    for name, st in states.items():
        a = np.asarray(st.amps)
        rho = np.outer(a, a.conj())
        times, outs = [], []
        for mod in backends.values():
            dt, out = best_of(lambda: mod.wigner_points(rho, x, p, args.threads), args.repeat)
            times.append(dt)
            outs.append(out)
        diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
        print(f"{'wigner ' + name:24s} {st.dim:5d} " + " ".join(f"{t:9.3f}s" for t in times) + f"   {diff:.1e}")

    nmax = 400
    xh = np.linspace(-30, 30, 4001)
    times, outs = [], []
    for mod in backends.values():
        dt, out = best_of(lambda: mod.hermite_functions(nmax, xh), args.repeat)
        times.append(dt)
        outs.append(out)
    diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
    print(f"{'hermite n<=400':24s} {nmax:5d} " + " ".join(f"{t:9.3f}s" for t in times) + f"   {diff:.1e}")


if __name__ == "__main__":
    main()
