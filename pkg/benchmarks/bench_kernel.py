"""Compiled vs pure-Python residue kernel.

    python benchmarks/bench_kernel.py [--n 2000] [--at 1e6 1e8 1e10]

For each magnitude, draws n members of D just above it, times both
implementations on the same list and checks that the results agree.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from eisenstein import kernel
from eisenstein.sieve import sieve_segment


def sample(at: int, n: int) -> np.ndarray:
    ds = sieve_segment(at, at + 16 * n).D
    return ds[:n]


def timed(ds: np.ndarray, impl: str, backend: str) -> tuple[float, dict]:
    t = time.perf_counter()
    out = kernel.batch_residues(ds, backend, impl=impl)
    return time.perf_counter() - t, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--at", type=float, nargs="+", default=[1e6, 1e8, 1e10])
    ap.add_argument("--backend", choices=["exact", "bloom"], default="exact")
    args = ap.parse_args()

    impls = kernel.available_impls()
    if "c" not in impls:
        print("compiled kernel not built; only the Python timing is shown")
    print(f"{'d near':>8} {'n':>6} " + " ".join(f"{i + ' us/d':>12}" for i in impls) + "  speedup  agree")
    for at in args.at:
        ds = sample(int(at), args.n)
        times, outs = {}, {}
        for impl in impls:
            times[impl], outs[impl] = timed(ds, impl, args.backend)
        per = " ".join(f"{1e6 * times[i] / len(ds):12.2f}" for i in impls)
        if len(impls) == 2:
            agree = all(np.array_equal(outs["c"][k], outs["python"][k])
                        for k in ("residue", "method", "baby_steps", "giant_steps"))
            speed = f"{times['python'] / times['c']:7.1f}x"
        else:
            agree, speed = "-", "      -"
        print(f"{at:8.0e} {len(ds):6d} {per}  {speed}  {agree}")


if __name__ == "__main__":
    main()
