"""Benchmark the two-mode group-update kernel: compiled extension vs the
pure-numpy fallback, on the workload the twelve-port network produces.

Run as: python3 benchmarks/bench_kernels.py [--cap N] [--repeats K]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from su3optics import FockSpace
from su3optics import _fallback
from su3optics.kernels import block_tables, pair_plan
from su3optics.network import BS_CONVENTIONS

try:
    from su3optics import _speedups
except ImportError:
    _speedups = None

TWELVE_PORT_PAIRS = ((0, 3), (1, 4), (2, 5), (0, 1), (3, 2), (4, 5))


def sweep(impl, psi, plans, tables):
    for plan in plans:
        out = np.empty_like(psi)
        for m, idx in enumerate(plan):
            if idx.size:
                impl.apply_groups(out, psi, idx, tables[m])
        psi = out
    return psi


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cap", type=int, default=14,
                        help="total photon cap of the six-mode space")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    space = FockSpace(6, args.cap, total_photon_cap=args.cap)
    plans = [pair_plan(space, p, q) for p, q in TWELVE_PORT_PAIRS]
    tables = [np.ascontiguousarray(t) for t in
              block_tables(BS_CONVENTIONS["reflect-i"], args.cap)]
    rng = np.random.default_rng(7)
    psi = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    psi /= np.linalg.norm(psi)

    print(f"six-mode space, cap {args.cap}: dim {space.dim}, "
          f"{len(plans)} beam splitters per pass")

    results = {}
    impls = [("python", _fallback)]
    if _speedups is not None:
        impls.append(("compiled", _speedups))
    else:
        print("compiled extension not built; timing the fallback only")

    outputs = {}
    for name, impl in impls:
        sweep(impl, psi, plans, tables)  # warm-up
        best = float("inf")
        for _ in range(args.repeats):
            start = time.perf_counter()
            outputs[name] = sweep(impl, psi, plans, tables)
            best = min(best, time.perf_counter() - start)
        results[name] = best
        print(f"{name:>9}: {best * 1e3:8.2f} ms per pass")

    if len(outputs) == 2:
        gap = np.max(np.abs(outputs["python"] - outputs["compiled"]))
        print(f"max |python - compiled| = {gap:.3e}")
        print(f"speedup: {results['python'] / results['compiled']:.2f}x")


if __name__ == "__main__":
    main()
