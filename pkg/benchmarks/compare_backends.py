"""Compare the exhaustive-scan backends, and time the solver on larger inputs.

The scan enumerates every matching, so its cost explodes with size; the jit
kernel and the vectorized numpy fallback must return identical aggregates
while differing only in speed. The solver itself is polynomial and is timed
separately to show it does not share the oracle's size ceiling.

Usage:
    python benchmarks/compare_backends.py [--sizes 4,5,6,7] [--count 20]
        [--seed 1234] [--reference] [--solve-sizes 100,300,1000]
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time

from critmatch import GenParams, exhaustive_scan, random_instance, solve


def _instances(size: int, count: int, seed: int):
    for i in range(count):
        yield random_instance(GenParams(
            n_a=size, n_b=size, edge_probability=0.7, tie_density=0.4,
            critical_fraction_a=0.3, critical_fraction_b=0.3,
            seed=(seed + size * 10_000 + i) % 2**64,
        ))


def _time_backend(backend: str, instances) -> tuple[float, list]:
    results = []
    t0 = time.perf_counter()
    for inst in instances:
        results.append(exhaustive_scan(inst, backend=backend))
    return time.perf_counter() - t0, results


def run_scan_comparison(sizes: list[int], count: int, seed: int) -> None:
    print(f"scan backends, {count} instances per size")
    print(f"{'size':>6} {'matchings':>12} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    # warm the jit cache outside the timed region
    _time_backend("numba", _instances(2, 1, seed))
    for size in sizes:
        insts = list(_instances(size, count, seed))
        t_nb, res_nb = _time_backend("numba", insts)
        t_np, res_np = _time_backend("numpy", insts)
        for a, b in zip(res_nb, res_np):
            da, db = dataclasses.asdict(a), dataclasses.asdict(b)
            da.pop("backend")
            db.pop("backend")
            if da != db:
                sys.exit(f"backend mismatch at size {size}: {da} vs {db}")
        total = sum(r.total_matchings for r in res_nb)
        print(f"{size:>6} {total:>12} {1000 * t_nb / count:>10.2f} "
              f"{1000 * t_np / count:>10.2f} {t_np / t_nb:>8.1f}x")


def run_solver_timing(sizes: list[int], seed: int) -> None:
    print("\nsolver throughput (no oracle involved)")
    print(f"{'size':>6} {'edges':>9} {'proposals':>10} {'solve ms':>9}")
    for size in sizes:
        inst = random_instance(GenParams(
            n_a=size, n_b=size, edge_probability=min(1.0, 30 / size),
            tie_density=0.4, critical_fraction_a=0.2, critical_fraction_b=0.2,
            seed=seed + size,
        ))
        t0 = time.perf_counter()
        _, stats = solve(inst)
        ms = 1000 * (time.perf_counter() - t0)
        print(f"{size:>6} {len(inst.edges):>9} {stats.proposal_count:>10} {ms:>9.1f}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,5,6,7",
                    help="comma-separated per-side sizes for the scan comparison")
    ap.add_argument("--count", type=int, default=20, help="instances per size")
    ap.add_argument("--seed", type=int, default=1234)
    ap.add_argument("--solve-sizes", default="100,300,1000",
                    help="per-side sizes for the solver timing section")
    args = ap.parse_args(argv)

    sizes = [int(x) for x in args.sizes.split(",") if x]
    if any(x > 10 for x in sizes):
        ap.error("scan sizes beyond 10 per side are rejected by the size guard")
    run_scan_comparison(sizes, args.count, args.seed)
    run_solver_timing([int(x) for x in args.solve_sizes.split(",") if x], args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
