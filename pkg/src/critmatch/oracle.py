"""Brute-force ground truth for small instances.

Everything here is exponential by design and guarded to 10 vertices per
side. The heavy lifting (enumerate every matching, classify each one) is
done by a scan kernel chosen in `backend`; `enumerate_matchings` is the
independent pure-python reference the kernels are tested against.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .backend import resolve_backend
from .model import Instance
from .verify import _as_matching, is_critical, is_rsm, max_critical_coverage

log = logging.getLogger("critmatch.oracle")

SIZE_GUARD = 10

Matching = frozenset


def _check_guard(inst: Instance) -> None:
    if inst.n_a > SIZE_GUARD or inst.n_b > SIZE_GUARD:
        raise ValueError(
            f"instance too large for exhaustive search: "
            f"{inst.n_a}x{inst.n_b} exceeds {SIZE_GUARD} per side"
        )


def enumerate_matchings(inst: Instance) -> Iterator[frozenset]:
    """Yield every matching exactly once, the empty one included.

    Canonical order: depth per A vertex, at each depth first leave the
    vertex unmatched, then try neighbours ascending.
    """
    _check_guard(inst)
    adj = inst.adj_a
    used: set[int] = set()
    chosen: list[tuple[int, int]] = []

    def rec(a: int) -> Iterator[frozenset]:
        if a == inst.n_a:
            yield frozenset(chosen)
            return
        yield from rec(a + 1)
        for b in adj[a]:
            if b in used:
                continue
            used.add(b)
            chosen.append((a, b))
            yield from rec(a + 1)
            chosen.pop()
            used.remove(b)

    yield from rec(0)


@dataclass(frozen=True)
class ScanResult:
    """Aggregates over all matchings of one instance."""

    total_matchings: int
    max_critical_coverage: int
    num_critical: int
    num_critical_rsm: int
    max_critical_rsm_size: int
    witness: tuple[tuple[int, int], ...]
    critical_a_range: tuple[int, int]
    critical_b_range: tuple[int, int]
    backend: str


@dataclass(frozen=True)
class OracleResult:
    max_critical_rsm_size: int
    witness: tuple[tuple[int, int], ...]
    num_critical_rsm: int
    per_side_critical_counts: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "max_critical_rsm_size": self.max_critical_rsm_size,
            "witness": [list(p) for p in self.witness],
            "num_critical_rsm": self.num_critical_rsm,
            "per_side_critical_counts": list(self.per_side_critical_counts),
        }


def _instance_arrays(inst: Instance):
    n_a, n_b = inst.n_a, inst.n_b
    adj_start = np.zeros(n_a + 1, dtype=np.int64)
    for a in range(n_a):
        adj_start[a + 1] = adj_start[a] + len(inst.adj_a[a])
    adj_flat = np.fromiter(
        (b for nbrs in inst.adj_a for b in nbrs), dtype=np.int64, count=int(adj_start[-1])
    )
    crit_a = np.zeros(n_a, dtype=np.uint8)
    for a in inst.critical_a:
        crit_a[a] = 1
    crit_b = np.zeros(n_b, dtype=np.uint8)
    for b in inst.critical_b:
        crit_b[b] = 1
    # 0 marks a non-edge; real ranks start at 1
    rank_a = np.zeros((n_a, n_b), dtype=np.int64)
    rank_b = np.zeros((n_a, n_b), dtype=np.int64)
    edges = inst.sorted_edges
    edges_a = np.fromiter((e[0] for e in edges), dtype=np.int64, count=len(edges))
    edges_b = np.fromiter((e[1] for e in edges), dtype=np.int64, count=len(edges))
    for a, b, ra, rb in edges:
        rank_a[a, b] = ra
        rank_b[a, b] = rb
    return n_a, n_b, adj_flat, adj_start, crit_a, crit_b, rank_a, rank_b, edges_a, edges_b


def exhaustive_scan(inst: Instance, backend: str | None = None) -> ScanResult:
    """Classify every matching and aggregate over the critical ones."""
    _check_guard(inst)
    name, scan = resolve_backend(backend)
    raw = scan(*_instance_arrays(inst))
    (total, max_cov, num_crit, num_cr_rsm, best_size, wit_row, mn_a, mx_a, mn_b, mx_b) = raw

    witness = tuple(
        sorted((a, int(b)) for a, b in enumerate(np.asarray(wit_row).tolist()) if b >= 0)
    )
    res = ScanResult(
        total_matchings=int(total),
        max_critical_coverage=int(max_cov),
        num_critical=int(num_crit),
        num_critical_rsm=int(num_cr_rsm),
        max_critical_rsm_size=int(best_size),
        witness=witness,
        critical_a_range=(int(mn_a), int(mx_a)),
        critical_b_range=(int(mn_b), int(mx_b)),
        backend=name,
    )
    # Cross-check the kernel against the independent checkers: the
    # augmenting-path optimum must agree with the brute-force maximum, and
    # the witness must survive the verify module's own classification.
    assert max_critical_coverage(inst) == res.max_critical_coverage, (
        "coverage optimum disagrees with brute force"
    )
    assert res.num_critical_rsm >= 1, "no critical relaxed stable matching found"
    assert len(witness) == res.max_critical_rsm_size
    assert is_rsm(inst, witness)[0], "scan witness rejected by is_rsm"
    assert is_critical(inst, witness), "scan witness rejected by is_critical"
    if log.isEnabledFor(logging.DEBUG):
        log.debug(
            "scan[%s] %dx%d: %d matchings, %d critical, %d critical-rsm, best %d",
            name, inst.n_a, inst.n_b, res.total_matchings, res.num_critical,
            res.num_critical_rsm, res.max_critical_rsm_size,
        )
    return res


def max_critical_rsm(inst: Instance, backend: str | None = None) -> OracleResult:
    """Maximum-size critical relaxed stable matching, by exhaustion."""
    res = exhaustive_scan(inst, backend=backend)
    lo_a, hi_a = res.critical_a_range
    lo_b, hi_b = res.critical_b_range
    # every critical matching covers the same number per side
    assert lo_a == hi_a and lo_b == hi_b, (
        f"critical matchings disagree on per-side counts: "
        f"A {lo_a}..{hi_a}, B {lo_b}..{hi_b}"
    )
    return OracleResult(
        max_critical_rsm_size=res.max_critical_rsm_size,
        witness=res.witness,
        num_critical_rsm=res.num_critical_rsm,
        per_side_critical_counts=(lo_a, lo_b),
    )


class PopularityVerdict(Enum):
    FIRST = "first"
    SECOND = "second"
    TIE = "tie"


def more_popular(inst: Instance, first: Iterable, second: Iterable) -> PopularityVerdict:
    """Head-to-head vote between two matchings.

    Each vertex compares its two partners by its own ranks; being unmatched
    loses to any partner, equal ranks (or the same partner) abstain.
    """
    m1 = _as_matching(inst, first)
    m2 = _as_matching(inst, second)
    r1 = {b: a for a, b in m1.items()}
    r2 = {b: a for a, b in m2.items()}

    def vote(rank_of, p1, p2) -> int:
        if p1 == p2:
            return 0
        if p1 is None:
            return -1
        if p2 is None:
            return 1
        k1, k2 = rank_of(p1), rank_of(p2)
        if k1 == k2:
            return 0
        return 1 if k1 < k2 else -1

    score = 0
    for a in range(inst.n_a):
        score += vote(lambda b: inst.rank_at_a(a, b), m1.get(a), m2.get(a))
    for b in range(inst.n_b):
        score += vote(lambda a: inst.rank_at_b(a, b), r1.get(b), r2.get(b))
    if score > 0:
        return PopularityVerdict.FIRST
    if score < 0:
        return PopularityVerdict.SECOND
    return PopularityVerdict.TIE


def meets_two_thirds(found_size: int, optimum_size: int) -> bool:
    """Exact integer form of the 2/3 size guarantee."""
    return 3 * found_size >= 2 * optimum_size
