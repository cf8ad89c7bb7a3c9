"""Seeded random instances for property suites and ratio sweeps.

Draws are counter-based: every coin is a pure function of
(seed, purpose, i, j) through a 64-bit mixer, so instances are reproducible
across platforms and processes with no RNG state to carry around. Growing
n_a or n_b under the same seed preserves every existing pair's scores: the
strict part of each preference order never reshuffles, only ties may split
where new neighbours land between old ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance, make_instance, validate

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

# purpose tags keep the coin streams disjoint
_TAG_EXISTS = 1
_TAG_SCORE_A = 2
_TAG_SCORE_B = 3
_TAG_TIE_A = 4
_TAG_TIE_B = 5
_TAG_CRIT_A = 6
_TAG_CRIT_B = 7


@dataclass(frozen=True)
class GenParams:
    n_a: int
    n_b: int
    edge_probability: float
    tie_density: float
    critical_fraction_a: float
    critical_fraction_b: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_a < 0 or self.n_b < 0:
            raise ValueError("vertex counts must be non-negative")
        for name in ("edge_probability", "tie_density",
                     "critical_fraction_a", "critical_fraction_b"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        # seeds are used modulo 2^64
        object.__setattr__(self, "seed", self.seed & (2**64 - 1))


def _mix(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * _MIX_1
        x = (x ^ (x >> np.uint64(27))) * _MIX_2
        return x ^ (x >> np.uint64(31))


def _stream(seed: int, tag: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """64-bit words keyed by (seed, tag, i, j); shapes broadcast."""
    with np.errstate(over="ignore"):
        x = np.uint64(seed) ^ _mix(np.uint64(tag) * _GOLDEN + _GOLDEN)
        x = _mix(x + _GOLDEN * (i.astype(np.uint64) + np.uint64(1)))
        x = _mix(x + _GOLDEN * (j.astype(np.uint64) + np.uint64(1)))
    return x


def _uniform(seed: int, tag: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Uniform floats in [0, 1) from the keyed stream."""
    return (_stream(seed, tag, i, j) >> np.uint64(11)) * 2.0**-53


def _ranks_for(order: list[int], merge: np.ndarray, density: float) -> dict[int, int]:
    """Walk neighbours in preference order, merging ranks at the tie rate."""
    ranks: dict[int, int] = {}
    rank = 0
    for pos, v in enumerate(order):
        if pos == 0 or merge[v] >= density:
            rank += 1
        ranks[v] = rank
    return ranks


def random_instance(params: GenParams) -> Instance:
    n_a, n_b, seed = params.n_a, params.n_b, params.seed
    ii = np.arange(max(n_a, 1), dtype=np.uint64)[:, None]
    jj = np.arange(max(n_b, 1), dtype=np.uint64)[None, :]

    edges: list[tuple[int, int, int, int]] = []
    if n_a > 0 and n_b > 0:
        exists = _uniform(seed, _TAG_EXISTS, ii, jj) < params.edge_probability
        score_a = _stream(seed, _TAG_SCORE_A, ii, jj)
        score_b = _stream(seed, _TAG_SCORE_B, ii, jj)
        tie_a = _uniform(seed, _TAG_TIE_A, ii, jj)
        tie_b = _uniform(seed, _TAG_TIE_B, ii, jj)

        rank_a: list[dict[int, int]] = []
        for a in range(n_a):
            nbrs = [b for b in range(n_b) if exists[a, b]]
            nbrs.sort(key=lambda b: (int(score_a[a, b]), b))
            rank_a.append(_ranks_for(nbrs, tie_a[a], params.tie_density))
        rank_b: list[dict[int, int]] = []
        for b in range(n_b):
            nbrs = [a for a in range(n_a) if exists[a, b]]
            nbrs.sort(key=lambda a: (int(score_b[a, b]), a))
            rank_b.append(_ranks_for(nbrs, tie_b[:, b], params.tie_density))

        for a in range(n_a):
            for b, ra in sorted(rank_a[a].items()):
                edges.append((a, b, ra, rank_b[b][a]))

    zero = np.zeros(1, dtype=np.uint64)
    crit_a = [
        a for a in range(n_a)
        if _uniform(seed, _TAG_CRIT_A, ii[a], zero)[0] < params.critical_fraction_a
    ]
    crit_b = [
        b for b in range(n_b)
        if _uniform(seed, _TAG_CRIT_B, jj[:, b], zero)[0] < params.critical_fraction_b
    ]

    inst = make_instance(n_a, n_b, edges, crit_a, crit_b)
    check = validate(inst)
    assert check.ok, f"generator produced an invalid instance: {check.violations}"
    return inst
