"""Independent checkers: blocking pairs, relaxed stability, criticality,
and the level-structure audit of solver output.

Nothing here shares logic with the solver.  Matchings are accepted as plain
pair collections; leveled matchings as (a, b, level) triples where the level
is either an integer code or any object with a ``code`` attribute.

A blocking pair is an edge outside the matching whose endpoints both
strictly prefer each other over their current situation (being unmatched is
worse than any partner, and ties do not block).  It is justified when at
least one endpoint's partner is critical.  A matching is relaxed stable when
every blocking pair is justified, and critical when it matches as many
critical vertices as any matching can.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Instance

__all__ = [
    "BlockingPair",
    "LevelPartition",
    "StructureReport",
    "VerificationReport",
    "blocking_pairs",
    "is_rsm",
    "max_critical_coverage",
    "critical_coverage",
    "is_critical",
    "build_level_partition",
    "check_structure",
    "verification_report",
]


@dataclass(frozen=True)
class BlockingPair:
    """One blocking pair with its two justification flags.

    ``justified_by_a`` records that a's partner is critical, and
    ``justified_by_b`` that b's partner is.
    """

    a: int
    b: int
    justified_by_a: bool
    justified_by_b: bool

    @property
    def justified(self) -> bool:
        return self.justified_by_a or self.justified_by_b


@dataclass(frozen=True)
class LevelPartition:
    """Bucket per vertex, derived from acceptance levels.

    Matched pairs land in the bucket of their acceptance level (the second
    tie pass collapses onto t).  Unmatched vertices go to fixed buckets:
    critical A to s+t, non-critical A to t, critical B to 0, non-critical
    B to t.
    """

    a_part: tuple[int, ...]
    b_part: tuple[int, ...]


@dataclass(frozen=True)
class StructureReport:
    """Violation lists from the structure audit; all empty means pass."""

    property1_violations: tuple[str, ...]
    steep_downward_edges: tuple[tuple[int, int], ...]
    non_upward_blocking_pairs: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not (
            self.property1_violations
            or self.steep_downward_edges
            or self.non_upward_blocking_pairs
        )

    def to_dict(self) -> dict:
        return {
            "property1_violations": list(self.property1_violations),
            "steep_downward_edges": [list(e) for e in self.steep_downward_edges],
            "non_upward_blocking_pairs": [list(e) for e in self.non_upward_blocking_pairs],
            "ok": self.ok,
        }


def _as_matching(inst: Instance, matching: Iterable) -> dict[int, int]:
    """Validate and normalize to a dict a -> b.

    Raises ValueError when a pair is not an edge or endpoints repeat.
    """
    match_a: dict[int, int] = {}
    seen_b: set[int] = set()
    for pair in matching:
        a, b = pair[0], pair[1]
        if not inst.has_edge(a, b):
            raise ValueError(f"pair ({a},{b}) is not an edge of the instance")
        if a in match_a or b in seen_b:
            raise ValueError(f"pair ({a},{b}) shares an endpoint with another pair")
        match_a[a] = b
        seen_b.add(b)
    return match_a


def blocking_pairs(inst: Instance, matching: Iterable) -> list[BlockingPair]:
    """All blocking pairs of ``matching``, each with justification flags.

    Parameters
    ----------
    matching : iterable of (a, b)
        Must be a matching over the instance's edges.

    Returns
    -------
    list of BlockingPair, sorted by (a, b).
    """
    match_a = _as_matching(inst, matching)
    match_b = {b: a for a, b in match_a.items()}
    out: list[BlockingPair] = []
    for a, b, ra, rb in inst.sorted_edges:
        if match_a.get(a) == b:
            continue
        pa = match_a.get(a)
        if pa is not None and inst.rank_at_a(a, pa) <= ra:
            continue
        qb = match_b.get(b)
        if qb is not None and inst.rank_at_b(qb, b) <= rb:
            continue
        out.append(
            BlockingPair(
                a=a,
                b=b,
                justified_by_a=pa is not None and pa in inst.critical_b,
                justified_by_b=qb is not None and qb in inst.critical_a,
            )
        )
    return out


def is_rsm(inst: Instance, matching: Iterable) -> tuple[bool, list[BlockingPair]]:
    """Relaxed stability check.

    Returns
    -------
    (ok, unjustified)
        ``ok`` is True iff every blocking pair is justified by one of its
        endpoints' partners being critical; ``unjustified`` lists the
        offenders.
    """
    unjustified = [bp for bp in blocking_pairs(inst, matching) if not bp.justified]
    return not unjustified, unjustified


def critical_coverage(inst: Instance, matching: Iterable) -> int:
    """Number of critical vertices matched by ``matching``."""
    match_a = _as_matching(inst, matching)
    cov = sum(1 for a in match_a if a in inst.critical_a)
    cov += sum(1 for b in match_a.values() if b in inst.critical_b)
    return cov


def _try_augment(
    adj: Sequence[Sequence[int]],
    match_a: list[int],
    match_b: list[int],
    start: int,
    targets: frozenset[int] | None,
) -> bool:
    """Search one alternating path from unmatched ``start`` to an unmatched
    target b and flip it.  ``targets=None`` accepts any unmatched b."""
    reach_a: dict[int, int] = {}
    prev_b: dict[int, int | None] = {start: None}
    stack = [start]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b in reach_a:
                continue
            reach_a[b] = a
            partner = match_b[b]
            if partner < 0:
                if targets is not None and b not in targets:
                    continue
                cur = b
                while True:
                    winner = reach_a[cur]
                    released = prev_b[winner]
                    match_b[cur] = winner
                    match_a[winner] = cur
                    if released is None:
                        return True
                    cur = released
            elif partner not in prev_b:
                prev_b[partner] = b
                stack.append(partner)
    return False


def max_critical_coverage(inst: Instance) -> int:
    """Largest number of critical vertices any matching can cover.

    Exact.  Treats coverage as a maximum-weight matching problem with edge
    weight = number of critical endpoints (0, 1 or 2) and grows the matching
    by augmenting paths in two rounds: first paths joining an unmatched
    critical A to an unmatched critical B (gain 2), then paths gaining a
    single critical endpoint.  Because weights sit on vertices, alternating
    cycles and even paths cannot change coverage, so path augmentation
    suffices; the end state is asserted gain-free before returning.
    """
    n_a, n_b = inst.n_a, inst.n_b
    adj = inst.adj_a
    match_a = [-1] * n_a
    match_b = [-1] * n_b
    crit_a = sorted(inst.critical_a)
    crit_b_set = frozenset(inst.critical_b)

    progress = True
    while progress:
        progress = False
        for a in crit_a:
            if match_a[a] < 0 and _try_augment(adj, match_a, match_b, a, crit_b_set):
                progress = True

    progress = True
    while progress:
        progress = False
        for a in crit_a:
            if match_a[a] < 0 and _try_augment(adj, match_a, match_b, a, None):
                progress = True
        for a in range(n_a):
            if match_a[a] < 0 and _try_augment(adj, match_a, match_b, a, crit_b_set):
                progress = True

    # end-state audit: no single augmentation may gain coverage
    for a in range(n_a):
        if match_a[a] >= 0:
            continue
        targets = None if a in inst.critical_a else crit_b_set
        ma, mb = list(match_a), list(match_b)
        assert not _try_augment(adj, ma, mb, a, targets), "coverage not maximal"

    cov = sum(1 for a in inst.critical_a if match_a[a] >= 0)
    cov += sum(1 for b in inst.critical_b if match_b[b] >= 0)
    return cov


def is_critical(inst: Instance, matching: Iterable) -> bool:
    """True iff the matching covers as many critical vertices as possible."""
    return critical_coverage(inst, matching) == max_critical_coverage(inst)


def _level_code(level) -> int:
    return getattr(level, "code", level)


def build_level_partition(inst: Instance, leveled) -> LevelPartition:
    """Bucket every vertex from a leveled matching.

    Parameters
    ----------
    leveled : LeveledMatching or iterable of (a, b, level)
        Levels as integer codes or objects with a ``code`` attribute.
    """
    pairs = getattr(leveled, "pairs", leveled)
    s, t = inst.s, inst.t
    a_part = [None] * inst.n_a
    b_part = [None] * inst.n_b
    for a, b, lv in pairs:
        if not (0 <= a < inst.n_a and 0 <= b < inst.n_b):
            raise ValueError(f"pair ({a},{b}) references unknown vertices")
        bucket = _level_code(lv) // 2
        a_part[a] = bucket
        b_part[b] = bucket
    for a in range(inst.n_a):
        if a_part[a] is None:
            a_part[a] = s + t if a in inst.critical_a else t
    for b in range(inst.n_b):
        if b_part[b] is None:
            b_part[b] = 0 if b in inst.critical_b else t
    return LevelPartition(a_part=tuple(a_part), b_part=tuple(b_part))


def check_structure(inst: Instance, leveled) -> StructureReport:
    """Audit the level structure of a solver run.

    Checks the six partition properties, that no edge drops more than one
    bucket from the A side to the B side, and that every blocking pair
    points strictly upward in buckets.  The six partition properties:

    1. A vertices in buckets t+1 .. s+t are critical.
    2. B vertices in buckets 0 .. t-1 are critical.
    3. An unmatched critical A vertex sits in bucket s+t and all its
       neighbours are matched, in bucket s+t.
    4. An unmatched non-critical A vertex sits in bucket t and all its
       neighbours are matched, in buckets >= t.
    5. An unmatched critical B vertex sits in bucket 0 and all its
       neighbours sit in bucket 0.
    6. An unmatched non-critical B vertex sits in bucket t and all its
       neighbours sit in buckets <= t.
    """
    pairs = list(getattr(leveled, "pairs", leveled))
    part = build_level_partition(inst, pairs)
    s, t = inst.s, inst.t
    matched_a = {p[0] for p in pairs}
    matched_b = {p[1] for p in pairs}
    p1: list[str] = []

    for a in range(inst.n_a):
        if part.a_part[a] > t and a not in inst.critical_a:
            p1.append(f"item1: non-critical a{a} in bucket {part.a_part[a]} > t")
    for b in range(inst.n_b):
        if part.b_part[b] < t and b not in inst.critical_b:
            p1.append(f"item2: non-critical b{b} in bucket {part.b_part[b]} < t")
    for a in range(inst.n_a):
        if a in matched_a:
            continue
        if a in inst.critical_a:
            if part.a_part[a] != s + t:
                p1.append(f"item3: unmatched critical a{a} not in bucket s+t")
            for b in inst.adj_a[a]:
                if b not in matched_b:
                    p1.append(f"item3: neighbour b{b} of unmatched critical a{a} is unmatched")
                elif part.b_part[b] != s + t:
                    p1.append(f"item3: neighbour b{b} of unmatched critical a{a} in bucket {part.b_part[b]} != s+t")
        else:
            if part.a_part[a] != t:
                p1.append(f"item4: unmatched non-critical a{a} not in bucket t")
            for b in inst.adj_a[a]:
                if b not in matched_b:
                    p1.append(f"item4: neighbour b{b} of unmatched a{a} is unmatched")
                elif part.b_part[b] < t:
                    p1.append(f"item4: neighbour b{b} of unmatched a{a} in bucket {part.b_part[b]} < t")
    for b in range(inst.n_b):
        if b in matched_b:
            continue
        if b in inst.critical_b:
            if part.b_part[b] != 0:
                p1.append(f"item5: unmatched critical b{b} not in bucket 0")
            for a in inst.adj_b[b]:
                if part.a_part[a] != 0:
                    p1.append(f"item5: neighbour a{a} of unmatched critical b{b} in bucket {part.a_part[a]} != 0")
        else:
            if part.b_part[b] != t:
                p1.append(f"item6: unmatched non-critical b{b} not in bucket t")
            for a in inst.adj_b[b]:
                if part.a_part[a] > t:
                    p1.append(f"item6: neighbour a{a} of unmatched b{b} in bucket {part.a_part[a]} > t")

    steep = [
        (a, b)
        for a, b, _, _ in inst.sorted_edges
        if part.a_part[a] > part.b_part[b] + 1
    ]
    non_upward = [
        (bp.a, bp.b)
        for bp in blocking_pairs(inst, [(a, b) for a, b, _ in pairs])
        if part.a_part[bp.a] >= part.b_part[bp.b]
    ]
    return StructureReport(
        property1_violations=tuple(p1),
        steep_downward_edges=tuple(steep),
        non_upward_blocking_pairs=tuple(non_upward),
    )


@dataclass(frozen=True)
class VerificationReport:
    """Full verdict on one matching; serializable via ``to_dict``."""

    is_matching: bool
    blocking_pairs: tuple[BlockingPair, ...] = ()
    unjustified: tuple[tuple[int, int], ...] = ()
    is_rsm: bool = False
    critical_covered: int = 0
    max_critical_coverage: int = 0
    is_critical: bool = False
    structure_report: StructureReport | None = None

    @property
    def ok(self) -> bool:
        return self.is_matching and self.is_rsm and self.is_critical

    def to_dict(self) -> dict:
        return {
            "is_matching": self.is_matching,
            "blocking_pairs": [
                {
                    "a": bp.a,
                    "b": bp.b,
                    "justified_by_a": bp.justified_by_a,
                    "justified_by_b": bp.justified_by_b,
                }
                for bp in self.blocking_pairs
            ],
            "unjustified": [list(p) for p in self.unjustified],
            "is_rsm": self.is_rsm,
            "critical_covered": self.critical_covered,
            "max_critical_coverage": self.max_critical_coverage,
            "is_critical": self.is_critical,
            "structure_report": (
                None if self.structure_report is None else self.structure_report.to_dict()
            ),
        }


def verification_report(inst: Instance, matching: Iterable, leveled=None) -> VerificationReport:
    """Run every checker on a candidate matching.

    A non-matching input (repeated endpoint or non-edge pair) yields a
    report with ``is_matching=False`` and no further verdicts.  When the
    acceptance levels are available, pass them as ``leveled`` to include
    the structure audit.
    """
    pairs = [(p[0], p[1]) for p in matching]
    try:
        _as_matching(inst, pairs)
    except ValueError:
        return VerificationReport(is_matching=False)
    bps = blocking_pairs(inst, pairs)
    unjust = [(bp.a, bp.b) for bp in bps if not bp.justified]
    covered = critical_coverage(inst, pairs)
    best = max_critical_coverage(inst)
    return VerificationReport(
        is_matching=True,
        blocking_pairs=tuple(bps),
        unjustified=tuple(unjust),
        is_rsm=not unjust,
        critical_covered=covered,
        max_critical_coverage=best,
        is_critical=covered == best,
        structure_report=None if leveled is None else check_structure(inst, leveled),
    )
