"""Instance model for bipartite matching with two-sided ties and critical vertices.

An instance is a bipartite graph between an A side and a B side.  Every edge
carries one rank per endpoint; equal ranks within one vertex's list are ties.
Each vertex may additionally be flagged critical, meaning a solver should
match it if any matching can.

The module owns parsing, validation, serialization and derivation of the
two strict preference lists used by the solver:

* PrefS(a): the full neighbour list of ``a`` with ties broken by ascending
  vertex index.
* PrefSC(a): the subsequence of PrefS(a) keeping only critical neighbours.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

__all__ = [
    "Side",
    "VertexRef",
    "Instance",
    "PreferenceList",
    "StrictList",
    "ListVariant",
    "ValidationResult",
    "ParseError",
    "make_instance",
    "parse_instance",
    "serialize_instance",
    "validate",
    "derive_pref_s",
    "derive_pref_sc",
]


class Side(Enum):
    """Which side of the bipartition a vertex belongs to."""

    A = "a"
    B = "b"


@dataclass(frozen=True)
class VertexRef:
    """A vertex identified by side and dense 0-based index."""

    side: Side
    index: int


class ParseError(ValueError):
    """Raised when instance or matching text cannot be parsed."""


@dataclass(frozen=True)
class Instance:
    """Immutable problem instance.

    Attributes
    ----------
    n_a, n_b : int
        Number of vertices on the A side and the B side.
    edges : frozenset of (a, b, rank_at_a, rank_at_b)
        Every edge is declared exactly once and carries both ranks.
    critical_a, critical_b : frozenset of int
        Indices of critical vertices per side.

    The counts ``s`` and ``t`` of critical vertices are recomputed on
    access so they can never go stale.  Instances are safe to share
    read-only across threads or workers.
    """

    n_a: int
    n_b: int
    edges: frozenset[tuple[int, int, int, int]]
    critical_a: frozenset[int]
    critical_b: frozenset[int]

    @property
    def s(self) -> int:
        """Number of critical vertices on the A side."""
        return len(self.critical_a)

    @property
    def t(self) -> int:
        """Number of critical vertices on the B side."""
        return len(self.critical_b)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int, int, int], ...]:
        """Edges sorted by (a, b); the canonical iteration order."""
        return tuple(sorted(self.edges))

    @cached_property
    def _rank_a(self) -> dict[tuple[int, int], int]:
        return {(a, b): ra for a, b, ra, _ in self.edges}

    @cached_property
    def _rank_b(self) -> dict[tuple[int, int], int]:
        return {(a, b): rb for a, b, _, rb in self.edges}

    @cached_property
    def adj_a(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour indices per A vertex, ascending."""
        out: list[list[int]] = [[] for _ in range(self.n_a)]
        for a, b, _, _ in self.sorted_edges:
            out[a].append(b)
        return tuple(tuple(x) for x in out)

    @cached_property
    def adj_b(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour indices per B vertex, ascending."""
        out: list[list[int]] = [[] for _ in range(self.n_b)]
        for a, b, _, _ in self.sorted_edges:
            out[b].append(a)
        return tuple(tuple(sorted(x)) for x in out)

    def rank_at_a(self, a: int, b: int) -> int:
        """Rank of neighbour ``b`` in a's list."""
        return self._rank_a[(a, b)]

    def rank_at_b(self, a: int, b: int) -> int:
        """Rank of neighbour ``a`` in b's list."""
        return self._rank_b[(a, b)]

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self._rank_a

    def pref_list(self, side: Side, index: int) -> "PreferenceList":
        """Ranked neighbour list with ties for one vertex.

        Groups are ordered by strictly increasing rank; members of a
        group are listed in ascending index order.
        """
        if side is Side.A:
            if not 0 <= index < self.n_a:
                raise IndexError(f"A-index {index} out of range")
            pairs = [(self._rank_a[(index, b)], b) for b in self.adj_a[index]]
        else:
            if not 0 <= index < self.n_b:
                raise IndexError(f"B-index {index} out of range")
            pairs = [(self._rank_b[(a, index)], a) for a in self.adj_b[index]]
        by_rank: dict[int, list[int]] = {}
        for r, v in pairs:
            by_rank.setdefault(r, []).append(v)
        ranks = tuple(sorted(by_rank))
        groups = tuple(tuple(sorted(by_rank[r])) for r in ranks)
        return PreferenceList(owner=VertexRef(side, index), groups=groups, ranks=ranks)


@dataclass(frozen=True)
class PreferenceList:
    """Tie-aware preference list of one vertex.

    ``groups[i]`` holds the neighbours sharing rank ``ranks[i]``; groups are
    sorted by strictly increasing rank and cover the neighbourhood exactly.
    """

    owner: VertexRef
    groups: tuple[tuple[int, ...], ...]
    ranks: tuple[int, ...]


class ListVariant(Enum):
    PREF_S = "pref_s"
    PREF_SC = "pref_sc"


@dataclass(frozen=True)
class StrictList:
    """A strict (tie-free) preference order derived from a vertex's list."""

    owner: VertexRef
    order: tuple[int, ...]
    variant: ListVariant


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...]


def make_instance(
    n_a: int,
    n_b: int,
    edges: Iterable[tuple[int, int, int, int]],
    critical_a: Iterable[int] = (),
    critical_b: Iterable[int] = (),
) -> Instance:
    """Convenience constructor normalizing the container types."""
    return Instance(
        n_a=n_a,
        n_b=n_b,
        edges=frozenset(tuple(e) for e in edges),
        critical_a=frozenset(critical_a),
        critical_b=frozenset(critical_b),
    )


def validate(inst: Instance) -> ValidationResult:
    """Check every instance invariant; violations are returned, not raised.

    Returns
    -------
    ValidationResult
        ``ok`` is True iff the list of violations is empty.
    """
    v: list[str] = []
    if inst.n_a < 0 or inst.n_b < 0:
        v.append(f"negative vertex count: n_a={inst.n_a} n_b={inst.n_b}")
    seen_pairs: set[tuple[int, int]] = set()
    for a, b, ra, rb in inst.sorted_edges:
        if not (0 <= a < inst.n_a):
            v.append(f"edge ({a},{b}): A-index out of range")
        if not (0 <= b < inst.n_b):
            v.append(f"edge ({a},{b}): B-index out of range")
        if ra < 1:
            v.append(f"edge ({a},{b}): rank < 1 on the A side")
        if rb < 1:
            v.append(f"edge ({a},{b}): rank < 1 on the B side")
        if (a, b) in seen_pairs:
            v.append(f"edge ({a},{b}): declared more than once")
        seen_pairs.add((a, b))
    for i in inst.critical_a:
        if not (0 <= i < inst.n_a):
            v.append(f"critical_a index {i} out of range")
    for j in inst.critical_b:
        if not (0 <= j < inst.n_b):
            v.append(f"critical_b index {j} out of range")
    return ValidationResult(ok=not v, violations=tuple(v))


def derive_pref_s(inst: Instance, a: int) -> StrictList:
    """Strict order over a's neighbourhood: by rank, ties by ascending index.

    Deterministic; re-derivation always yields the same order.

    Raises
    ------
    IndexError
        If ``a`` is not a valid A-index.
    """
    if not 0 <= a < inst.n_a:
        raise IndexError(f"A-index {a} out of range")
    order = tuple(sorted(inst.adj_a[a], key=lambda b: (inst.rank_at_a(a, b), b)))
    return StrictList(owner=VertexRef(Side.A, a), order=order, variant=ListVariant.PREF_S)


def derive_pref_sc(inst: Instance, a: int) -> StrictList:
    """Subsequence of ``derive_pref_s`` keeping only critical neighbours."""
    base = derive_pref_s(inst, a)
    order = tuple(b for b in base.order if b in inst.critical_b)
    return StrictList(owner=base.owner, order=order, variant=ListVariant.PREF_SC)


# --- parsing and serialization -------------------------------------------

def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _parse_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what}: expected an integer, got {token!r}") from None


def parse_instance(text: str) -> Instance:
    """Parse instance text in either the line format or the JSON format.

    The format is autodetected by the first non-comment token: a ``{``
    selects JSON, the keyword ``instance`` selects the line format.

    Raises
    ------
    ParseError
        On malformed syntax, duplicate edges, ranks below 1, indices out
        of range, or an edge declared with ranks for only one endpoint.
    """
    stripped = ""
    for line in text.splitlines():
        s = _strip_comment(line).strip()
        if s:
            stripped = s
            break
    if not stripped:
        raise ParseError("empty input")
    if stripped.startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def _parse_text(text: str) -> Instance:
    lines = [s for s in (_strip_comment(l).strip() for l in text.splitlines()) if s]
    if not lines:
        raise ParseError("empty instance file")

    head = lines[0].split()
    if len(head) != 3 or head[0] != "instance":
        raise ParseError(f"bad header line: {lines[0]!r}")
    n_a = _parse_int(head[1], "n_a")
    n_b = _parse_int(head[2], "n_b")
    if n_a < 0 or n_b < 0:
        raise ParseError("vertex counts must be non-negative")

    def crit_line(parts: list[str], key: str, n: int) -> frozenset[int]:
        idxs = [_parse_int(p, key) for p in parts[1:]]
        for i in idxs:
            if not 0 <= i < n:
                raise ParseError(f"{key} index {i} out of range")
        return frozenset(idxs)

    # critical_a / critical_b lines are optional and default to empty
    critical_a: frozenset[int] | None = None
    critical_b: frozenset[int] | None = None
    edges: set[tuple[int, int, int, int]] = set()
    pairs: set[tuple[int, int]] = set()
    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "critical_a":
            if critical_a is not None:
                raise ParseError("critical_a declared twice")
            critical_a = crit_line(parts, "critical_a", n_a)
            continue
        if parts[0] == "critical_b":
            if critical_b is not None:
                raise ParseError("critical_b declared twice")
            critical_b = crit_line(parts, "critical_b", n_b)
            continue
        if parts[0] != "edge":
            raise ParseError(f"unexpected line: {line!r}")
        if len(parts) == 4:
            raise ParseError(
                f"asymmetric edge declaration: {line!r} carries a rank for only "
                "one endpoint; every edge needs both ranks"
            )
        if len(parts) != 5:
            raise ParseError(f"bad edge line: {line!r}")
        a = _parse_int(parts[1], "edge A-index")
        b = _parse_int(parts[2], "edge B-index")
        ra = _parse_int(parts[3], "rank_at_a")
        rb = _parse_int(parts[4], "rank_at_b")
        _check_edge(a, b, ra, rb, n_a, n_b, pairs)
        pairs.add((a, b))
        edges.add((a, b, ra, rb))

    return Instance(
        n_a,
        n_b,
        frozenset(edges),
        critical_a if critical_a is not None else frozenset(),
        critical_b if critical_b is not None else frozenset(),
    )


def _check_edge(a, b, ra, rb, n_a, n_b, pairs) -> None:
    if not 0 <= a < n_a:
        raise ParseError(f"edge ({a},{b}): A-index out of range")
    if not 0 <= b < n_b:
        raise ParseError(f"edge ({a},{b}): B-index out of range")
    if ra < 1 or rb < 1:
        raise ParseError(f"edge ({a},{b}): ranks must be >= 1")
    if (a, b) in pairs:
        raise ParseError(f"duplicate edge ({a},{b})")


def _parse_json(text: str) -> Instance:
    payload = "\n".join(_strip_comment(l) for l in text.splitlines())
    try:
        obj = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    missing = {"n_a", "n_b", "edges", "critical_a", "critical_b"} - obj.keys()
    if missing:
        raise ParseError(f"missing fields: {sorted(missing)}")
    n_a, n_b = obj["n_a"], obj["n_b"]
    if not isinstance(n_a, int) or not isinstance(n_b, int) or n_a < 0 or n_b < 0:
        raise ParseError("n_a and n_b must be non-negative integers")
    edges: set[tuple[int, int, int, int]] = set()
    pairs: set[tuple[int, int]] = set()
    for e in obj["edges"]:
        if not isinstance(e, (list, tuple)):
            raise ParseError(f"bad edge entry: {e!r}")
        if len(e) == 3:
            raise ParseError(
                f"asymmetric edge declaration: {e!r} carries a rank for only one endpoint"
            )
        if len(e) != 4 or not all(isinstance(x, int) for x in e):
            raise ParseError(f"bad edge entry: {e!r}")
        a, b, ra, rb = e
        _check_edge(a, b, ra, rb, n_a, n_b, pairs)
        pairs.add((a, b))
        edges.add((a, b, ra, rb))
    for key, n in (("critical_a", n_a), ("critical_b", n_b)):
        for i in obj[key]:
            if not isinstance(i, int) or not 0 <= i < n:
                raise ParseError(f"{key} index {i!r} out of range")
    return Instance(
        n_a,
        n_b,
        frozenset(edges),
        frozenset(obj["critical_a"]),
        frozenset(obj["critical_b"]),
    )


def serialize_instance(inst: Instance, fmt: str = "text") -> str:
    """Serialize an instance; ``parse_instance`` round-trips the result.

    Parameters
    ----------
    fmt : str
        Either ``"text"`` (line format) or ``"json"``.
    """
    if fmt == "text":
        out = [f"instance {inst.n_a} {inst.n_b}"]
        out.append(" ".join(["critical_a", *map(str, sorted(inst.critical_a))]).rstrip())
        out.append(" ".join(["critical_b", *map(str, sorted(inst.critical_b))]).rstrip())
        for a, b, ra, rb in inst.sorted_edges:
            out.append(f"edge {a} {b} {ra} {rb}")
        return "\n".join(out) + "\n"
    if fmt == "json":
        obj = {
            "n_a": inst.n_a,
            "n_b": inst.n_b,
            "critical_a": sorted(inst.critical_a),
            "critical_b": sorted(inst.critical_b),
            "edges": [list(e) for e in inst.sorted_edges],
        }
        return json.dumps(obj, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
