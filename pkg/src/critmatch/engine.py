"""Multi-level proposal solver for critical relaxed stable matching.

A vertices propose, B vertices accept or reject.  Every proposer carries a
level; B vertices prefer a higher-level proposer over any lower-level one
regardless of ranks, and fall back to their own ranks between proposers at
the same level.  Writing ``s`` and ``t`` for the number of critical vertices
on the A side and the B side, the level ladder is

    0 < 1 < ... < t < t* < t+1 < ... < s+t

where ``t*`` is a second pass over the full tie-aware list that wins rank
ties against first-pass competitors.  Below ``t`` a proposer courts only its
critical neighbours through the strict list PrefSC; at ``t`` and ``t*`` it
runs tie-handling proposals (uncertain proposals, marks, favourite
neighbours) over its full list; above ``t*`` only critical proposers
continue, walking the strict list PrefS with escalating priority.

The output matching is guaranteed relaxed stable and critical, with size at
least two thirds of the maximum critical relaxed stable matching, and the
total number of proposals never exceeds (s + t + 3) * |E|.

Levels are encoded as integers: an ordinary level ``l`` has code ``2*l`` and
the second pass ``t*`` has code ``2*t + 1``, so the ladder above is exactly
the natural order on codes.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum

from .model import Instance, Side, derive_pref_s, derive_pref_sc

__all__ = [
    "Level",
    "ProposerState",
    "EngineState",
    "LeveledMatching",
    "SolveStats",
    "Winner",
    "solve",
    "init_state",
    "prefers",
    "critical_propose",
    "favourite_neighbour",
    "ties_propose",
    "advance_level",
]

logger = logging.getLogger("critmatch.engine")


@dataclass(frozen=True, order=True)
class Level:
    """A proposer level, totally ordered by its integer code."""

    code: int

    @classmethod
    def ordinary(cls, level: int) -> "Level":
        return cls(2 * level)

    @classmethod
    def star(cls, t: int) -> "Level":
        """The second-pass sub-level sitting strictly between t and t+1."""
        return cls(2 * t + 1)

    @property
    def is_star(self) -> bool:
        return self.code % 2 == 1

    @property
    def bucket(self) -> int:
        """Ordinary level for partitioning; the star pass collapses onto t."""
        return self.code // 2

    def label(self) -> str:
        return f"{self.code // 2}*" if self.is_star else str(self.code // 2)


class Winner(Enum):
    CHALLENGER = "challenger"
    INCUMBENT = "incumbent"


@dataclass
class ProposerState:
    """Mutable per-proposer bookkeeping.

    ``proposed`` and ``marked`` are scoped to the current level and are
    cleared on every level transition, including t to t*.  ``cursor`` is the
    position in the current strict list during the PrefSC / PrefS phases.
    """

    a: int
    level_code: int = 0
    cursor: int = 0
    proposed: set[int] = field(default_factory=set)
    marked: set[int] = field(default_factory=set)
    matched_to: int | None = None


@dataclass
class EngineState:
    """Complete solver state; single-threaded mutation only."""

    inst: Instance
    s: int
    t: int
    pref_s: tuple[tuple[int, ...], ...]
    pref_sc: tuple[tuple[int, ...], ...]
    # per A vertex: tie groups of its full list, each group ascending
    groups: tuple[tuple[tuple[int, ...], ...], ...]
    proposers: list[ProposerState]
    match_b: list[int | None]
    uncertain: list[bool]
    ever_uncertain: list[bool]
    ever_marked: list[bool]
    queue: deque[int]
    proposal_count: int = 0
    level_histogram: Counter = field(default_factory=Counter)

    @property
    def proposal_budget(self) -> int:
        return (self.s + self.t + 3) * len(self.inst.edges)


@dataclass(frozen=True)
class LeveledMatching:
    """A matching whose pairs remember the level of the final acceptance."""

    pairs: frozenset[tuple[int, int, Level]]

    @property
    def matching(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a, b, _ in self.pairs)

    @property
    def sorted_pairs(self) -> tuple[tuple[int, int, Level], ...]:
        return tuple(sorted(self.pairs, key=lambda p: (p[0], p[1])))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SolveStats:
    """Run statistics emitted alongside the matching."""

    proposal_count: int
    per_level_histogram: dict[int, int]
    final_levels: tuple[int, ...]
    pairs: tuple[tuple[int, int, int], ...]

    def to_dict(self) -> dict:
        return {
            "proposal_count": self.proposal_count,
            "per_level_histogram": {str(k): v for k, v in sorted(self.per_level_histogram.items())},
            "final_levels": list(self.final_levels),
            "pairs": [list(p) for p in self.pairs],
        }


def init_state(inst: Instance) -> EngineState:
    """Build the starting state: everyone unmatched, queued at level 0."""
    groups = tuple(inst.pref_list(Side.A, a).groups for a in range(inst.n_a))
    return EngineState(
        inst=inst,
        s=inst.s,
        t=inst.t,
        pref_s=tuple(derive_pref_s(inst, a).order for a in range(inst.n_a)),
        pref_sc=tuple(derive_pref_sc(inst, a).order for a in range(inst.n_a)),
        groups=groups,
        proposers=[ProposerState(a=a) for a in range(inst.n_a)],
        match_b=[None] * inst.n_b,
        uncertain=[False] * inst.n_b,
        ever_uncertain=[False] * inst.n_b,
        ever_marked=[False] * inst.n_b,
        queue=deque(range(inst.n_a)),
    )


def _challenger_wins(t: int, c_code: int, c_rank: int, i_code: int, i_rank: int) -> bool:
    """Does b prefer the challenger, given level codes and b-side ranks?

    Equal codes compare strictly by rank.  Between the tie levels, the
    second pass beats the first pass on rank ties, while a first-pass
    challenger needs a strict rank win against a second-pass incumbent.
    Any other code gap is decided by the higher level alone.
    """
    star, base = 2 * t + 1, 2 * t
    if c_code == i_code:
        return c_rank < i_rank
    if c_code == star and i_code == base:
        return c_rank <= i_rank
    if c_code == base and i_code == star:
        return c_rank < i_rank
    return c_code > i_code


def prefers(
    state: EngineState,
    b: int,
    challenger: tuple[int, Level | int],
    incumbent: tuple[int, Level | int],
) -> Winner:
    """Decide which of two leveled proposers ``b`` prefers.

    Both proposers must be neighbours of ``b``.  Levels may be given as
    ``Level`` objects or raw codes.
    """
    (ca, cl), (ia, il) = challenger, incumbent
    c_code = cl.code if isinstance(cl, Level) else cl
    i_code = il.code if isinstance(il, Level) else il
    inst = state.inst
    if not inst.has_edge(ca, b) or not inst.has_edge(ia, b):
        raise ValueError(f"non-neighbour of b={b}")
    win = _challenger_wins(
        state.t, c_code, inst.rank_at_b(ca, b), i_code, inst.rank_at_b(ia, b)
    )
    return Winner.CHALLENGER if win else Winner.INCUMBENT


def _current_strict_list(state: EngineState, a: int) -> tuple[int, ...]:
    code = state.proposers[a].level_code
    if code < 2 * state.t:
        return state.pref_sc[a]
    assert code > 2 * state.t + 1, "tie levels use the full list, not a strict one"
    return state.pref_s[a]


def _accept(state: EngineState, a: int, b: int) -> None:
    p = state.proposers[a]
    assert state.match_b[b] is None
    state.match_b[b] = a
    p.matched_to = b


def _displace(state: EngineState, a: int, b: int) -> int:
    """Replace b's partner with ``a``; return the displaced proposer.

    b is rematched in the same step, so once matched it stays matched.
    """
    old = state.match_b[b]
    assert old is not None
    state.proposers[old].matched_to = None
    state.match_b[b] = a
    state.proposers[a].matched_to = b
    state.uncertain[b] = False
    return old


def _count_proposal(state: EngineState, a: int, b: int) -> None:
    p = state.proposers[a]
    state.proposal_count += 1
    state.level_histogram[p.level_code] += 1
    assert state.proposal_count <= state.proposal_budget, "proposal budget exceeded"
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            "propose a=%d b=%d level=%s rank=%d",
            a, b, Level(p.level_code).label(), state.inst.rank_at_a(a, b),
        )


def critical_propose(state: EngineState, a: int) -> None:
    """One proposal along the current strict list (PrefSC below t, PrefS above t*).

    The target is the earliest list entry not yet proposed at this level.
    b accepts when unmatched or when it prefers the challenger; the loser
    re-enters the queue.
    """
    p = state.proposers[a]
    order = _current_strict_list(state, a)
    assert p.cursor < len(order), "called with an exhausted list"
    b = order[p.cursor]
    p.cursor += 1
    p.proposed.add(b)
    _count_proposal(state, a, b)
    if state.match_b[b] is None:
        assert not state.uncertain[b]
        _accept(state, a, b)
        return
    incumbent = state.match_b[b]
    inst = state.inst
    if _challenger_wins(
        state.t,
        p.level_code,
        inst.rank_at_b(a, b),
        state.proposers[incumbent].level_code,
        inst.rank_at_b(incumbent, b),
    ):
        old = _displace(state, a, b)
        state.queue.append(old)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("displace a=%d by a=%d at b=%d", old, a, b)
    else:
        state.queue.append(a)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("reject a=%d at b=%d", a, b)


def favourite_neighbour(state: EngineState, a: int) -> tuple[int, int] | None:
    """Target of the next tie-phase proposal, or None when the level is spent.

    Let k be the best rank of ``a``'s list still holding an unproposed or
    marked neighbour.  Preference inside rank k: the lowest-index unmatched
    neighbour; otherwise the lowest-index unproposed one; otherwise the
    lowest-index marked one.  Returns ``(b, group_position)``.
    """
    p = state.proposers[a]
    for gi, members in enumerate(state.groups[a]):
        live = [b for b in members if b not in p.proposed or b in p.marked]
        if not live:
            continue
        unmatched = [b for b in members if state.match_b[b] is None and b not in p.proposed]
        if unmatched:
            return unmatched[0], gi
        unproposed = [b for b in members if b not in p.proposed]
        if unproposed:
            return unproposed[0], gi
        marked = [b for b in members if b in p.marked]
        assert marked
        return marked[0], gi
    return None


def ties_propose(state: EngineState, a: int) -> None:
    """One tie-phase proposal to the favourite neighbour (levels t and t*).

    An acceptance by an unmatched b is flagged uncertain when another
    neighbour of the same rank is still unmatched and unproposed by ``a``;
    an uncertain edge is surrendered unconditionally to the next proposer,
    and the displaced proposer marks b to revisit it before dropping in
    rank.
    """
    p = state.proposers[a]
    assert p.level_code in (2 * state.t, 2 * state.t + 1)
    fav = favourite_neighbour(state, a)
    assert fav is not None, "caller must check favourite_neighbour first"
    b, gi = fav
    if b in p.marked:
        p.marked.discard(b)
    p.proposed.add(b)
    _count_proposal(state, a, b)

    if state.match_b[b] is None:
        _accept(state, a, b)
        group = state.groups[a][gi]
        if any(
            b2 != b and b2 not in p.proposed and state.match_b[b2] is None
            for b2 in group
        ):
            assert not state.ever_uncertain[b], "a B vertex is uncertain at most once"
            state.uncertain[b] = True
            state.ever_uncertain[b] = True
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("uncertain accept a=%d b=%d", a, b)
        return

    if state.uncertain[b]:
        # b discards an uncertain edge no matter the ranks; the loser
        # bookmarks b and will revisit it before descending in rank.
        old = _displace(state, a, b)
        assert not state.ever_marked[b], "a B vertex is marked at most once"
        state.proposers[old].marked.add(b)
        state.ever_marked[b] = True
        state.queue.append(old)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("uncertain reject: a=%d marks b=%d, displaced by a=%d", old, b, a)
        return

    incumbent = state.match_b[b]
    inst = state.inst
    if _challenger_wins(
        state.t,
        p.level_code,
        inst.rank_at_b(a, b),
        state.proposers[incumbent].level_code,
        inst.rank_at_b(incumbent, b),
    ):
        old = _displace(state, a, b)
        state.queue.append(old)
    else:
        state.queue.append(a)


def advance_level(state: EngineState, a: int) -> bool:
    """Move an exhausted proposer up the ladder; False means it retires.

    Transitions: below t climb one level on PrefSC; t moves to the second
    pass t*; from t* only a critical proposer continues to t+1 on PrefS and
    climbs until s+t.  The per-level proposed set, the marks and the list
    cursor are cleared on every transition.
    """
    p = state.proposers[a]
    code = p.level_code
    base, star = 2 * state.t, 2 * state.t + 1
    critical = a in state.inst.critical_a
    if code < base:
        new = code + 2
    elif code == base:
        assert not p.marked, "marks cannot outlive the first tie pass"
        new = star
    elif code == star:
        if not critical:
            return False
        assert state.s >= 1
        new = base + 2
    else:
        assert critical, "only critical proposers climb past the second pass"
        if code // 2 >= state.s + state.t:
            return False
        new = code + 2
    assert new > code
    p.level_code = new
    p.cursor = 0
    p.proposed.clear()
    p.marked.clear()
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("level up a=%d -> %s", a, Level(new).label())
    return True


def _step(state: EngineState) -> None:
    """Process one queue entry."""
    a = state.queue.popleft()
    p = state.proposers[a]
    assert p.matched_to is None, "queued proposers are unmatched"
    code = p.level_code
    base, star = 2 * state.t, 2 * state.t + 1
    if code < base:
        if p.cursor < len(state.pref_sc[a]):
            critical_propose(state, a)
        elif advance_level(state, a):
            state.queue.append(a)
    elif code in (base, star):
        if favourite_neighbour(state, a) is not None:
            ties_propose(state, a)
        elif advance_level(state, a):
            state.queue.append(a)
    else:
        if p.cursor < len(state.pref_s[a]):
            critical_propose(state, a)
        elif advance_level(state, a):
            state.queue.append(a)


def solve(inst: Instance) -> tuple[LeveledMatching, SolveStats]:
    """Run the full proposal process on a validated instance.

    Deterministic: the queue starts with all A indices ascending and FIFO
    order is kept throughout, so identical instances give identical runs.

    Returns
    -------
    (LeveledMatching, SolveStats)
        The matching with per-pair acceptance levels, plus counters.
    """
    state = init_state(inst)
    while state.queue:
        _step(state)
    pairs = frozenset(
        (p.a, p.matched_to, Level(p.level_code))
        for p in state.proposers
        if p.matched_to is not None
    )
    matched_bs = [b for b in range(inst.n_b) if state.match_b[b] is not None]
    assert len(pairs) == len(matched_bs)
    stats = SolveStats(
        proposal_count=state.proposal_count,
        per_level_histogram=dict(state.level_histogram),
        final_levels=tuple(p.level_code for p in state.proposers),
        pairs=tuple(sorted((a, b, lv.code) for a, b, lv in pairs)),
    )
    return LeveledMatching(pairs=pairs), stats
