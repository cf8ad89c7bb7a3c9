"""Vectorized exhaustive-scan backend.

Enumerates matchings in canonical order (per A vertex: skip first, then
neighbours ascending) with a Python generator, and analyses them in numpy
chunks.  Aggregation semantics are identical to the jit backend; tests pin
the two against each other.
"""

from __future__ import annotations

import numpy as np

CHUNK = 16384


def _fill_chunks(n_a: int, adj: list[np.ndarray], out: np.ndarray):
    """Yield (rows_filled, buffer) blocks of match_a rows in canonical order."""
    match_a = np.full(n_a, -1, dtype=np.int64)
    used_b: set[int] = set()
    fill = 0

    def rec(a: int):
        nonlocal fill
        if a == n_a:
            out[fill] = match_a
            fill += 1
            if fill == out.shape[0]:
                yield fill
                fill = 0
            return
        yield from rec(a + 1)
        for b in adj[a]:
            if b not in used_b:
                match_a[a] = b
                used_b.add(b)
                yield from rec(a + 1)
                match_a[a] = -1
                used_b.discard(b)

    yield from rec(0)
    if fill:
        yield fill


def scan(n_a, n_b, adj_flat, adj_start, crit_a, crit_b, rank_a, rank_b, edges_a, edges_b):
    """Scan all matchings; return the aggregate tuple.

    Returns (total, max_cov, num_critical, num_critical_rsm, best_size,
    witness, min_a, max_a, min_b, max_b); ``witness`` is a match_a array.
    """
    if n_a == 0:
        # only the empty matching exists; it is critical and relaxed stable
        return (1, 0, 1, 1, 0, np.full(0, -1, dtype=np.int64), 0, 0, 0, 0)

    adj = [adj_flat[adj_start[a]:adj_start[a + 1]] for a in range(n_a)]
    ca = crit_a.astype(bool)
    cb = crit_b.astype(bool)
    m = len(edges_a)

    total = 0
    max_cov = -1
    num_critical = 0
    num_cr_rsm = 0
    best_size = -1
    witness = np.full(n_a, -1, dtype=np.int64)
    min_a = min_b = np.iinfo(np.int64).max
    max_a = max_b = -1

    buf = np.empty((CHUNK, n_a), dtype=np.int64)
    for k in _fill_chunks(n_a, adj, buf):
        c = buf[:k]
        total += k
        a_matched = c >= 0
        mb = np.full((k, n_b), -1, dtype=np.int64)
        rows = np.arange(k)
        for a in range(n_a):
            bs = c[:, a]
            mask = bs >= 0
            mb[rows[mask], bs[mask]] = a
        cov_a = (a_matched & ca[None, :]).sum(axis=1)
        cov_b = ((mb >= 0) & cb[None, :]).sum(axis=1)
        cov = cov_a + cov_b
        size = a_matched.sum(axis=1)

        rsm = np.ones(k, dtype=bool)
        for e in range(m):
            a = int(edges_a[e])
            b = int(edges_b[e])
            ra = rank_a[a, b]
            rb = rank_b[a, b]
            pa = c[:, a]
            qb = mb[:, b]
            in_m = pa == b
            a_pref = np.where(pa >= 0, rank_a[a, np.maximum(pa, 0)] > ra, True)
            b_pref = np.where(qb >= 0, rank_b[np.maximum(qb, 0), b] > rb, True)
            blocking = ~in_m & a_pref & b_pref
            justified = np.where(pa >= 0, cb[np.maximum(pa, 0)], False) | np.where(
                qb >= 0, ca[np.maximum(qb, 0)], False
            )
            rsm &= ~(blocking & ~justified)

        chunk_max = int(cov.max()) if k else -1
        if chunk_max > max_cov:
            max_cov = chunk_max
            num_critical = 0
            num_cr_rsm = 0
            best_size = -1
            witness = np.full(n_a, -1, dtype=np.int64)
            min_a = min_b = np.iinfo(np.int64).max
            max_a = max_b = -1
        sel = cov == max_cov
        if sel.any():
            num_critical += int(sel.sum())
            min_a = min(min_a, int(cov_a[sel].min()))
            max_a = max(max_a, int(cov_a[sel].max()))
            min_b = min(min_b, int(cov_b[sel].min()))
            max_b = max(max_b, int(cov_b[sel].max()))
            cr = sel & rsm
            if cr.any():
                num_cr_rsm += int(cr.sum())
                chunk_best = int(size[cr].max())
                if chunk_best > best_size:
                    best_size = chunk_best
                    idx = int(np.nonzero(cr & (size == chunk_best))[0][0])
                    witness = c[idx].copy()

    assert max_cov >= 0, "the empty matching is always enumerated"
    return (
        total,
        max_cov,
        num_critical,
        num_cr_rsm,
        best_size,
        witness,
        min_a,
        max_a,
        min_b,
        max_b,
    )
