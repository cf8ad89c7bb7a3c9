"""Jit-compiled exhaustive-scan backend.

The whole enumeration plus per-matching analysis runs inside one nopython
kernel: an explicit choice stack walks matchings in canonical order (per A
vertex: skip first, then neighbours ascending), identical to the numpy
backend's order.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_BIG = np.int64(1) << np.int64(60)


@njit(cache=True)
def _kernel(n_a, n_b, adj_flat, adj_start, crit_a, crit_b, rank_a, rank_b, edges_a, edges_b):
    match_a = np.full(n_a, -1, np.int64)
    match_b = np.full(n_b, -1, np.int64)
    # choice per depth: -2 fresh, -1 skip taken, k >= 0 offset into adjacency
    choice = np.full(n_a, -2, np.int64)
    m = edges_a.shape[0]

    total = 0
    max_cov = np.int64(-1)
    num_critical = 0
    num_cr_rsm = 0
    best_size = np.int64(-1)
    witness = np.full(n_a, -1, np.int64)
    min_a = _BIG
    max_a = np.int64(-1)
    min_b = _BIG
    max_b = np.int64(-1)

    pos = 0
    while pos >= 0:
        if pos == n_a:
            total += 1
            cov_a = np.int64(0)
            cov_b = np.int64(0)
            size = np.int64(0)
            for a in range(n_a):
                if match_a[a] >= 0:
                    size += 1
                    if crit_a[a] != 0:
                        cov_a += 1
            for b in range(n_b):
                if match_b[b] >= 0 and crit_b[b] != 0:
                    cov_b += 1
            cov = cov_a + cov_b
            if cov > max_cov:
                max_cov = cov
                num_critical = 0
                num_cr_rsm = 0
                best_size = np.int64(-1)
                for i in range(n_a):
                    witness[i] = -1
                min_a = _BIG
                max_a = np.int64(-1)
                min_b = _BIG
                max_b = np.int64(-1)
            if cov == max_cov:
                num_critical += 1
                if cov_a < min_a:
                    min_a = cov_a
                if cov_a > max_a:
                    max_a = cov_a
                if cov_b < min_b:
                    min_b = cov_b
                if cov_b > max_b:
                    max_b = cov_b
                rsm = True
                for e in range(m):
                    a = edges_a[e]
                    b = edges_b[e]
                    pa = match_a[a]
                    if pa == b:
                        continue
                    if pa >= 0 and rank_a[a, pa] <= rank_a[a, b]:
                        continue
                    qb = match_b[b]
                    if qb >= 0 and rank_b[qb, b] <= rank_b[a, b]:
                        continue
                    if (pa >= 0 and crit_b[pa] != 0) or (qb >= 0 and crit_a[qb] != 0):
                        continue
                    rsm = False
                    break
                if rsm:
                    num_cr_rsm += 1
                    if size > best_size:
                        best_size = size
                        for i in range(n_a):
                            witness[i] = match_a[i]
            pos -= 1
            continue

        c = choice[pos]
        if c >= 0:
            b_old = adj_flat[adj_start[pos] + c]
            match_a[pos] = -1
            match_b[b_old] = -1
        if c == -2:
            choice[pos] = -1
            pos += 1
            continue
        nxt = adj_start[pos] if c == -1 else adj_start[pos] + c + 1
        end = adj_start[pos + 1]
        while nxt < end and match_b[adj_flat[nxt]] >= 0:
            nxt += 1
        if nxt >= end:
            choice[pos] = -2
            pos -= 1
            continue
        b_new = adj_flat[nxt]
        choice[pos] = nxt - adj_start[pos]
        match_a[pos] = b_new
        match_b[b_new] = pos
        pos += 1

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


def scan(n_a, n_b, adj_flat, adj_start, crit_a, crit_b, rank_a, rank_b, edges_a, edges_b):
    """Scan all matchings; same result tuple as the numpy backend."""
    out = _kernel(
        np.int64(n_a),
        np.int64(n_b),
        adj_flat,
        adj_start,
        crit_a,
        crit_b,
        rank_a,
        rank_b,
        edges_a,
        edges_b,
    )
    return (
        int(out[0]),
        int(out[1]),
        int(out[2]),
        int(out[3]),
        int(out[4]),
        np.asarray(out[5]),
        int(out[6]),
        int(out[7]),
        int(out[8]),
        int(out[9]),
    )
