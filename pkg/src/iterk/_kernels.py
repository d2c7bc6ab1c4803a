"""Hot inner loops for exhaustive table analysis.

Every kernel exists twice: a plain loop implementation that numba can
compile in nopython mode, and a numpy fallback.  The compiled path is used
when numba imports cleanly and the environment variable
``ITERK_DISABLE_NUMBA`` is unset (or "0"); otherwise the fallback path is
selected.  ``benchmarks/bench_kernels.py`` compares the two.

Array conventions: tables are flat int64 arrays of length m**k in row-major
order (last argument fastest); permutations are int64 arrays over state
indices.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    return os.environ.get("ITERK_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# loop implementations (nopython-compatible)

def _table_perm_impl(entries, m, k):
    # realize the first iterate of a table as a map on state indices
    n_states = 1
    for _ in range(k):
        n_states *= m
    perm = np.empty(n_states, np.int64)
    hits = np.zeros(n_states, np.int64)
    digits = np.empty(k, np.int64)
    out = np.empty(k, np.int64)
    for s in range(n_states):
        r = s
        for i in range(k - 1, -1, -1):
            digits[i] = r % m
            r //= m
        for j in range(k):
            flat = 0
            for t in range(k):
                p = j + t
                v = digits[p] if p < k else out[p - k]
                flat = flat * m + v
            out[j] = entries[flat]
        img = 0
        for i in range(k):
            img = img * m + out[i]
        perm[s] = img
        hits[img] += 1
    injective = True
    for i in range(n_states):
        if hits[i] > 1:
            injective = False
            break
    return perm, injective


def _involution_scan_impl(m):
    # count self-maps g on m points with g(g(x)) == x, by full enumeration
    g = np.zeros(m, np.int64)
    total = 1
    for _ in range(m):
        total *= m
    count = 0
    for _i in range(total):
        ok = True
        for x in range(m):
            if g[g[x]] != x:
                ok = False
                break
        if ok:
            count += 1
        pos = m - 1
        while pos >= 0:
            g[pos] += 1
            if g[pos] < m:
                break
            g[pos] = 0
            pos -= 1
    return count


def _ii_filter_impl(tables, m, k):
    # tables: [n_cand, m**k]; keep candidates whose induced map in every
    # argument position >= 2 is an involution for every frozen context
    # (position 1 is guaranteed by construction)
    n_cand = tables.shape[0]
    n_states = tables.shape[1]
    ok = np.ones(n_cand, np.bool_)
    for c in range(n_cand):
        good = True
        for axis in range(1, k):
            stride = 1
            for _ in range(k - 1 - axis):
                stride *= m
            for p in range(n_states):
                if (p // stride) % m == 0:
                    for t in range(m):
                        u = tables[c, p + t * stride]
                        if tables[c, p + u * stride] != t:
                            good = False
                            break
                    if not good:
                        break
            if not good:
                break
        ok[c] = good
    return ok


def _cycle_sweep_impl(m, k):
    # For every table on m symbols with k arguments whose first iterate is a
    # bijection of the state space, and for every state: measure the state
    # period n and the minimal period j of the element sequence seeded there,
    # then tally how n and j relate.
    # Returns int64 tallies:
    #   [0] tables visited          [1] tables with bijective first iterate
    #   [2] cyclic states checked   [3] states with n != j/gcd(j,k)
    #   [4] states with j | n       [5] states with j not dividing n
    #   [6] states with j not dividing n*k
    n_states = 1
    for _ in range(k):
        n_states *= m
    n_tables = 1
    for _ in range(n_states):
        n_tables *= m
    entries = np.zeros(n_states, np.int64)
    perm = np.empty(n_states, np.int64)
    hits = np.empty(n_states, np.int64)
    period = np.empty(n_states, np.int64)
    visited = np.empty(n_states, np.bool_)
    digits = np.empty(k, np.int64)
    out = np.empty(k, np.int64)
    seq = np.empty(2 * n_states * k, np.int64)
    tallies = np.zeros(7, np.int64)
    for _tab in range(n_tables):
        tallies[0] += 1
        for i in range(n_states):
            hits[i] = 0
        for s in range(n_states):
            r = s
            for i in range(k - 1, -1, -1):
                digits[i] = r % m
                r //= m
            for j in range(k):
                flat = 0
                for t in range(k):
                    p = j + t
                    v = digits[p] if p < k else out[p - k]
                    flat = flat * m + v
                out[j] = entries[flat]
            img = 0
            for i in range(k):
                img = img * m + out[i]
            perm[s] = img
            hits[img] += 1
        bijective = True
        for i in range(n_states):
            if hits[i] != 1:
                bijective = False
                break
        if bijective:
            tallies[1] += 1
            for i in range(n_states):
                visited[i] = False
            for s in range(n_states):
                if not visited[s]:
                    ln = 0
                    c = s
                    while True:
                        c = perm[c]
                        ln += 1
                        if c == s:
                            break
                    c = s
                    for _ in range(ln):
                        period[c] = ln
                        visited[c] = True
                        c = perm[c]
            for s in range(n_states):
                n_p = period[s]
                tallies[2] += 1
                r = s
                for i in range(k - 1, -1, -1):
                    seq[i] = r % m
                    r //= m
                full = n_p * k
                for i in range(k, 2 * full):
                    flat = 0
                    for t in range(k):
                        flat = flat * m + seq[i - k + t]
                    seq[i] = entries[flat]
                jmin = full
                for d in range(1, full + 1):
                    if full % d == 0:
                        okd = True
                        for i in range(full):
                            if seq[i] != seq[i + d]:
                                okd = False
                                break
                        if okd:
                            jmin = d
                            break
                a = jmin
                b = k
                while b:
                    a, b = b, a % b
                if n_p != jmin // a:
                    tallies[3] += 1
                if n_p % jmin == 0:
                    tallies[4] += 1
                else:
                    tallies[5] += 1
                if (n_p * k) % jmin != 0:
                    tallies[6] += 1
        pos = n_states - 1
        while pos >= 0:
            entries[pos] += 1
            if entries[pos] < m:
                break
            entries[pos] = 0
            pos -= 1
    return tallies


# ---------------------------------------------------------------------------
# numpy fallbacks for the kernels whose plain-loop form would be slow when
# interpreted

_CHUNK = 1 << 17


def _involution_scan_numpy(m):
    total = m**m
    points = np.arange(m)
    count = 0
    for start in range(0, total, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = np.empty((ids.shape[0], m), np.int64)
        r = ids
        for pos in range(m - 1, -1, -1):
            digits[:, pos] = r % m
            r = r // m
        gg = np.take_along_axis(digits, digits, axis=1)
        count += int((gg == points).all(axis=1).sum())
    return count


def _ii_filter_numpy(tables, m, k):
    n_cand = tables.shape[0]
    ok = np.ones(n_cand, bool)
    view = tables.reshape((n_cand,) + (m,) * k)
    points = np.arange(m)
    for axis in range(1, k):
        moved = np.moveaxis(view, 1 + axis, -1).reshape(n_cand, -1, m)
        gg = np.take_along_axis(moved, moved, axis=2)
        ok &= (gg == points).all(axis=(1, 2))
    return ok


# ---------------------------------------------------------------------------
# kernel selection

NUMBA_ACTIVE = False

if _numba_requested():
    try:
        from numba import njit
    except ImportError:
        njit = None
    if njit is not None:
        table_perm = njit(cache=True)(_table_perm_impl)
        involution_scan = njit(cache=True)(_involution_scan_impl)
        ii_filter = njit(cache=True)(_ii_filter_impl)
        cycle_sweep = njit(cache=True)(_cycle_sweep_impl)
        NUMBA_ACTIVE = True

if not NUMBA_ACTIVE:
    table_perm = _table_perm_impl
    involution_scan = _involution_scan_numpy
    ii_filter = _ii_filter_numpy
    cycle_sweep = _cycle_sweep_impl


def warmup() -> None:
    """Trigger jit compilation on tiny inputs so timed paths run hot."""
    if not NUMBA_ACTIVE:
        return
    tiny = np.zeros(2, np.int64)
    table_perm(tiny, 2, 1)
    involution_scan(1)
    ii_filter(np.zeros((1, 4), np.int64), 2, 2)
    cycle_sweep(1, 1)
