"""Exhaustive, exact analysis of maps on a finite domain {0, ..., m-1}.

A :class:`FiniteTable` stores all m**k values of a map with k arguments in
row-major order (last argument fastest), so the whole state space can be
analyzed: the first iterate becomes a map on m**k state indices, involutory
orders reduce to lcm-of-cycle-lengths questions, and induced-involution and
symmetry predicates are decided by enumeration.

Elements are 0-based integers.  Exhaustive operations check their problem
size against module-level budgets and raise :class:`BudgetError` rather
than start an infeasible computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .engine import KaryMap
from .errors import ArityError, BudgetError, ParseError

#: Largest number of states m**k an exhaustive per-table analysis will touch.
STATE_BUDGET = 10**6
#: Largest number of candidate tables an enumeration will generate.
CANDIDATE_BUDGET = 10**7


# ---------------------------------------------------------------------------
# state indexing

def state_index(state: Sequence[int], m: int) -> int:
    """Row-major index of a state tuple: sum of x_i * m**(k-1-i)."""
    idx = 0
    for x in state:
        if not 0 <= x < m:
            raise ValueError(f"component {x} out of range 0..{m - 1}")
        idx = idx * m + x
    return idx


def state_from_index(idx: int, m: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`state_index`."""
    if not 0 <= idx < m**k:
        raise ValueError(f"index {idx} out of range 0..{m ** k - 1}")
    out = []
    for _ in range(k):
        idx, r = divmod(idx, m)
        out.append(r)
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# the table itself

@dataclass(frozen=True, eq=False)
class FiniteTable:
    """Dense value table of a map {0..m-1}**k -> {0..m-1}."""

    m: int
    k: int
    entries: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise ValueError("m and k must both be >= 1")
        arr = np.ascontiguousarray(self.entries, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] != self.m**self.k:
            raise ValueError(
                f"expected {self.m ** self.k} entries, got {arr.size}"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= self.m):
            raise ValueError(f"entries must lie in 0..{self.m - 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_values(cls, m: int, k: int, values: Iterable[int]) -> "FiniteTable":
        return cls(m, k, np.fromiter(values, dtype=np.int64, count=m**k))

    @classmethod
    def from_function(cls, m: int, k: int, fn: Callable[..., int]) -> "FiniteTable":
        vals = [fn(*state_from_index(i, m, k)) for i in range(m**k)]
        return cls.from_values(m, k, vals)

    @property
    def n_states(self) -> int:
        return self.m**self.k

    def apply(self, state: Sequence[int]) -> int:
        if len(state) != self.k:
            raise ArityError(f"state length {len(state)} != arity {self.k}")
        return int(self.entries[state_index(state, self.m)])

    def as_map(self) -> KaryMap:
        return KaryMap(self.k, lambda s: self.apply(s), name=f"table{self.m}x{self.k}")

    def values(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.entries)

    def __eq__(self, other):
        if not isinstance(other, FiniteTable):
            return NotImplemented
        return (
            self.m == other.m
            and self.k == other.k
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.m, self.k, self.entries.tobytes()))

    def __repr__(self):
        return f"FiniteTable(m={self.m}, k={self.k}, entries={self.values()})"


def _check_state_budget(t: FiniteTable, budget: int | None) -> None:
    limit = STATE_BUDGET if budget is None else budget
    if t.n_states > limit:
        raise BudgetError(
            f"{t.n_states} states exceed the analysis budget of {limit}"
        )


# ---------------------------------------------------------------------------
# permutation structure of the first iterate

@dataclass(frozen=True)
class CycleReport:
    """Cycle decomposition of the first iterate over state indices.

    When the first iterate is bijective the cycles partition all indices and
    ``minimal_order`` (the lcm of the cycle lengths) is the smallest positive
    n with the n-th iterate equal to the identity.  Otherwise no positive
    involutory order exists: ``minimal_order`` is None and ``cycles`` lists
    only the genuinely cyclic states.
    """

    bijective: bool
    cycles: tuple[tuple[int, ...], ...]
    minimal_order: int | None
    per_point_period: dict[int, int] = field(compare=False)

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles), reverse=True))


def as_permutation(t: FiniteTable, budget: int | None = None) -> np.ndarray | None:
    """The first iterate as a permutation array, or None if not injective."""
    _check_state_budget(t, budget)
    perm, injective = _kernels.table_perm(t.entries, t.m, t.k)
    return np.asarray(perm) if injective else None


def _first_iterate_map(t: FiniteTable, budget: int | None = None) -> np.ndarray:
    _check_state_budget(t, budget)
    perm, _ = _kernels.table_perm(t.entries, t.m, t.k)
    return np.asarray(perm)


def _cyclic_states(perm: np.ndarray) -> np.ndarray:
    # strip states of in-degree zero repeatedly; what remains lies on cycles
    n = perm.shape[0]
    indeg = np.bincount(perm, minlength=n)
    queue = [int(i) for i in np.nonzero(indeg == 0)[0]]
    alive = np.ones(n, bool)
    while queue:
        v = queue.pop()
        alive[v] = False
        w = int(perm[v])
        indeg[w] -= 1
        if indeg[w] == 0 and alive[w]:
            queue.append(w)
    return alive


def cycle_report(t: FiniteTable, budget: int | None = None) -> CycleReport:
    """Decompose the first iterate into cycles over state indices.

    Cycles are listed by ascending smallest member and each starts at its
    smallest member, so the output is canonical.
    """
    perm = _first_iterate_map(t, budget)
    n = perm.shape[0]
    counts = np.bincount(perm, minlength=n)
    bijective = bool((counts == 1).all())
    on_cycle = (
        np.ones(n, bool) if bijective else _cyclic_states(perm)
    )
    cycles: list[tuple[int, ...]] = []
    periods: dict[int, int] = {}
    seen = np.zeros(n, bool)
    for s in range(n):
        if on_cycle[s] and not seen[s]:
            cyc = [s]
            seen[s] = True
            c = int(perm[s])
            while c != s:
                cyc.append(c)
                seen[c] = True
                c = int(perm[c])
            cycles.append(tuple(cyc))
            for idx in cyc:
                periods[idx] = len(cyc)
    minimal = math.lcm(*(len(c) for c in cycles)) if bijective else None
    return CycleReport(bijective, tuple(cycles), minimal, periods)


def is_n_involutory(t: FiniteTable, n: int, budget: int | None = None) -> bool:
    """True when the n-th iterate is the identity on every state.

    Decided as: the first iterate is bijective and its minimal order
    divides n.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    report = cycle_report(t, budget)
    return report.bijective and n % report.minimal_order == 0


def table_iterate(t: FiniteTable, state: Sequence[int], n: int) -> tuple[int, ...]:
    """n-th iterate at one state; negative n uses the inverse permutation."""
    if len(state) != t.k:
        raise ArityError(f"state length {len(state)} != arity {t.k}")
    idx = state_index(state, t.m)
    if n >= 0:
        perm = _first_iterate_map(t)
    else:
        fwd = as_permutation(t)
        if fwd is None:
            raise ValueError("negative iterates need a bijective first iterate")
        perm = np.empty_like(fwd)
        perm[fwd] = np.arange(fwd.shape[0])
        n = -n
    # follow the trajectory, shortcutting once it closes into a cycle
    first_seen: dict[int, int] = {}
    step = 0
    while step < n:
        if idx in first_seen:
            cycle_len = step - first_seen[idx]
            n = step + (n - step) % cycle_len
            if step == n:
                break
            first_seen.clear()
        else:
            first_seen[idx] = step
        idx = int(perm[idx])
        step += 1
    return state_from_index(idx, t.m, t.k)


# ---------------------------------------------------------------------------
# induced involutions, symmetry

def _contexts(m: int, count: int) -> Iterator[tuple[int, ...]]:
    ctx = [0] * count
    while True:
        yield tuple(ctx)
        pos = count - 1
        while pos >= 0:
            ctx[pos] += 1
            if ctx[pos] < m:
                break
            ctx[pos] = 0
            pos -= 1
        if pos < 0:
            return


def is_induced_involutory(
    t: FiniteTable, n: int, j: int | None = None, budget: int | None = None
) -> bool:
    """Check induced involutivity of order n.

    With ``j`` (1-based): for every frozen assignment of the other arguments,
    applying the induced self-map n times must return every element to
    itself.  Without ``j``: the same for every argument position.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if j is not None and not 1 <= j <= t.k:
        raise ValueError(f"argument position {j} out of range 1..{t.k}")
    _check_state_budget(t, budget)
    positions = [j - 1] if j is not None else list(range(t.k))
    entries, m, k = t.entries, t.m, t.k
    for pos in positions:
        stride = m ** (k - 1 - pos)
        for ctx in _contexts(m, k - 1):
            base = 0
            ci = 0
            for axis in range(k):
                base *= m
                if axis != pos:
                    base += ctx[ci]
                    ci += 1
            for x in range(m):
                v = x
                for _ in range(n):
                    v = int(entries[base + v * stride])
                if v != x:
                    return False
    return True


def is_symmetric(t: FiniteTable) -> bool:
    """True when the value is unchanged by any permutation of the arguments.

    Checked on adjacent transpositions only, which generate all permutations.
    """
    if t.k == 1:
        return True
    grid = t.entries.reshape((t.m,) * t.k)
    return all(
        np.array_equal(grid, grid.swapaxes(i, i + 1)) for i in range(t.k - 1)
    )


@dataclass(frozen=True)
class PropertyProfile:
    """Symmetry plus induced-involutivity flags for a table."""

    symmetric: bool
    ii_orders: dict[tuple[int, int], bool]  # (n, j) -> II-n in argument j
    ii: bool  # induced involutory: II-2 in every argument


def property_profile(
    t: FiniteTable, orders: Sequence[int] = (1, 2, 3, 4)
) -> PropertyProfile:
    orders = sorted(set(orders) | {2})
    flags = {
        (n, j): is_induced_involutory(t, n, j)
        for n in orders
        for j in range(1, t.k + 1)
    }
    ii = all(flags[(2, j)] for j in range(1, t.k + 1))
    return PropertyProfile(is_symmetric(t), flags, ii)


# ---------------------------------------------------------------------------
# constructions

def hat_id(m: int, k: int) -> FiniteTable:
    """The first-projection table; its first iterate is the identity."""
    if m < 1 or k < 1:
        raise ValueError("m and k must both be >= 1")
    return FiniteTable(m, k, np.repeat(np.arange(m, dtype=np.int64), m ** (k - 1)))


def _as_self_map(g: Sequence[int], m: int) -> np.ndarray:
    arr = np.ascontiguousarray(g, dtype=np.int64)
    if arr.shape != (m,):
        raise ValueError(f"expected a self-map table of length {m}")
    if arr.size and (arr.min() < 0 or arr.max() >= m):
        raise ValueError(f"self-map values must lie in 0..{m - 1}")
    return arr


def project_compose(g: Sequence[int], k: int, m: int | None = None) -> FiniteTable:
    """Table of (x1, ..., xk) -> g(x1) for an involution g on the domain.

    The resulting table satisfies ``is_n_involutory(result, 2)``.
    """
    m = len(g) if m is None else m
    arr = _as_self_map(g, m)
    if not np.array_equal(arr[arr], np.arange(m)):
        raise ValueError("g must satisfy g(g(x)) = x for every x")
    return FiniteTable(m, k, np.repeat(arr, m ** (k - 1)))


def conjugate(t: FiniteTable, g: Sequence[int]) -> FiniteTable:
    """Relabel the domain by a bijection g: new(y) = g^-1(f(g(y1), ..., g(yk))).

    Preserves every involutory order and the cycle-length multiset of the
    first iterate.
    """
    arr = _as_self_map(g, t.m)
    if np.unique(arr).size != t.m:
        raise ValueError("g must be a bijection")
    ginv = np.empty_like(arr)
    ginv[arr] = np.arange(t.m)
    grid = t.entries.reshape((t.m,) * t.k)
    conj = ginv[grid[np.ix_(*([arr] * t.k))]]
    return FiniteTable(t.m, t.k, conj.reshape(-1))


# ---------------------------------------------------------------------------
# involution counting and enumeration

def involutions(m: int) -> list[tuple[int, ...]]:
    """All involutions of {0..m-1} in ascending lexicographic order."""
    out: list[tuple[int, ...]] = []
    g = [-1] * m

    def fill(i: int) -> None:
        if i == m:
            out.append(tuple(g))
            return
        if g[i] >= 0:
            fill(i + 1)
            return
        for j in range(i, m):
            if j == i:
                g[i] = i
                fill(i + 1)
                g[i] = -1
            elif g[j] < 0:
                g[i], g[j] = j, i
                fill(i + 1)
                g[i] = g[j] = -1

    fill(0)
    return out


def count_involutions(m: int) -> int:
    """Number of involutions of an m-element set (the telephone numbers).

    Uses the recursion T(m) = T(m-1) + (m-1) * T(m-2); for small m the count
    is cross-checked against brute-force enumeration of all self-maps.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    a, b = 1, 1  # T(0), T(1)
    for i in range(2, m + 1):
        a, b = b, b + (i - 1) * a
    if m <= 5:
        brute = count_involutions_brute(m)
        assert brute == b, f"recursion {b} != brute force {brute} at m={m}"
    return b


def count_involutions_brute(m: int, budget: int = 5 * 10**7) -> int:
    """Count involutions by scanning all m**m self-maps."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m**m > budget:
        raise BudgetError(f"{m ** m} self-maps exceed the scan budget {budget}")
    return int(_kernels.involution_scan(m))


def iter_all_tables(m: int, k: int, budget: int | None = None) -> Iterator[FiniteTable]:
    """Every table on m symbols with k arguments, ascending row-major order."""
    n_states = m**k
    total = m**n_states
    limit = CANDIDATE_BUDGET if budget is None else budget
    if total > limit:
        raise BudgetError(f"{total} tables exceed the enumeration budget {limit}")
    entries = np.zeros(n_states, np.int64)
    for _ in range(total):
        yield FiniteTable(m, k, entries.copy())
        pos = n_states - 1
        while pos >= 0:
            entries[pos] += 1
            if entries[pos] < m:
                break
            entries[pos] = 0
            pos -= 1


def enumerate_ii_tables(
    m: int,
    k: int,
    state_budget: int | None = None,
    candidate_budget: int | None = None,
) -> Iterator[FiniteTable]:
    """All induced-involutory tables (involution in every argument, every
    context), in ascending row-major encoding order.

    Candidates are assembled so that the first argument's induced map is by
    construction one of the T(m) involutions for every frozen context; the
    remaining argument positions are then filtered.  This keeps the search at
    T(m)**(m**(k-1)) candidates instead of m**(m**k) raw tables.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must both be >= 1")
    n_states = m**k
    slimit = STATE_BUDGET if state_budget is None else state_budget
    if n_states > slimit:
        raise BudgetError(f"{n_states} states exceed the analysis budget {slimit}")
    invs = np.array(involutions(m), dtype=np.int64).reshape(-1, m)
    n_ctx = m ** (k - 1)
    total = invs.shape[0] ** n_ctx
    climit = CANDIDATE_BUDGET if candidate_budget is None else candidate_budget
    if total > climit:
        raise BudgetError(
            f"{total} candidate tables exceed the enumeration budget {climit}"
        )
    survivors: list[tuple[int, ...]] = []
    chunk = 1 << 15
    base = invs.shape[0]
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        choice = np.empty((ids.shape[0], n_ctx), np.int64)
        r = ids
        for pos in range(n_ctx - 1, -1, -1):
            choice[:, pos] = r % base
            r = r // base
        # tables[c, x1 * n_ctx + ctx] = chosen involution for ctx evaluated at x1
        tabs = invs[choice].transpose(0, 2, 1).reshape(-1, n_states)
        tabs = np.ascontiguousarray(tabs)
        mask = np.asarray(_kernels.ii_filter(tabs, m, k))
        survivors.extend(tuple(int(v) for v in row) for row in tabs[mask])
    survivors.sort()
    for row in survivors:
        yield FiniteTable.from_values(m, k, row)


# ---------------------------------------------------------------------------
# text format

def dumps_table(t: FiniteTable) -> str:
    """Serialize: header "m k", then all entries row-major."""
    lines = [f"{t.m} {t.k}"]
    vals = t.values()
    width = t.m
    for start in range(0, len(vals), width):
        lines.append(" ".join(str(v) for v in vals[start : start + width]))
    return "\n".join(lines) + "\n"


def loads_table(text: str) -> FiniteTable:
    """Parse the table text format.

    Lines whose first non-blank character is ``#`` are comments.  The first
    data line must hold the two integers m and k; the following tokens are
    the m**k values in row-major order (last argument fastest).
    """
    tokens: list[tuple[str, int, int]] = []
    header: tuple[int, int] | None = None
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 2:
                raise ParseError("header must be two integers: m k", ln, 1)
            try:
                m, k = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("header must be two integers: m k", ln, 1) from None
            if m < 1 or k < 1:
                raise ParseError("m and k must both be >= 1", ln, 1)
            header = (m, k)
            continue
        col = 1
        for tok in line.split():
            col = line.index(tok, col - 1) + 1
            tokens.append((tok, ln, col))
            col += len(tok)
    if header is None:
        raise ParseError("missing header line")
    m, k = header
    expected = m**k
    if len(tokens) != expected:
        raise ParseError(
            f"expected {expected} values for m={m}, k={k}, found {len(tokens)}",
            tokens[-1][1] if tokens else 1,
            tokens[-1][2] if tokens else 1,
        )
    values = []
    for tok, ln, col in tokens:
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"bad value {tok!r}", ln, col) from None
        if not 0 <= v < m:
            raise ParseError(f"value {v} out of range 0..{m - 1}", ln, col)
        values.append(v)
    return FiniteTable.from_values(m, k, values)


def load_table(path) -> FiniteTable:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_table(fh.read())


def dump_table(t: FiniteTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_table(t))
