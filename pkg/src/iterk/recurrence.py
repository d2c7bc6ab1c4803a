"""Sequence-level view of a k-argument map: generate the order-k recurrence
it represents, detect cycles, and relate sequence periods to point periods
of the first iterate.

The binding contract with the engine is the window identity: the terms at
positions nk+1 .. nk+k (1-based) of the generated sequence equal the n-th
iterate of the seed.  For a state s whose orbit under the first iterate is a
cycle of length n, the seeded sequence is purely periodic and its minimal
period j divides n*k; the checker records how j relates to n (j | n versus
j | n*k) rather than asserting one reading, and separately verifies
n = j / gcd(j, k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .engine import Element, KaryMap, first_iterate, iterate as engine_iterate
from .errors import ArityError, BudgetError
from .tables import FiniteTable, cycle_report, state_from_index

#: Largest number of tables a full sweep will visit.
SWEEP_BUDGET = 10**7

#: Default search horizon (in sequence terms) for period detection.
DETECT_BOUND = 10_000


@dataclass(frozen=True)
class RecurrenceSpec:
    """A k-argument map together with the k seed terms of its recurrence."""

    map: KaryMap
    seed: tuple

    def __post_init__(self):
        if len(self.seed) != self.map.arity:
            raise ArityError(
                f"seed length {len(self.seed)} != map arity {self.map.arity}"
            )


@dataclass(frozen=True)
class CycleFinding:
    """Minimal eventual period of a generated sequence.

    ``minimal_period`` is None when no repetition was found within the
    search bound.  ``preperiod`` is the first index (0-based) from which the
    periodicity holds; ``witness_index`` is the first index of the repeated
    block, i.e. preperiod + minimal_period.
    """

    minimal_period: int | None
    preperiod: int
    witness_index: int | None


def generate(spec: RecurrenceSpec, count: int) -> list[Element]:
    """First ``count`` terms, starting with the seed tuple."""
    k = spec.map.arity
    if count < k:
        raise ValueError(f"count must be >= the arity {k}, got {count}")
    terms = list(spec.seed)
    for _ in range(count - k):
        terms.append(spec.map.apply(terms[-k:]))
    return terms


def consistency_check(spec: RecurrenceSpec, n: int) -> bool:
    """Window identity: terms nk+1 .. nk+k equal the n-th iterate of the seed."""
    if n < 0:
        raise ValueError(f"iterate count must be >= 0, got {n}")
    k = spec.map.arity
    terms = generate(spec, (n + 1) * k)
    window = tuple(terms[n * k : (n + 1) * k])
    return window == engine_iterate(spec.map, spec.seed, n)


def _minimal_sequence_period(terms: Sequence[Element], start: int, full: int) -> int:
    # terms[start:] is periodic with period `full`; the minimal period is a
    # divisor of it, found by direct window comparison
    for d in range(1, full + 1):
        if full % d == 0 and all(
            terms[start + i] == terms[start + i + d] for i in range(full)
        ):
            return d
    raise AssertionError("period window did not confirm its own length")


def detect_minimal_period(
    spec: RecurrenceSpec, bound: int = DETECT_BOUND
) -> CycleFinding:
    """Minimal eventual period of the generated sequence.

    The state orbit is walked in strides of k until a state recurs (elements
    must be hashable); the state period then bounds the sequence period,
    whose minimal value is read off the materialized terms directly.
    Returns an absent period if no state recurs within ``bound`` terms.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    k = spec.map.arity
    seen: dict[tuple, int] = {}
    state = tuple(spec.seed)
    step = 0
    while (step + 1) * k <= bound:
        if state in seen:
            break
        seen[state] = step
        state = first_iterate(spec.map, state)
        step += 1
    if state not in seen:
        return CycleFinding(None, 0, None)
    rho, p = seen[state], step - seen[state]
    start, full = rho * k, p * k
    terms = generate(spec, start + 2 * full)
    j = _minimal_sequence_period(terms, start, full)
    r = start
    while r > 0 and terms[r - 1] == terms[r - 1 + j]:
        r -= 1
    return CycleFinding(j, r, r + j)


# ---------------------------------------------------------------------------
# correspondence between point periods and sequence periods

@dataclass(frozen=True)
class CorrespondenceRow:
    """Measurements for one cyclic state of a finite table."""

    state_index: int
    state: tuple[int, ...]
    state_period: int
    sequence_period: int

    @property
    def direction1_ok(self) -> bool:
        # state period equals sequence period / gcd(sequence period, k)
        k = len(self.state)
        return self.state_period == self.sequence_period // math.gcd(
            self.sequence_period, k
        )

    @property
    def j_divides_n(self) -> bool:
        return self.state_period % self.sequence_period == 0

    @property
    def j_divides_nk(self) -> bool:
        return (self.state_period * len(self.state)) % self.sequence_period == 0


@dataclass(frozen=True)
class CorrespondenceReport:
    """Per-state rows plus tallies for one table."""

    bijective: bool
    rows: tuple[CorrespondenceRow, ...]

    @property
    def states_checked(self) -> int:
        return len(self.rows)

    @property
    def direction1_violations(self) -> int:
        return sum(not r.direction1_ok for r in self.rows)

    @property
    def j_divides_n_count(self) -> int:
        return sum(r.j_divides_n for r in self.rows)

    @property
    def j_divides_nk_violations(self) -> int:
        return sum(not r.j_divides_nk for r in self.rows)


def cycle_correspondence_report(t: FiniteTable) -> CorrespondenceReport:
    """For every state on a cycle of the first iterate: its state period n,
    the minimal period j of the sequence seeded there, and the divisibility
    relations between the two."""
    rep = cycle_report(t)
    fmap = t.as_map()
    rows = []
    for idx in sorted(rep.per_point_period):
        n_p = rep.per_point_period[idx]
        seed = state_from_index(idx, t.m, t.k)
        spec = RecurrenceSpec(fmap, seed)
        full = n_p * t.k
        terms = generate(spec, 2 * full)
        j = _minimal_sequence_period(terms, 0, full)
        rows.append(CorrespondenceRow(idx, seed, n_p, j))
    return CorrespondenceReport(rep.bijective, tuple(rows))


@dataclass(frozen=True)
class SweepTallies:
    """Aggregated correspondence results over every table of a given shape."""

    m: int
    k: int
    tables: int
    bijective_tables: int
    cyclic_states: int
    direction1_violations: int
    j_divides_n_count: int
    j_divides_n_failures: int
    j_divides_nk_violations: int


def cycle_correspondence_sweep(
    m: int, k: int, budget: int | None = None
) -> SweepTallies:
    """Run :func:`cycle_correspondence_report` logic over all m**(m**k)
    tables whose first iterate is bijective, returning only tallies."""
    if m < 1 or k < 1:
        raise ValueError("m and k must both be >= 1")
    limit = SWEEP_BUDGET if budget is None else budget
    total = m ** (m**k)
    if total > limit:
        raise BudgetError(f"{total} tables exceed the sweep budget {limit}")
    t = np.asarray(_kernels.cycle_sweep(m, k))
    return SweepTallies(m, k, *(int(v) for v in t))


# ---------------------------------------------------------------------------
# arity augmentation

def augment(f: KaryMap, target_arity: int) -> KaryMap:
    """Lift a k-argument map to more arguments without changing the
    recurrence it represents.

    The lifted map forward-fills from its first k arguments using the
    original recurrence rule and then evaluates the original map on the last
    k filled values; the extra trailing arguments are thereby replaced by
    the values the recurrence forces for them.
    """
    k = f.arity
    if target_arity <= k:
        raise ArityError(
            f"target arity must exceed the original arity {k}, got {target_arity}"
        )

    def fn(state):
        tilde = list(state[:k])
        for _ in range(target_arity - k):
            tilde.append(f.apply(tuple(tilde[-k:])))
        return f.apply(tuple(tilde[-k:]))

    return KaryMap(target_arity, fn, name=f"{f.name or 'map'}~{target_arity}")
