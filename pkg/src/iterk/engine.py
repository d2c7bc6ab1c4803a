"""Reference iteration semantics for maps of k arguments.

A map ``f`` taking k arguments and returning one value represents the
order-k recurrence ``a[n+k] = f(a[n], ..., a[n+k-1])``.  Its first iterate
is the self-map on k-tuples that advances the recurrence by k terms:

    component 1:  f(x1, x2, ..., xk)
    component 2:  f(x2, ..., xk, c1)
    ...
    component j:  f(xj, ..., xk, c1, ..., c[j-1])

where ``c1, ..., c[j-1]`` are the components already produced.  Higher
iterates are ordinary compositions of the first iterate, so the usual
addition and multiplication rules for iteration exponents hold.

States are plain tuples; elements may come from any domain with decidable
equality (ints, Fractions, cyclotomic numbers, ...).  Everything here is a
pure function over immutable values.  This module deliberately iterates one
step at a time; fast paths for special map families live elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import ArityError

Element = Any
State = tuple


@dataclass(frozen=True)
class KaryMap:
    """A total, deterministic map from k-tuples to single elements.

    ``fn`` receives the full argument tuple.  ``name`` is cosmetic and
    ignored by equality-sensitive code.
    """

    arity: int
    fn: Callable[[State], Element]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError(f"arity must be >= 1, got {self.arity}")

    def apply(self, args: Sequence[Element]) -> Element:
        return self.fn(tuple(args))


@dataclass(frozen=True)
class InducedContext:
    """One free argument position (1-based) plus frozen values for the rest.

    ``fixed`` lists the k-1 frozen values in argument order, skipping the
    free position.
    """

    position: int
    fixed: tuple


@dataclass(frozen=True)
class Orbit:
    """Trajectory of a state under the first iterate.

    ``recurred`` is set when the next step would reproduce the start state,
    i.e. the trajectory is a cycle through its first entry.
    """

    states: tuple[State, ...]
    recurred: bool


def _check_state(f: KaryMap, state: Sequence[Element]) -> State:
    state = tuple(state)
    if len(state) != f.arity:
        raise ArityError(
            f"state has {len(state)} elements but map has arity {f.arity}"
        )
    return state


def first_iterate(f: KaryMap, state: Sequence[Element]) -> State:
    """Advance the represented recurrence by k terms.

    Component j consumes the trailing k-j+1 input elements followed by the
    j-1 components already computed.
    """
    state = _check_state(f, state)
    out: list[Element] = []
    for j in range(f.arity):
        out.append(f.apply(state[j:] + tuple(out)))
    return tuple(out)


def iterate(f: KaryMap, state: Sequence[Element], n: int) -> State:
    """n-fold composition of :func:`first_iterate`; ``n = 0`` is the identity."""
    state = _check_state(f, state)
    if n < 0:
        raise ValueError(f"iterate count must be >= 0, got {n}")
    for _ in range(n):
        state = first_iterate(f, state)
    return state


def orbit(f: KaryMap, state: Sequence[Element], max_steps: int) -> Orbit:
    """Collect ``state, f1(state), ...`` up to ``max_steps`` entries.

    Stops early, with ``recurred`` set, as soon as the next state would equal
    the start state again.
    """
    state = _check_state(f, state)
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    states = [state]
    current = state
    for _ in range(max_steps):
        current = first_iterate(f, current)
        if current == state:
            return Orbit(tuple(states), True)
        if len(states) == max_steps:
            break
        states.append(current)
    return Orbit(tuple(states), False)


def point_involutory_order(
    f: KaryMap, state: Sequence[Element], bound: int
) -> int | None:
    """Smallest n in 1..bound with the n-th iterate fixing ``state``, else None."""
    state = _check_state(f, state)
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    current = state
    for n in range(1, bound + 1):
        current = first_iterate(f, current)
        if current == state:
            return n
    return None


def induced_self_map(f: KaryMap, ctx: InducedContext) -> Callable[[Element], Element]:
    """Freeze all arguments but one, yielding a self-map on the element domain."""
    j = ctx.position
    if not 1 <= j <= f.arity:
        raise ArityError(f"position {j} out of range for arity {f.arity}")
    fixed = tuple(ctx.fixed)
    if len(fixed) != f.arity - 1:
        raise ArityError(
            f"expected {f.arity - 1} fixed values, got {len(fixed)}"
        )
    before, after = fixed[: j - 1], fixed[j - 1 :]

    def induced(t: Element) -> Element:
        return f.apply(before + (t,) + after)

    return induced
