"""Exact scalar arithmetic: integers, rationals, and roots of unity.

Rationals are stdlib :class:`fractions.Fraction` values (always in lowest
terms, positive denominator).  Roots of unity live in the field obtained by
adjoining a primitive n-th root ``z`` to the rationals; elements are stored
as polynomial residues in ``z`` modulo the n-th cyclotomic polynomial, so
equality is exact and order checks are honest equality tests rather than
floating-point tolerances.

All values in one computation must share a single root order n; callers mix
orders by embedding into a common multiple first (``z_a -> z_lcm^(lcm/a)``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .errors import BudgetError, ParseError

#: Largest root order for which the reduction modulus is computed.
MAX_ROOT_ORDER = 64


def fibonacci(n: int) -> int:
    """n-th Fibonacci number with F0 = 0 and F1 = 1."""
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


# ---------------------------------------------------------------------------
# integer polynomials (ascending coefficient lists) -- just enough machinery
# to construct cyclotomic polynomials by exact division

def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_div_int(num: list[int], den: list[int]) -> list[int]:
    # den is monic; division must be exact here
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    assert all(c == 0 for c in num[:dd]), "non-exact polynomial division"
    return out


@dataclass(frozen=True)
class CycloPolynomial:
    """The n-th cyclotomic polynomial: monic, integer, divides x^n - 1."""

    order: int
    coefficients: tuple[int, ...]  # ascending powers

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> CycloPolynomial:
    """Compute the n-th cyclotomic polynomial.

    Divides x^n - 1 by the product of the polynomials of all proper divisors
    of n; every step is exact integer arithmetic.
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n > MAX_ROOT_ORDER:
        raise BudgetError(
            f"root order {n} exceeds the supported bound {MAX_ROOT_ORDER}"
        )
    if n == 1:
        return CycloPolynomial(1, (-1, 1))
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul_int(den, list(cyclotomic_polynomial(d).coefficients))
    return CycloPolynomial(n, tuple(_poly_div_int(num, den)))


def _reduce(order: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(order).coefficients
    deg = len(phi) - 1
    coeffs = list(coeffs)
    if len(coeffs) < deg:
        coeffs += [Fraction(0)] * (deg - len(coeffs))
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            for j, pj in enumerate(phi):
                coeffs[i - deg + j] -= c * pj
        coeffs[i] = Fraction(0)
    return tuple(coeffs[:deg])


def _poly_xgcd(
    a: list[Fraction], b: list[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    """Return (g, s) with s*a = g (mod b) and g the monic gcd of a and b."""

    def deg(p):
        d = len(p) - 1
        while d >= 0 and p[d] == 0:
            d -= 1
        return d

    def divmod_frac(num, den):
        num = list(num)
        dd = deg(den)
        lead = den[dd]
        q = [Fraction(0)] * max(deg(num) - dd + 1, 1)
        for i in range(deg(num), dd - 1, -1):
            c = num[i] / lead
            q[i - dd] = c
            if c:
                for j in range(dd + 1):
                    num[i - dd + j] -= c * den[j]
        return q, num

    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], [Fraction(0)]
    while deg(r1) >= 0:
        q, r = divmod_frac(r0, r1)
        qs = _poly_mul_frac(q, s1)
        s_new = [x - y for x, y in _zip_pad(s0, qs)]
        r0, r1 = r1, r
        s0, s1 = s1, s_new
    d = deg(r0)
    lead = r0[d]
    g = [c / lead for c in r0[: d + 1]]
    s = [c / lead for c in s0]
    return g, s


def _poly_mul_frac(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1 if a and b else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _zip_pad(a: list[Fraction], b: list[Fraction]):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return zip(a, b)


@dataclass(frozen=True)
class CyclotomicNumber:
    """Element of the rationals extended by a primitive ``order``-th root of unity.

    ``coeffs`` is the canonical residue: ascending powers of the root, length
    equal to the degree of the reduction modulus.  Arithmetic between two
    values requires equal orders; use :meth:`embed` to move into a larger
    field first.  Ints and Fractions mix freely as constants.
    """

    order: int
    coeffs: tuple[Fraction, ...]

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, value, order: int = 1) -> "CyclotomicNumber":
        q = Fraction(value)
        deg = cyclotomic_polynomial(order).degree
        return cls(order, (q,) + (Fraction(0),) * (deg - 1))

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        return cls.from_rational(0, order)

    @classmethod
    def one(cls, order: int) -> "CyclotomicNumber":
        return cls.from_rational(1, order)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CyclotomicNumber":
        """The primitive root raised to ``power`` (any integer)."""
        power %= order
        coeffs = [Fraction(0)] * (power + 1)
        coeffs[power] = Fraction(1)
        return cls(order, _reduce(order, coeffs))

    # -- helpers ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(
                    f"mixed root orders {self.order} and {other.order}; embed first"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(other, self.order)
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def embed(self, order: int) -> "CyclotomicNumber":
        """Re-express this value in the field of a multiple root order."""
        if order % self.order != 0:
            raise ValueError(f"{order} is not a multiple of {self.order}")
        if order == self.order:
            return self
        step = order // self.order
        out = [Fraction(0)] * (len(self.coeffs) * step)
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return CyclotomicNumber(order, _reduce(order, out))

    # -- field operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CyclotomicNumber(
            self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = _poly_mul_frac(list(self.coeffs), list(other.coeffs))
        return CyclotomicNumber(self.order, _reduce(self.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended gcd with the modulus."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order).coefficients]
        g, s = _poly_xgcd(list(self.coeffs), phi)
        if len(g) != 1:
            # cannot happen: the modulus is irreducible over the rationals
            raise ArithmeticError("residue shares a factor with the modulus")
        return CyclotomicNumber(self.order, _reduce(self.order, s))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        e = abs(exponent)
        acc = CyclotomicNumber.one(self.order)
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def equals(self, other: "CyclotomicNumber") -> bool:
        """Equality of two values of the same order; mixed orders are an error."""
        if not isinstance(other, CyclotomicNumber):
            raise TypeError(f"expected CyclotomicNumber, got {type(other)!r}")
        if other.order != self.order:
            raise ValueError(
                f"mixed root orders {self.order} and {other.order}; embed first"
            )
        return self.coeffs == other.coeffs

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        """Canonical polynomial string in ``z``, e.g. ``-1/2*z + 3``."""
        terms = []
        for p in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[p]
            if c == 0:
                continue
            if p == 0:
                terms.append(str(c))
            else:
                base = "z" if p == 1 else f"z^{p}"
                if c == 1:
                    terms.append(base)
                elif c == -1:
                    terms.append(f"-{base}")
                else:
                    terms.append(f"{c}*{base}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {self.render()!r})"


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?: (?P<num>\d+)(?:/(?P<den>\d+))? (?:\s*\*\s*(?P<zc>z(?:\^(?P<powc>\d+))?))?
          | (?P<z>z(?:\^(?P<pow>\d+))?) )\s*""",
    re.VERBOSE,
)


def parse_cyclo(text: str, order: int) -> CyclotomicNumber:
    """Parse the output of :meth:`CyclotomicNumber.render` back, losslessly.

    The order is not part of the rendering, so it must be supplied.
    """
    pos = 0
    total = CyclotomicNumber.zero(order)
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"bad term in value {text!r}", column=pos + 1)
        if not first and m.group("sign") is None:
            raise ParseError("missing + or - between terms", column=pos + 1)
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("z"):
            coeff = Fraction(1)
            power = int(m.group("pow") or 1)
        else:
            den = int(m.group("den") or 1)
            if den == 0:
                raise ParseError("zero denominator", column=pos + 1)
            coeff = Fraction(int(m.group("num")), den)
            power = 0
            if m.group("zc"):
                power = int(m.group("powc") or 1)
        term = CyclotomicNumber.zeta(order, power) * coeff * sign
        total = total + term
        pos = m.end()
        first = False
    if first:
        raise ParseError("empty value")
    return total


# ---------------------------------------------------------------------------
# scalar field descriptors, used by the affine layer and the parser

@dataclass(frozen=True)
class RationalField:
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, value):
        if isinstance(value, CyclotomicNumber):
            return value.rational_value()
        return Fraction(value)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class CyclotomicField:
    order: int

    def zero(self):
        return CyclotomicNumber.zero(self.order)

    def one(self):
        return CyclotomicNumber.one(self.order)

    def zeta(self, power: int = 1):
        return CyclotomicNumber.zeta(self.order, power)

    def coerce(self, value):
        if isinstance(value, CyclotomicNumber):
            return value.embed(self.order)
        return CyclotomicNumber.from_rational(value, self.order)

    def __str__(self):
        return f"Q(zeta{self.order})"


Field = RationalField | CyclotomicField


def join_fields(a: Field, b: Field) -> Field:
    """Smallest common field containing both operand fields."""
    orders = [f.order for f in (a, b) if isinstance(f, CyclotomicField)]
    if not orders:
        return RationalField()
    return CyclotomicField(lcm(*orders))
