"""Recursive-descent parser for map definitions over the rationals and
roots-of-unity extensions.

Grammar (whitespace-insensitive; ``*`` is required for products):

    def      := "f" "(" var ("," var)* ")" "=" expr
    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := rational | "zeta" "(" int ")" ["^" int]
              | var | "(" expr ")" | "-" factor
    var      := "x" int
    rational := int ["/" int]

Declared variables must be x1..xk in order.  The scalar field is inferred:
rational unless ``zeta`` literals occur, in which case all values live in
the field of the least common multiple of the root orders.  Every error is
reported as :class:`ParseError` with a line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

from .affine import AffineMapSpec
from .engine import KaryMap
from .errors import NonAffineError, ParseError
from .exactnum import (
    MAX_ROOT_ORDER,
    CyclotomicField,
    Field,
    RationalField,
)

# --- abstract syntax -------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class RationalLit:
    value: Fraction


@dataclass(frozen=True)
class ZetaLit:
    order: int
    power: int


@dataclass(frozen=True)
class Neg:
    operand: "MapExpr"


@dataclass(frozen=True)
class Add:
    left: "MapExpr"
    right: "MapExpr"


@dataclass(frozen=True)
class Sub:
    left: "MapExpr"
    right: "MapExpr"


@dataclass(frozen=True)
class Mul:
    left: "MapExpr"
    right: "MapExpr"


@dataclass(frozen=True)
class Group:
    inner: "MapExpr"


MapExpr = Union[Var, RationalLit, ZetaLit, Neg, Add, Sub, Mul, Group]


@dataclass(frozen=True)
class MapDef:
    arity: int
    expr: MapExpr

    def zeta_orders(self) -> frozenset[int]:
        return frozenset(_zeta_orders(self.expr))

    def field(self) -> Field:
        orders = self.zeta_orders()
        if not orders:
            return RationalField()
        return CyclotomicField(lcm(*orders))


def _zeta_orders(expr: MapExpr) -> set[int]:
    if isinstance(expr, ZetaLit):
        return {expr.order}
    if isinstance(expr, Neg):
        return _zeta_orders(expr.operand)
    if isinstance(expr, Group):
        return _zeta_orders(expr.inner)
    if isinstance(expr, (Add, Sub, Mul)):
        return _zeta_orders(expr.left) | _zeta_orders(expr.right)
    return set()


# --- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\d+|[A-Za-z_][A-Za-z_0-9]*|[()+\-*/^,=]")


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "name", or the punctuation character itself
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            col = 1
            pos += 1
            continue
        if ch.isspace():
            col += 1
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", line, col)
        lexeme = m.group()
        if lexeme[0].isdigit():
            kind = "int"
        elif lexeme[0].isalpha() or lexeme[0] == "_":
            kind = "name"
        else:
            kind = lexeme
        tokens.append(_Token(kind, lexeme, line, col))
        col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


# --- parser ----------------------------------------------------------------

_MAX_DEPTH = 200


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.current
        self.pos += 1
        return tok

    def _fail(self, message: str):
        tok = self.current
        raise ParseError(message, tok.line, tok.column)

    def _expect(self, kind: str, what: str) -> _Token:
        if self.current.kind != kind:
            got = self.current.text or "end of input"
            self._fail(f"expected {what}, found {got!r}")
        return self._advance()

    def _accept(self, kind: str) -> _Token | None:
        if self.current.kind == kind:
            return self._advance()
        return None

    # grammar rules

    def map_def(self) -> MapDef:
        name = self._expect("name", "'f'")
        if name.text != "f":
            raise ParseError(
                f"definitions must be named 'f', found {name.text!r}",
                name.line,
                name.column,
            )
        self._expect("(", "'('")
        arity = 0
        while True:
            arity += 1
            var = self._expect("name", f"variable 'x{arity}'")
            if var.text != f"x{arity}":
                raise ParseError(
                    f"declared variables must be x1..xk in order,"
                    f" expected 'x{arity}', found {var.text!r}",
                    var.line,
                    var.column,
                )
            if not self._accept(","):
                break
        self._expect(")", "')' or ','")
        self._expect("=", "'='")
        body = self.expr(arity)
        if self.current.kind != "eof":
            self._fail(f"unexpected trailing input {self.current.text!r}")
        return MapDef(arity, body)

    def expr(self, arity: int) -> MapExpr:
        node = self.term(arity)
        while self.current.kind in ("+", "-"):
            op = self._advance()
            rhs = self.term(arity)
            node = Add(node, rhs) if op.kind == "+" else Sub(node, rhs)
        return node

    def term(self, arity: int) -> MapExpr:
        node = self.factor(arity)
        while self._accept("*"):
            node = Mul(node, self.factor(arity))
        return node

    def factor(self, arity: int) -> MapExpr:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            self._fail("expression nested too deeply")
        try:
            tok = self.current
            if tok.kind == "-":
                self._advance()
                return Neg(self.factor(arity))
            if tok.kind == "(":
                self._advance()
                inner = self.expr(arity)
                self._expect(")", "')'")
                return Group(inner)
            if tok.kind == "int":
                return self.rational()
            if tok.kind == "name":
                if tok.text == "zeta":
                    return self.zeta()
                m = re.fullmatch(r"x(\d+)", tok.text)
                if m:
                    index = int(m.group(1))
                    if not 1 <= index <= arity:
                        raise ParseError(
                            f"undeclared variable {tok.text!r}"
                            f" (declared arity {arity})",
                            tok.line,
                            tok.column,
                        )
                    self._advance()
                    return Var(index)
                self._fail(f"unknown name {tok.text!r}")
            self._fail(
                f"expected a value, found {tok.text!r}" if tok.text else "unexpected end of input"
            )
        finally:
            self.depth -= 1

    def rational(self) -> RationalLit:
        num = self._expect("int", "an integer")
        if self._accept("/"):
            den = self._expect("int", "a denominator")
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.line, den.column)
            return RationalLit(Fraction(int(num.text), int(den.text)))
        return RationalLit(Fraction(int(num.text)))

    def zeta(self) -> ZetaLit:
        self._expect("name", "'zeta'")
        self._expect("(", "'('")
        order_tok = self._expect("int", "a root order")
        order = int(order_tok.text)
        if not 1 <= order <= MAX_ROOT_ORDER:
            raise ParseError(
                f"root order {order} outside supported range 1..{MAX_ROOT_ORDER}",
                order_tok.line,
                order_tok.column,
            )
        self._expect(")", "')'")
        power = 1
        if self._accept("^"):
            power = int(self._expect("int", "an exponent").text)
        return ZetaLit(order, power)


def parse_map_def(text: str) -> MapDef:
    """Parse a definition like ``f(x1,x2) = x1 + 2*x2 - 1/3``."""
    return _Parser(text).map_def()


def parse_scalar(text: str) -> MapExpr:
    """Parse a single constant expression (no variables)."""
    p = _Parser(text)
    node = p.expr(arity=0)
    if p.current.kind != "eof":
        p._fail(f"unexpected trailing input {p.current.text!r}")
    return node


def parse_seed(text: str) -> list[MapExpr]:
    """Parse a comma-separated list of constant expressions."""
    p = _Parser(text)
    exprs = [p.expr(arity=0)]
    while p._accept(","):
        exprs.append(p.expr(arity=0))
    if p.current.kind != "eof":
        p._fail(f"unexpected trailing input {p.current.text!r}")
    return exprs


# --- rendering -------------------------------------------------------------

def render(expr: MapExpr) -> str:
    """Canonical text form; reparsing it reproduces the same tree for any
    tree the parser itself produced."""
    if isinstance(expr, Var):
        return f"x{expr.index}"
    if isinstance(expr, RationalLit):
        v = expr.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(expr, ZetaLit):
        base = f"zeta({expr.order})"
        return base if expr.power == 1 else f"{base}^{expr.power}"
    if isinstance(expr, Neg):
        return f"-{_render_wrapped(expr.operand, atom=True)}"
    if isinstance(expr, Add):
        return f"{render(expr.left)} + {_render_wrapped(expr.right)}"
    if isinstance(expr, Sub):
        return f"{render(expr.left)} - {_render_wrapped(expr.right)}"
    if isinstance(expr, Mul):
        return f"{_render_wrapped(expr.left)} * {_render_wrapped(expr.right, atom=True)}"
    if isinstance(expr, Group):
        return f"({render(expr.inner)})"
    raise TypeError(f"not a map expression: {expr!r}")


def _render_wrapped(expr: MapExpr, atom: bool = False) -> str:
    # parenthesize when the node would not reparse in this position
    needs = isinstance(expr, (Add, Sub)) or (atom and isinstance(expr, Mul))
    text = render(expr)
    return f"({text})" if needs else text


def render_def(d: MapDef) -> str:
    vars_ = ",".join(f"x{i}" for i in range(1, d.arity + 1))
    return f"f({vars_}) = {render(d.expr)}"


# --- evaluation and affine extraction --------------------------------------

def _eval_scalar_expr(expr: MapExpr, field: Field):
    if isinstance(expr, RationalLit):
        return field.coerce(expr.value)
    if isinstance(expr, ZetaLit):
        if isinstance(field, RationalField):
            raise ParseError("root-of-unity literal in a rational context")
        return field.coerce(
            CyclotomicField(expr.order).zeta(expr.power)
        )
    if isinstance(expr, Neg):
        return -_eval_scalar_expr(expr.operand, field)
    if isinstance(expr, Group):
        return _eval_scalar_expr(expr.inner, field)
    if isinstance(expr, Add):
        return _eval_scalar_expr(expr.left, field) + _eval_scalar_expr(expr.right, field)
    if isinstance(expr, Sub):
        return _eval_scalar_expr(expr.left, field) - _eval_scalar_expr(expr.right, field)
    if isinstance(expr, Mul):
        return _eval_scalar_expr(expr.left, field) * _eval_scalar_expr(expr.right, field)
    if isinstance(expr, Var):
        raise ParseError("variables are not allowed in a constant expression")
    raise TypeError(f"not a map expression: {expr!r}")


def eval_scalar(expr: MapExpr, field: Field | None = None):
    """Constant-fold a scalar expression into a field element."""
    if field is None:
        orders = _zeta_orders(expr)
        field = CyclotomicField(lcm(*orders)) if orders else RationalField()
    return _eval_scalar_expr(expr, field)


def to_kary_map(d: MapDef, field: Field | None = None) -> KaryMap:
    """Evaluate the definition as an engine map (non-affine bodies allowed)."""
    fld = d.field() if field is None else field

    def eval_node(expr: MapExpr, state):
        if isinstance(expr, Var):
            return state[expr.index - 1]
        if isinstance(expr, Neg):
            return -eval_node(expr.operand, state)
        if isinstance(expr, Group):
            return eval_node(expr.inner, state)
        if isinstance(expr, Add):
            return eval_node(expr.left, state) + eval_node(expr.right, state)
        if isinstance(expr, Sub):
            return eval_node(expr.left, state) - eval_node(expr.right, state)
        if isinstance(expr, Mul):
            return eval_node(expr.left, state) * eval_node(expr.right, state)
        return _eval_scalar_expr(expr, fld)

    return KaryMap(d.arity, lambda s: eval_node(d.expr, s), name="parsed")


def to_affine(d: MapDef, field: Field | None = None) -> AffineMapSpec:
    """Extract exact affine form; reject anything of higher degree."""
    fld = d.field() if field is None else field
    zero = fld.zero()

    def walk(expr: MapExpr) -> tuple[list, object]:
        if isinstance(expr, Var):
            coeffs = [zero] * d.arity
            coeffs[expr.index - 1] = fld.one()
            return coeffs, zero
        if isinstance(expr, Neg):
            c, a = walk(expr.operand)
            return [-v for v in c], -a
        if isinstance(expr, Group):
            return walk(expr.inner)
        if isinstance(expr, (Add, Sub)):
            cl, al = walk(expr.left)
            cr, ar = walk(expr.right)
            if isinstance(expr, Sub):
                cr, ar = [-v for v in cr], -ar
            return [x + y for x, y in zip(cl, cr)], al + ar
        if isinstance(expr, Mul):
            cl, al = walk(expr.left)
            cr, ar = walk(expr.right)
            lvars = any(v != zero for v in cl)
            rvars = any(v != zero for v in cr)
            if lvars and rvars:
                raise NonAffineError(
                    "definition is not affine: product of two"
                    " variable-bearing expressions"
                )
            if lvars:
                return [v * ar for v in cl], al * ar
            return [al * v for v in cr], al * ar
        return [zero] * d.arity, _eval_scalar_expr(expr, fld)

    coeffs, const = walk(d.expr)
    return AffineMapSpec(d.arity, tuple(coeffs), const, fld)
