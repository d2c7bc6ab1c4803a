"""Definition grammar: parsing, rendering, affine extraction, fuzz safety."""

import random
import string
from fractions import Fraction

import pytest

from iterk.errors import NonAffineError, ParseError
from iterk.exactnum import CyclotomicField, RationalField
from iterk.parser import (
    Add,
    Group,
    MapDef,
    Mul,
    Neg,
    RationalLit,
    Sub,
    Var,
    eval_scalar,
    parse_map_def,
    parse_scalar,
    parse_seed,
    render,
    render_def,
    to_affine,
    to_kary_map,
)


class TestParseMapDef:
    def test_pair_sum(self):
        d = parse_map_def("f(x1,x2) = x1 + x2")
        assert d.arity == 2
        assert d.expr == Add(Var(1), Var(2))
        assert d.field() == RationalField()

    def test_sum_map_with_constant(self):
        d = parse_map_def("f(x1,x2,x3) = 5 - x1 - x2 - x3")
        spec = to_affine(d)
        assert spec.coefficients == (-1, -1, -1)
        assert spec.constant == 5

    def test_root_coefficients(self):
        d = parse_map_def("f(x1,x2) = zeta(3)*x1 + zeta(3)^2*x2")
        assert d.field() == CyclotomicField(3)
        spec = to_affine(d)
        fld = CyclotomicField(3)
        assert spec.coefficients == (fld.zeta(), fld.zeta(2))

    def test_mixed_orders_join(self):
        d = parse_map_def("f(x1) = zeta(3)*x1 + zeta(4)")
        assert d.field() == CyclotomicField(12)

    def test_whitespace_insensitive(self):
        a = parse_map_def("f(x1,x2)=x1+x2")
        b = parse_map_def("  f ( x1 , x2 )  =  x1 + x2  ")
        assert a == b

    def test_precedence_and_associativity(self):
        d = parse_map_def("f(x1,x2) = x1 - x2 - 1 + 2*x1*3")
        assert d.expr == Add(
            Sub(Sub(Var(1), Var(2)), RationalLit(Fraction(1))),
            Mul(Mul(RationalLit(Fraction(2)), Var(1)), RationalLit(Fraction(3))),
        )
        spec = to_affine(d)
        assert spec.coefficients == (7, -1)
        assert spec.constant == -1

    def test_groups_and_negation(self):
        d = parse_map_def("f(x1) = -(x1 + 1) * 2")
        assert d.expr == Mul(Neg(Group(Add(Var(1), RationalLit(Fraction(1))))), RationalLit(Fraction(2)))
        spec = to_affine(d)
        assert spec.coefficients == (-2,) and spec.constant == -2

    def test_rational_literals(self):
        spec = to_affine(parse_map_def("f(x1) = 3/4*x1 - 1/2"))
        assert spec.coefficients == (Fraction(3, 4),)
        assert spec.constant == Fraction(-1, 2)


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "",
            "g(x1) = x1",
            "f(x2) = x2",
            "f(x1, x3) = x1",
            "f(x1) = x2",
            "f(x1) = 1/0",
            "f(x1) = zeta(0)",
            "f(x1) = zeta(65)",
            "f(x1) = x1 +",
            "f(x1) = (x1",
            "f(x1) = x1 x1",
            "f(x1) = x1 @ x1",
            "f(x1) = ",
            "f(x1) = zeta(3)^",
            "f(x1) = x1/2",
            "f(x1)",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ParseError):
            parse_map_def(text)

    def test_positions_reported(self):
        with pytest.raises(ParseError) as err:
            parse_map_def("f(x1,x2) =\n  x1 + x9")
        assert err.value.line == 2
        assert err.value.column == 8

    def test_deep_nesting_is_an_error_not_a_crash(self):
        text = "f(x1) = " + "(" * 400 + "x1" + ")" * 400
        with pytest.raises(ParseError):
            parse_map_def(text)


class TestNonAffine:
    def test_products_of_variables_rejected_for_matrices(self):
        with pytest.raises(NonAffineError):
            to_affine(parse_map_def("f(x1,x2) = x1*x2"))
        with pytest.raises(NonAffineError):
            to_affine(parse_map_def("f(x1,x2) = (x1+1)*(x2-1)"))

    def test_engine_map_still_evaluates(self):
        f = to_kary_map(parse_map_def("f(x1,x2) = x1*x2 + 1"))
        assert f.apply((Fraction(3), Fraction(4))) == 13


class TestScalars:
    def test_parse_scalar(self):
        assert eval_scalar(parse_scalar("-7/2")) == Fraction(-7, 2)
        fld = CyclotomicField(3)
        assert eval_scalar(parse_scalar("zeta(3)^2"), fld) == fld.zeta(2)
        assert eval_scalar(parse_scalar("1 - 2*3")) == -5

    def test_parse_seed(self):
        values = [eval_scalar(e) for e in parse_seed("1/2, -3, 2*2")]
        assert values == [Fraction(1, 2), -3, 4]

    def test_variables_rejected_in_scalars(self):
        with pytest.raises(ParseError):
            parse_scalar("x1")
        with pytest.raises(ParseError):
            eval_scalar(parse_seed("1, x1")[1])


def random_def_text(rng: random.Random) -> str:
    arity = rng.randint(1, 4)

    def factor(depth):
        roll = rng.random()
        if depth > 3 or roll < 0.3:
            if rng.random() < 0.5:
                num = rng.randint(0, 30)
                return str(num) if rng.random() < 0.5 else f"{num}/{rng.randint(1, 9)}"
            return f"x{rng.randint(1, arity)}"
        if roll < 0.45:
            order = rng.randint(1, 12)
            return f"zeta({order})" + (f"^{rng.randint(0, 5)}" if rng.random() < 0.5 else "")
        if roll < 0.6:
            return f"-{factor(depth + 1)}"
        return f"({expr(depth + 1)})"

    def term(depth):
        parts = [factor(depth) for _ in range(rng.randint(1, 3))]
        return " * ".join(parts)

    def expr(depth):
        parts = [term(depth)]
        for _ in range(rng.randint(0, 3)):
            parts.append(rng.choice(["+", "-"]))
            parts.append(term(depth))
        return " ".join(parts)

    vars_ = ",".join(f"x{i}" for i in range(1, arity + 1))
    return f"f({vars_}) = {expr(0)}"


class TestRoundTrip:
    def test_rendered_definitions_reparse_identically(self):
        rng = random.Random(2024)
        for _ in range(200):
            text = random_def_text(rng)
            d = parse_map_def(text)
            rendered = render_def(d)
            assert parse_map_def(rendered) == d

    def test_render_examples(self):
        d = parse_map_def("f(x1,x2)=zeta(3)*x1+zeta(3)^2*x2")
        assert render_def(d) == "f(x1,x2) = zeta(3) * x1 + zeta(3)^2 * x2"


class TestFuzz:
    def test_parser_never_crashes_on_noise(self):
        rng = random.Random(99)
        alphabet = string.printable
        tokens = [
            "f", "x1", "x2", "zeta", "(", ")", "+", "-", "*", "/", "^",
            ",", "=", "12", "0", " ",
        ]
        base = "f(x1,x2) = zeta(3)*x1 + 1/2*x2"
        for i in range(800):
            if i % 3 == 0:
                text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            elif i % 3 == 1:
                text = "".join(rng.choice(tokens) for _ in range(rng.randint(0, 25)))
            else:
                chars = list(base)
                for _ in range(rng.randint(1, 6)):
                    pos = rng.randrange(len(chars))
                    chars[pos] = rng.choice(alphabet)
                text = "".join(chars)
            try:
                result = parse_map_def(text)
                assert isinstance(result, MapDef)
            except ParseError:
                pass
