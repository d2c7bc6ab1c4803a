"""Acceptance suite: one test per criterion, each timed against its budget
and reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.
"""

import random
import string
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

from iterk import engine
from iterk.affine import (
    AffineMapSpec,
    affine_involutory_order,
    affine_iterate,
    build_first_iterate,
    decreasing_involution_residuals,
    fibonacci_closed_form,
    linear_roots_checks,
    roots_map_spec,
    sum_map_closed_form,
)
from iterk.errors import ParseError
from iterk.exactnum import CyclotomicField
from iterk.parser import MapDef, parse_map_def
from iterk.recurrence import (
    augment,
    cycle_correspondence_report,
    cycle_correspondence_sweep,
)
from iterk.tables import (
    FiniteTable,
    as_permutation,
    count_involutions,
    count_involutions_brute,
    cycle_report,
    enumerate_ii_tables,
    is_induced_involutory,
    is_symmetric,
    iter_all_tables,
    state_from_index,
)

ADD_MOD3 = FiniteTable.from_values(3, 2, [0, 1, 2, 1, 2, 0, 2, 0, 1])
II3_M4 = FiniteTable.from_values(
    4, 2, [0, 2, 3, 1, 2, 0, 1, 3, 3, 1, 0, 2, 1, 3, 2, 0]
)


@contextmanager
def criterion(name: str, budget_s: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, (
            f"{name}: exceeded budget ({elapsed:.2f}s >= {budget_s}s)"
        )
        ok = True
        print(f"PASS {name} ({elapsed:.2f}s < {budget_s}s)")
    finally:
        if not ok:
            print(f"FAIL {name}")


def rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-99, 99), rng.randint(1, 20))


def test_criterion_01_three_symbol_golden_table():
    with criterion("01 three-symbol golden table", 1.0):
        rep = cycle_report(ADD_MOD3)
        assert rep.cycle_lengths == (4, 4, 1)
        assert rep.minimal_order == 4
        assert is_symmetric(ADD_MOD3)
        assert is_induced_involutory(ADD_MOD3, 3)


def test_criterion_02_four_symbol_golden_table():
    with criterion("02 four-symbol golden table", 1.0):
        rep = cycle_report(II3_M4)
        assert rep.cycle_lengths == (15, 1)
        assert rep.minimal_order == 15
        assert is_symmetric(II3_M4)
        grid = II3_M4.entries.reshape(4, 4)
        assert bool((grid == grid[::-1, ::-1].T).all())  # persymmetric
        assert is_induced_involutory(II3_M4, 3)


def test_criterion_03_induced_involutory_tables_have_order_k_plus_1():
    with criterion("03 induced-involutory enumeration sweep", 60.0):
        for m, k in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)]:
            emitted = list(enumerate_ii_tables(m, k))
            assert emitted, f"no tables emitted for m={m}, k={k}"
            for t in emitted:
                rep = cycle_report(t)
                assert rep.bijective
                assert rep.minimal_order == k + 1
                assert is_symmetric(t)
                f = t.as_map()
                for idx in range(t.n_states):
                    x = state_from_index(idx, m, k)
                    fx = t.apply(x)
                    current = x
                    for p in range(1, k + 1):
                        current = engine.first_iterate(f, current)
                        expected = x[k - p + 1 :] + (fx,) + x[: k - p]
                        assert current == expected
                    assert engine.first_iterate(f, current) == x


def test_criterion_04_pair_sum_oracle_equality():
    with criterion("04 pair-sum closed form equality", 5.0):
        rng = random.Random(404)
        spec = AffineMapSpec.rational((1, 1))
        it = build_first_iterate(spec)
        f = spec.as_kary_map()
        for _ in range(100):
            seed = (rand_fraction(rng), rand_fraction(rng))
            current = seed
            for n in range(31):
                closed = fibonacci_closed_form(n, seed)
                assert closed == current
                assert affine_iterate(it, seed, n) == current
                current = engine.first_iterate(f, current)


def test_criterion_05_negated_sum_oracle_equality():
    with criterion("05 negated-sum closed form equality", 5.0):
        rng = random.Random(505)
        for k in range(1, 6):
            a = rand_fraction(rng)
            spec = AffineMapSpec.rational([-1] * k, a)
            it = build_first_iterate(spec)
            f = spec.as_kary_map()
            assert affine_involutory_order(it, 50) == k + 1
            for _ in range(3):
                seed = tuple(rand_fraction(rng) for _ in range(k))
                current = seed
                for idx in range(2 * (k + 1)):
                    assert sum_map_closed_form(k, a, idx, seed) == current
                    current = engine.first_iterate(f, current)


def test_criterion_06_roots_of_unity_checks():
    with criterion("06 roots-of-unity checks", 10.0):
        fld = CyclotomicField(3)
        pts = [
            fld.coerce(0),
            fld.coerce(1),
            fld.coerce(-1),
            fld.zeta(),
            fld.one() + fld.zeta(),
        ]
        assert len(pts) == 5 and len(set(pts)) == 5
        for x1 in pts:
            for x2 in pts:
                assert linear_roots_checks(3, "induced-1", 3, (x1, x2)) == (x1, x2)
                assert linear_roots_checks(3, "induced-2", 3, (x1, x2)) == (x1, x2)
        spec = roots_map_spec()
        f = spec.as_kary_map()
        for seed in [(pts[1], pts[3]), (pts[4], pts[2]), (pts[3], pts[4])]:
            current = seed
            for n in range(13):
                assert linear_roots_checks(3, "full", n, seed) == current
                current = engine.first_iterate(f, current)
        assert affine_involutory_order(build_first_iterate(spec), 50) is None
        one, zero = fld.one(), fld.zero()
        assert f.apply((one, zero)) != f.apply((zero, one))


def test_criterion_07_telephone_numbers():
    with criterion("07 telephone numbers", 30.0):
        for m in range(1, 8):
            assert count_involutions_brute(m) == count_involutions(m)
        assert count_involutions(4) == 10
        assert count_involutions(5) == 26


def test_criterion_08_decreasing_involution_residuals():
    with criterion("08 decreasing involution residuals", 1.0):
        summary = decreasing_involution_residuals(100, 0.1, 10.0)
        assert summary.max_involution_residual < 1e-9
        assert summary.max_conjugacy_residual < 1e-9


def test_criterion_09_period_correspondence_sweep():
    with criterion("09 period correspondence sweep", 120.0):
        sweep = cycle_correspondence_sweep(3, 2)
        assert sweep.tables == 3**9
        assert sweep.bijective_tables > 0
        assert sweep.cyclic_states == sweep.bijective_tables * 9
        assert sweep.direction1_violations == 0
        assert sweep.j_divides_nk_violations == 0
        # report the direction-2 tallies: j | n does fail, j | nk never does
        print(
            f"  bijective tables: {sweep.bijective_tables};"
            f" j|n holds {sweep.j_divides_n_count}"
            f" / fails {sweep.j_divides_n_failures};"
            f" j|nk violations {sweep.j_divides_nk_violations}"
        )
        assert sweep.j_divides_n_count + sweep.j_divides_n_failures == sweep.cyclic_states
        # spot cross-check of the sweep kernel against the per-table analysis
        sampled = 0
        seen_bijective = 0
        for t in iter_all_tables(3, 2):
            if as_permutation(t) is None:
                continue
            seen_bijective += 1
            if seen_bijective % 8 != 1:
                continue
            rep = cycle_correspondence_report(t)
            assert rep.direction1_violations == 0
            assert rep.j_divides_nk_violations == 0
            sampled += 1
        assert seen_bijective == sweep.bijective_tables
        assert sampled > 0


def test_criterion_10_addition_and_multiplication_rules():
    with criterion("10 iteration exponent rules", 30.0):
        rng = random.Random(1010)
        for _ in range(500):
            m = rng.randint(2, 4)
            k = rng.randint(1, 3)
            t = FiniteTable.from_values(
                m, k, [rng.randrange(m) for _ in range(m**k)]
            )
            f = t.as_map()
            for _ in range(2):
                s = tuple(rng.randrange(m) for _ in range(k))
                prefix = [s]
                for _ in range(6):
                    prefix.append(engine.first_iterate(f, prefix[-1]))
                for a in range(7):
                    for b in range(7 - a):
                        assert engine.iterate(f, prefix[b], a) == prefix[a + b]
                for a in range(4):
                    for b in range(3):
                        if a * b <= 6:
                            state = s
                            for _ in range(b):
                                state = engine.iterate(f, state, a)
                            assert state == prefix[a * b]


def test_criterion_11_augmentation_projects_to_first_argument():
    with criterion("11 arity augmentation", 1.0):
        rng = random.Random(1111)
        f = AffineMapSpec.rational((-1, -1), rand_fraction(rng)).as_kary_map()
        lifted = augment(f, 3)
        for _ in range(1000):
            s = tuple(rand_fraction(rng) for _ in range(3))
            assert lifted.apply(s) == s[0]


def _fuzz_inputs(count: int):
    rng = random.Random(1212)
    alphabet = string.printable + "\x00\x7féζ∑世"
    tokens = [
        "f", "x1", "x2", "x9", "zeta", "(", ")", "+", "-", "*", "/", "^",
        ",", "=", "3", "1/2", " ", "00",
    ]
    base = "f(x1,x2) = zeta(3)*x1 + 1/2*x2 - (x1 + 3)"
    for i in range(count):
        if i % 3 == 0:
            yield "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 50)))
        elif i % 3 == 1:
            yield "".join(rng.choice(tokens) for _ in range(rng.randint(0, 30)))
        else:
            chars = list(base)
            for _ in range(rng.randint(1, 8)):
                chars[rng.randrange(len(chars))] = rng.choice(alphabet)
            yield "".join(chars)


def test_criterion_12_cli_end_to_end_and_fuzz():
    with criterion("12 CLI end-to-end and parser fuzz", 60.0):
        proc = subprocess.run(
            [sys.executable, "-m", "iterk", "verify-examples"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert "FAIL" not in proc.stdout
        for text in _fuzz_inputs(10_000):
            try:
                result = parse_map_def(text)
                assert isinstance(result, MapDef)
            except ParseError:
                pass
