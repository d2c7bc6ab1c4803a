"""Command-line interface.

One subcommand per analysis; maps come in either as a definition string
(``--def "f(x1,x2) = x1 + x2"``) or as a table file (``--table path``).
Exit codes: 0 success, 1 verification failure (including a false answer
from a predicate subcommand), 2 usage or parse errors, 3 exceeded resource
budgets.  ``--json`` switches to a stable machine-readable encoding; all
output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from math import lcm

from . import affine, engine, recurrence, tables
from .errors import ArityError, BudgetError, NonAffineError, ParseError
from .exactnum import CyclotomicField, CyclotomicNumber, RationalField, join_fields
from .parser import (
    MapDef,
    eval_scalar,
    parse_map_def,
    parse_seed,
    to_affine,
    to_kary_map,
    _zeta_orders,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# ---------------------------------------------------------------------------
# rendering helpers

def _render_scalar(v) -> str:
    if isinstance(v, CyclotomicNumber):
        return v.render()
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def _render_state(state) -> str:
    parts = [_render_scalar(v) for v in state]
    sep = ", " if any(" " in p or "," in p for p in parts) else " "
    return sep.join(parts)


def _emit(args, text_lines, payload) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# input plumbing

def _seed_field(args, d: MapDef):
    # smallest field holding the definition plus every seed scalar
    field = d.field()
    if getattr(args, "seed", None):
        for expr in parse_seed(args.seed):
            orders = _zeta_orders(expr)
            if orders:
                field = join_fields(field, CyclotomicField(lcm(*orders)))
    return field


def _def_seed(args, d: MapDef, field) -> tuple:
    if not getattr(args, "seed", None):
        raise ParseError("--seed is required for this command")
    values = tuple(eval_scalar(e, field) for e in parse_seed(args.seed))
    if len(values) != d.arity:
        raise ArityError(
            f"seed has {len(values)} components but the map has arity {d.arity}"
        )
    return values


def _table_seed(args, t: tables.FiniteTable) -> tuple:
    if not getattr(args, "seed", None):
        raise ParseError("--seed is required for this command")
    rational = RationalField()
    values = []
    for expr in parse_seed(args.seed):
        v = eval_scalar(expr, rational)
        if v.denominator != 1:
            raise ParseError(f"table seeds must be integers, got {v}")
        values.append(int(v))
    if len(values) != t.k:
        raise ArityError(
            f"seed has {len(values)} components but the table has arity {t.k}"
        )
    for v in values:
        if not 0 <= v < t.m:
            raise ParseError(f"seed component {v} out of range 0..{t.m - 1}")
    return tuple(values)


def _input_map(args) -> tuple[str, object]:
    if args.map_def is not None:
        return "def", parse_map_def(args.map_def)
    return "table", tables.load_table(args.table)


def _perm_arg(text: str, m: int) -> list[int]:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"--perm must be comma-separated integers, got {text!r}")
    if len(values) != m:
        raise ParseError(f"--perm must list all {m} images")
    return values


# ---------------------------------------------------------------------------
# subcommands

def _map_and_seed(args) -> tuple:
    kind, obj = _input_map(args)
    if kind == "table":
        return obj.as_map(), _table_seed(args, obj)
    field = _seed_field(args, obj)
    return to_kary_map(obj, field), _def_seed(args, obj, field)


def _cmd_iterate(args) -> int:
    fmap, seed = _map_and_seed(args)
    result = engine.iterate(fmap, seed, args.n)
    _emit(args, [_render_state(result)], {"state": [_render_scalar(v) for v in result]})
    return EXIT_OK


def _cmd_orbit(args) -> int:
    fmap, seed = _map_and_seed(args)
    orb = engine.orbit(fmap, seed, args.max_steps)
    lines = [_render_state(s) for s in orb.states]
    lines.append(f"recurred: {'true' if orb.recurred else 'false'}")
    _emit(
        args,
        lines,
        {
            "states": [[_render_scalar(v) for v in s] for s in orb.states],
            "recurred": orb.recurred,
        },
    )
    return EXIT_OK


def _cmd_order(args) -> int:
    kind, obj = _input_map(args)
    if kind == "table":
        report = tables.cycle_report(obj)
        order = report.minimal_order
    else:
        spec = to_affine(obj)
        order = affine.affine_involutory_order(
            affine.build_first_iterate(spec), args.bound
        )
    _emit(args, [str(order) if order else "none"], {"minimal_order": order})
    return EXIT_OK


def _cmd_point_order(args) -> int:
    fmap, seed = _map_and_seed(args)
    order = engine.point_involutory_order(fmap, seed, args.bound)
    _emit(args, [str(order) if order else "none"], {"point_order": order})
    return EXIT_OK


def _cmd_check_ii(args) -> int:
    t = tables.load_table(args.table)
    flag = tables.is_induced_involutory(t, args.n, args.arg)
    _emit(args, ["true" if flag else "false"], {"induced_involutory": flag})
    return EXIT_OK if flag else EXIT_VERIFY


def _cmd_symmetric(args) -> int:
    t = tables.load_table(args.table)
    flag = tables.is_symmetric(t)
    _emit(args, ["true" if flag else "false"], {"symmetric": flag})
    return EXIT_OK if flag else EXIT_VERIFY


def _cmd_cycles(args) -> int:
    t = tables.load_table(args.table)
    rep = tables.cycle_report(t)
    lines = [
        f"bijective: {'true' if rep.bijective else 'false'}",
        f"minimal_order: {rep.minimal_order if rep.minimal_order else 'none'}",
        "cycle_lengths: " + " ".join(str(n) for n in rep.cycle_lengths),
    ]
    for cyc in rep.cycles:
        lines.append("cycle: " + " ".join(str(i) for i in cyc))
    _emit(
        args,
        lines,
        {
            "bijective": rep.bijective,
            "minimal_order": rep.minimal_order,
            "cycle_lengths": list(rep.cycle_lengths),
            "cycles": [list(c) for c in rep.cycles],
        },
    )
    return EXIT_OK


def _cmd_enumerate_ii(args) -> int:
    found = list(tables.enumerate_ii_tables(args.m, args.k))
    lines = [f"count: {len(found)}"]
    lines += [" ".join(str(v) for v in t.values()) for t in found]
    _emit(
        args,
        lines,
        {"count": len(found), "tables": [list(t.values()) for t in found]},
    )
    return EXIT_OK


def _cmd_count_involutions(args) -> int:
    count = tables.count_involutions(args.m)
    if args.brute:
        brute = tables.count_involutions_brute(args.m)
        if brute != count:
            print(f"recursion {count} != brute force {brute}", file=sys.stderr)
            return EXIT_VERIFY
    _emit(args, [str(count)], {"count": count})
    return EXIT_OK


def _cmd_claim1(args) -> int:
    if args.table is not None:
        t = tables.load_table(args.table)
        rep = recurrence.cycle_correspondence_report(t)
        lines = [f"bijective: {'true' if rep.bijective else 'false'}"]
        for row in rep.rows:
            lines.append(
                f"state {row.state_index} {row.state}: n={row.state_period}"
                f" j={row.sequence_period}"
                f" dir1={'ok' if row.direction1_ok else 'VIOLATED'}"
                f" j|n={'yes' if row.j_divides_n else 'no'}"
                f" j|nk={'yes' if row.j_divides_nk else 'NO'}"
            )
        lines.append(
            f"states: {rep.states_checked}"
            f" dir1_violations: {rep.direction1_violations}"
            f" j_divides_n: {rep.j_divides_n_count}"
            f" jnk_violations: {rep.j_divides_nk_violations}"
        )
        payload = {
            "bijective": rep.bijective,
            "rows": [
                {
                    "state_index": r.state_index,
                    "state": list(r.state),
                    "state_period": r.state_period,
                    "sequence_period": r.sequence_period,
                    "direction1_ok": r.direction1_ok,
                    "j_divides_n": r.j_divides_n,
                    "j_divides_nk": r.j_divides_nk,
                }
                for r in rep.rows
            ],
            "direction1_violations": rep.direction1_violations,
            "j_divides_nk_violations": rep.j_divides_nk_violations,
        }
        _emit(args, lines, payload)
        return EXIT_OK
    if args.m is None or args.k is None:
        raise ParseError("claim1 needs either --table or both --m and --k")
    sweep = recurrence.cycle_correspondence_sweep(args.m, args.k)
    lines = [
        f"tables: {sweep.tables}",
        f"bijective_tables: {sweep.bijective_tables}",
        f"cyclic_states: {sweep.cyclic_states}",
        f"direction1_violations: {sweep.direction1_violations}",
        f"j_divides_n: {sweep.j_divides_n_count}",
        f"j_divides_n_failures: {sweep.j_divides_n_failures}",
        f"j_divides_nk_violations: {sweep.j_divides_nk_violations}",
    ]
    payload = {f: getattr(sweep, f) for f in (
        "m", "k", "tables", "bijective_tables", "cyclic_states",
        "direction1_violations", "j_divides_n_count", "j_divides_n_failures",
        "j_divides_nk_violations",
    )}
    _emit(args, lines, payload)
    return EXIT_OK


def _cmd_augment(args) -> int:
    if args.table is not None:
        t = tables.load_table(args.table)
        if t.m**args.to > tables.STATE_BUDGET:
            raise BudgetError(
                f"{t.m ** args.to} states in the lifted table exceed the"
                f" analysis budget {tables.STATE_BUDGET}"
            )
        lifted = recurrence.augment(t.as_map(), args.to)
        lifted_table = tables.FiniteTable.from_function(
            t.m, args.to, lambda *xs: lifted.apply(xs)
        )
        text = tables.dumps_table(lifted_table)
        _emit(
            args,
            [text.rstrip("\n")],
            {"m": t.m, "k": args.to, "entries": list(lifted_table.values())},
        )
        return EXIT_OK
    d = parse_map_def(args.map_def)
    if not args.seed:
        raise ParseError("--seed is required when augmenting a definition")
    field = _seed_field(args, d)
    lifted = recurrence.augment(to_kary_map(d, field), args.to)
    values = tuple(eval_scalar(e, field) for e in parse_seed(args.seed))
    if len(values) != args.to:
        raise ArityError(
            f"seed has {len(values)} components but the lifted arity is {args.to}"
        )
    result = lifted.apply(values)
    _emit(args, [_render_scalar(result)], {"value": _render_scalar(result)})
    return EXIT_OK


def _cmd_conjugate(args) -> int:
    t = tables.load_table(args.table)
    g = _perm_arg(args.perm, t.m)
    conj = tables.conjugate(t, g)
    text = tables.dumps_table(conj)
    _emit(
        args,
        [text.rstrip("\n")],
        {"m": conj.m, "k": conj.k, "entries": list(conj.values())},
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-examples: golden end-to-end checks through the parser and loader

def _data_table(name: str) -> tables.FiniteTable:
    text = resources.files("iterk").joinpath(f"data/{name}").read_text()
    return tables.loads_table(text)


def _rand_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-99, 99), rng.randint(1, 20))


def _golden_table_checks(name: str, lengths, order):
    t = _data_table(name)
    rep = tables.cycle_report(t)
    label = name.removesuffix(".tbl")
    yield f"{label}-cycles", rep.cycle_lengths == lengths and rep.minimal_order == order, (
        f"lengths {rep.cycle_lengths}, minimal order {rep.minimal_order}"
    )
    yield f"{label}-symmetric", tables.is_symmetric(t), "invariant under argument swaps"
    yield f"{label}-ii3", tables.is_induced_involutory(t, 3), "induced 3-involutory"
    if t.k == 2:
        grid = t.entries.reshape(t.m, t.m)
        persym = bool((grid == grid[::-1, ::-1].T).all())
        if name.startswith("ii3_persym"):
            yield f"{label}-persymmetric", persym, "antidiagonal symmetry"


def _pair_sum_check(rng: random.Random):
    d = parse_map_def("f(x1,x2) = x1 + x2")
    fmap = to_kary_map(d)
    it = affine.build_first_iterate(to_affine(d))
    for _ in range(100):
        seed = (_rand_fraction(rng), _rand_fraction(rng))
        current = seed
        for n in range(31):
            closed = affine.fibonacci_closed_form(n, seed)
            fast = affine.affine_iterate(it, seed, n)
            if not (closed == fast == current):
                return False, f"mismatch at n={n}, seed={seed}"
            current = engine.first_iterate(fmap, current)
    return True, "closed form == engine == matrix power, n <= 30, 100 seeds"


def _sum_map_check(rng: random.Random):
    for k in range(1, 6):
        a = _rand_fraction(rng)
        vars_ = ",".join(f"x{i}" for i in range(1, k + 1))
        body = " - ".join([f"{a.numerator}/{a.denominator}"] + [f"x{i}" for i in range(1, k + 1)])
        d = parse_map_def(f"f({vars_}) = {body}")
        spec = to_affine(d)
        it = affine.build_first_iterate(spec)
        fmap = to_kary_map(d)
        order = affine.affine_involutory_order(it, 50)
        if order != k + 1:
            return False, f"k={k}: minimal order {order} != {k + 1}"
        seed = tuple(_rand_fraction(rng) for _ in range(k))
        current = seed
        for idx in range(2 * (k + 1)):
            if affine.sum_map_closed_form(k, a, idx, seed) != current:
                return False, f"k={k}: closed form mismatch at index {idx}"
            current = engine.first_iterate(fmap, current)
    return True, "all residues mod k+1 for k <= 5; minimal order k+1"


def _roots_check():
    d = parse_map_def("f(x1,x2) = zeta(3)*x1 + zeta(3)^2*x2")
    fld = d.field()
    fmap = to_kary_map(d)
    it = affine.build_first_iterate(to_affine(d))
    pts = [
        fld.coerce(0),
        fld.coerce(1),
        fld.coerce(-1),
        fld.zeta(),
        fld.one() + fld.zeta(),
    ]
    for x1 in pts:
        for x2 in pts:
            s = (x1, x2)
            if affine.linear_roots_checks(3, "induced-1", 3, s)[0] != x1:
                return False, "first-argument cycle broke"
            if affine.linear_roots_checks(3, "induced-2", 3, s)[1] != x2:
                return False, "second-argument cycle broke"
    s = (fld.one(), fld.zeta())
    for n in range(13):
        if affine.linear_roots_checks(3, "full", n, s) != engine.iterate(fmap, s, n):
            return False, f"product form mismatch at n={n}"
    if affine.affine_involutory_order(it, 50) is not None:
        return False, "unexpectedly involutory"
    one, zero = fld.one(), fld.zero()
    if fmap.apply((one, zero)) == fmap.apply((zero, one)):
        return False, "map should be asymmetric at (1,0)"
    return True, "induced cycles, product form vs engine, no global order, asymmetric"


def _augment_check(rng: random.Random):
    d = parse_map_def("f(x1,x2) = 3/2 - x1 - x2")
    lifted = recurrence.augment(to_kary_map(d), 3)
    for _ in range(1000):
        s = tuple(_rand_fraction(rng) for _ in range(3))
        if lifted.apply(s) != s[0]:
            return False, f"lifted map != first projection at {s}"
    return True, "lifted map projects to the first argument on 1000 inputs"


def _cmd_verify_examples(args) -> int:
    rng = random.Random(20260808)
    results: list[tuple[str, bool, str]] = []
    results.extend(_golden_table_checks("add_mod3.tbl", (4, 4, 1), 4))
    results.extend(_golden_table_checks("ii3_persym_m4.tbl", (15, 1), 15))
    for name, fn in (
        ("pair-sum-closed-form", lambda: _pair_sum_check(rng)),
        ("sum-map-closed-form", lambda: _sum_map_check(rng)),
        ("roots-of-unity", _roots_check),
        ("augment-projection", lambda: _augment_check(rng)),
    ):
        ok, detail = fn()
        results.append((name, ok, detail))
    failures = [name for name, ok, _ in results if not ok]
    lines = [
        f"{'ok' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results
    ]
    lines.append(
        f"{len(results) - len(failures)}/{len(results)} checks passed"
    )
    _emit(
        args,
        lines,
        {
            "checks": [
                {"name": n, "ok": ok, "detail": d} for n, ok, d in results
            ],
            "failures": failures,
        },
    )
    return EXIT_OK if not failures else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing

def _add_input_options(sub, seed=False, table_only=False):
    if table_only:
        sub.add_argument("--table", required=True, help="table file path")
    else:
        grp = sub.add_mutually_exclusive_group(required=True)
        grp.add_argument("--def", dest="map_def", help="map definition string")
        grp.add_argument("--table", help="table file path")
    if seed:
        sub.add_argument("--seed", help="comma-separated seed scalars")
    sub.add_argument("--json", action="store_true", help="machine-readable output")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="iterk",
        description=(
            "Iterate maps of k arguments as order-k recurrences and analyze"
            " their periodicity."
        ),
    )
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("iterate", help="n-th iterate of a seed state")
    _add_input_options(s, seed=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=_cmd_iterate)

    s = sp.add_parser("orbit", help="trajectory of a seed state")
    _add_input_options(s, seed=True)
    s.add_argument("--max-steps", type=int, default=100)
    s.set_defaults(fn=_cmd_orbit)

    s = sp.add_parser("order", help="minimal involutory order")
    _add_input_options(s)
    s.add_argument("--bound", type=int, default=50, help="search bound for definitions")
    s.set_defaults(fn=_cmd_order)

    s = sp.add_parser("point-order", help="minimal n with the n-th iterate fixing the seed")
    _add_input_options(s, seed=True)
    s.add_argument("--bound", type=int, default=1000)
    s.set_defaults(fn=_cmd_point_order)

    s = sp.add_parser("check-ii", help="induced involutivity of order n")
    _add_input_options(s, table_only=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--arg", type=int, default=None, help="restrict to one argument position")
    s.set_defaults(fn=_cmd_check_ii)

    s = sp.add_parser("symmetric", help="invariance under argument permutations")
    _add_input_options(s, table_only=True)
    s.set_defaults(fn=_cmd_symmetric)

    s = sp.add_parser("cycles", help="cycle decomposition of the first iterate")
    _add_input_options(s, table_only=True)
    s.set_defaults(fn=_cmd_cycles)

    s = sp.add_parser("enumerate-ii", help="all induced-involutory tables for m, k")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_enumerate_ii)

    s = sp.add_parser("count-involutions", help="telephone number T(m)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--brute", action="store_true", help="cross-check by full scan")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_count_involutions)

    s = sp.add_parser(
        "claim1",
        help="correspondence between state periods and recurrence cycle lengths",
    )
    s.add_argument("--table", help="analyze one table file")
    s.add_argument("--m", type=int, help="sweep all tables on m symbols")
    s.add_argument("--k", type=int, help="arity for the sweep")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_claim1)

    s = sp.add_parser("augment", help="lift a map to a higher arity")
    _add_input_options(s, seed=True)
    s.add_argument("--to", type=int, required=True, help="target arity")
    s.set_defaults(fn=_cmd_augment)

    s = sp.add_parser("conjugate", help="relabel a table through a bijection")
    _add_input_options(s, table_only=True)
    s.add_argument("--perm", required=True, help="comma-separated images of 0..m-1")
    s.set_defaults(fn=_cmd_conjugate)

    s = sp.add_parser("verify-examples", help="run the built-in worked examples")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_verify_examples)

    return ap


def main(argv=None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, NonAffineError, ArityError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
