"""Command-line surface: output text, JSON stability, exit codes."""

import json
import subprocess
import sys

import pytest

from iterk.cli import main
from iterk.tables import FiniteTable, cycle_report, dumps_table, loads_table

ADD_MOD3 = FiniteTable.from_values(3, 2, [0, 1, 2, 1, 2, 0, 2, 0, 1])
II3_M4 = FiniteTable.from_values(
    4, 2, [0, 2, 3, 1, 2, 0, 1, 3, 3, 1, 0, 2, 1, 3, 2, 0]
)


@pytest.fixture
def table_path(tmp_path):
    p = tmp_path / "mod3.tbl"
    p.write_text(dumps_table(ADD_MOD3))
    return str(p)


@pytest.fixture
def table4_path(tmp_path):
    p = tmp_path / "m4.tbl"
    p.write_text(dumps_table(II3_M4))
    return str(p)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestIterate:
    def test_definition(self, capsys):
        code, out, _ = run_cli(
            capsys, "iterate", "--def", "f(x1,x2)=x1+x2", "--seed", "1,1", "--n", "5"
        )
        assert code == 0 and out.strip() == "89 144"

    def test_table(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "iterate", "--table", table_path, "--seed", "0,1", "--n", "1"
        )
        assert code == 0 and out.strip() == "1 2"

    def test_cyclotomic_seed(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "iterate",
            "--def",
            "f(x1,x2)=zeta(3)*x1+zeta(3)^2*x2",
            "--seed",
            "1,0",
            "--n",
            "3",
        )
        assert code == 0 and out.strip() == "5, -8*z - 8"

    def test_bad_seed_arity(self, capsys):
        code, _, err = run_cli(
            capsys, "iterate", "--def", "f(x1,x2)=x1+x2", "--seed", "1", "--n", "1"
        )
        assert code == 2 and "seed" in err

    def test_out_of_range_table_seed(self, capsys, table_path):
        code, _, err = run_cli(
            capsys, "iterate", "--table", table_path, "--seed", "0,7", "--n", "1"
        )
        assert code == 2 and "range" in err


class TestOrderAndCycles:
    def test_table_order(self, capsys, table_path):
        code, out, _ = run_cli(capsys, "order", "--table", table_path)
        assert code == 0 and out.strip() == "4"

    def test_affine_order(self, capsys):
        code, out, _ = run_cli(capsys, "order", "--def", "f(x1,x2)=1-x1-x2")
        assert code == 0 and out.strip() == "3"

    def test_non_affine_rejected(self, capsys):
        code, _, err = run_cli(capsys, "order", "--def", "f(x1,x2)=x1*x2")
        assert code == 2 and "affine" in err

    def test_cycles_json_is_stable(self, capsys, table_path):
        code1, out1, _ = run_cli(capsys, "cycles", "--table", table_path, "--json")
        code2, out2, _ = run_cli(capsys, "cycles", "--table", table_path, "--json")
        assert code1 == code2 == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["cycle_lengths"] == [4, 4, 1]
        assert payload["minimal_order"] == 4

    def test_point_order(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "point-order", "--table", table_path, "--seed", "0,1"
        )
        assert code == 0 and out.strip() == "4"

    def test_orbit(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "orbit", "--table", table_path, "--seed", "0,1", "--max-steps", "10"
        )
        lines = out.strip().splitlines()
        assert code == 0
        assert lines == ["0 1", "1 2", "0 2", "2 1", "recurred: true"]


class TestPredicates:
    def test_check_ii_true(self, capsys, table4_path):
        code, out, _ = run_cli(capsys, "check-ii", "--table", table4_path, "--n", "3")
        assert code == 0 and out.strip() == "true"

    def test_check_ii_false_exits_one(self, capsys, table4_path):
        code, out, _ = run_cli(capsys, "check-ii", "--table", table4_path, "--n", "2")
        assert code == 1 and out.strip() == "false"

    def test_check_ii_single_argument(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "check-ii", "--table", table_path, "--n", "3", "--arg", "2"
        )
        assert code == 0 and out.strip() == "true"

    def test_symmetric(self, capsys, table_path):
        code, out, _ = run_cli(capsys, "symmetric", "--table", table_path)
        assert code == 0 and out.strip() == "true"


class TestEnumerationCommands:
    def test_enumerate_ii(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate-ii", "--m", "3", "--k", "2")
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "count: 3"
        assert lines[1].split() == list("021210102")

    def test_enumerate_budget_exit(self, capsys):
        code, _, err = run_cli(capsys, "enumerate-ii", "--m", "4", "--k", "3")
        assert code == 3 and "budget" in err

    def test_count_involutions(self, capsys):
        code, out, _ = run_cli(capsys, "count-involutions", "--m", "5", "--brute")
        assert code == 0 and out.strip() == "26"

    def test_claim1_table(self, capsys, table_path):
        code, out, _ = run_cli(capsys, "claim1", "--table", table_path)
        assert code == 0
        assert "dir1_violations: 0" in out
        assert "jnk_violations: 0" in out

    def test_claim1_sweep(self, capsys):
        code, out, _ = run_cli(capsys, "claim1", "--m", "2", "--k", "2", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["tables"] == 16
        assert payload["direction1_violations"] == 0

    def test_claim1_needs_input(self, capsys):
        code, _, err = run_cli(capsys, "claim1")
        assert code == 2


class TestTransforms:
    def test_conjugate_output_reparses(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "conjugate", "--table", table_path, "--perm", "1,2,0"
        )
        assert code == 0
        conj = loads_table(out)
        assert cycle_report(conj).cycle_lengths == (4, 4, 1)

    def test_conjugate_rejects_non_bijections(self, capsys, table_path):
        code, _, err = run_cli(
            capsys, "conjugate", "--table", table_path, "--perm", "0,0,1"
        )
        assert code == 2

    def test_augment_table(self, capsys, table_path):
        code, out, _ = run_cli(
            capsys, "augment", "--table", table_path, "--to", "3"
        )
        assert code == 0
        lifted = loads_table(out)
        assert (lifted.m, lifted.k) == (3, 3)
        # the lifted value ignores the padded argument
        assert lifted.apply((0, 1, 0)) == lifted.apply((0, 1, 2)) == 2

    def test_augment_table_budget(self, capsys, table_path):
        code, _, err = run_cli(
            capsys, "augment", "--table", table_path, "--to", "40"
        )
        assert code == 3 and "budget" in err

    def test_augment_definition(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "augment",
            "--def",
            "f(x1,x2)=5-x1-x2",
            "--seed",
            "4/3,2,7",
            "--to",
            "3",
        )
        assert code == 0 and out.strip() == "4/3"


class TestVerifyExamples:
    def test_passes_and_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "verify-examples")
        assert code == 0
        lines = out.strip().splitlines()
        assert all(line.startswith("ok ") for line in lines[:-1])
        assert lines[-1].endswith("checks passed")

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "iterk", "verify-examples", "--json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["failures"] == []


class TestErrorPaths:
    def test_parse_error_exit(self, capsys):
        code, _, err = run_cli(
            capsys, "iterate", "--def", "f(x1)=x7", "--seed", "1", "--n", "1"
        )
        assert code == 2 and "undeclared" in err

    def test_missing_table_file(self, capsys):
        code, _, err = run_cli(
            capsys, "order", "--table", "/nonexistent/path.tbl"
        )
        assert code == 2

    def test_malformed_table_file(self, capsys, tmp_path):
        p = tmp_path / "bad.tbl"
        p.write_text("3 2\n0 1 2\n")
        code, _, err = run_cli(capsys, "order", "--table", str(p))
        assert code == 2 and "expected 9" in err
