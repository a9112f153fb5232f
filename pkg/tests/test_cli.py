import subprocess
import sys

import pytest

from ccdd.cli import main
from ccdd.diagram import deserialize, serialize, stats, validate
from ccdd.formula import CnfFormula, to_dimacs

from conftest import PARITY_CLAUSES, build_six_var


@pytest.fixture
def files(tmp_path):
    parity = tmp_path / "parity.cnf"
    parity.write_text(to_dimacs(CnfFormula.from_clauses(PARITY_CLAUSES, 5)))
    unsat = tmp_path / "unsat.cnf"
    unsat.write_text("p cnf 2 2\n1 0\n-1 0\n")
    six_var = tmp_path / "six_var.ccdd"
    six_var.write_bytes(serialize(build_six_var()))
    top = tmp_path / "top.ccdd"
    top.write_text("ccdd 5 1\nT\n")
    or17 = tmp_path / "or17.cnf"
    or17.write_text("p cnf 7 1\n1 7 0\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCompile:
    def test_defaults(self, files, capsys):
        code, out, _ = run(capsys, "compile", files / "parity.cnf", "--out", files / "a.ccdd")
        assert code == 0
        fields = dict(kv.split("=") for kv in out.split())
        assert set(fields) == {"nodes", "edges", "knodes", "time_ms"}
        assert int(fields["knodes"]) >= 1
        d = deserialize((files / "a.ccdd").read_bytes())
        assert validate(d) == [] and stats(d)["edges"] == int(fields["edges"])

    def test_no_kernelize(self, files, capsys):
        code, out, _ = run(capsys, "compile", files / "parity.cnf", "--no-kernelize",
                           "--out", files / "b.ccdd")
        assert code == 0 and "knodes=0" in out

    def test_default_out_path(self, files, capsys):
        assert run(capsys, "compile", files / "parity.cnf")[0] == 0
        assert (files / "parity.ccdd").exists()

    def test_missing_file(self, files, capsys):
        code, out, err = run(capsys, "compile", files / "nope.cnf")
        assert code == 2 and out == "" and err

    def test_bad_dimacs(self, files, capsys):
        (files / "bad.cnf").write_text("p cnf 1 1\n2 0\n")
        assert run(capsys, "compile", files / "bad.cnf")[0] == 2

    def test_node_budget(self, files, capsys):
        assert run(capsys, "compile", files / "parity.cnf", "--node-budget", "2",
                   "--out", files / "c.ccdd")[0] == 3


class TestCount:
    def test_cnf(self, files, capsys):
        assert run(capsys, "count", files / "parity.cnf")[:2] == (0, "4\n")

    def test_ccdd(self, files, capsys):
        assert run(capsys, "count", files / "six_var.ccdd")[:2] == (0, "8\n")

    def test_unsat(self, files, capsys):
        assert run(capsys, "count", files / "unsat.cnf")[:2] == (0, "0\n")

    def test_format_override(self, files, capsys):
        (files / "parity.txt").write_bytes((files / "parity.cnf").read_bytes())
        assert run(capsys, "count", files / "parity.txt")[0] == 1
        assert run(capsys, "count", files / "parity.txt", "--format", "cnf")[:2] == (0, "4\n")


class TestSample:
    def test_deterministic(self, files, capsys):
        for name in ("s1", "s2"):
            assert run(capsys, "sample", files / "parity.cnf", "-n", 3, "--seed", 7,
                       "--out", files / name)[0] == 0
        assert (files / "s1").read_bytes() == (files / "s2").read_bytes()
        assert len((files / "s1").read_text().splitlines()) == 3

    def test_zero(self, files, capsys):
        assert run(capsys, "sample", files / "parity.cnf", "-n", 0, "--out", files / "z")[0] == 0
        assert (files / "z").read_bytes() == b""

    def test_unsat(self, files, capsys):
        code, out, err = run(capsys, "sample", files / "unsat.cnf", "-n", 5)
        assert code == 0 and out == "" and "unsatisfiable" in err

    def test_verified(self, files, capsys):
        run(capsys, "sample", files / "parity.cnf", "-n", 200, "--seed", 1, "--out", files / "s")
        code, out, _ = run(capsys, "verify", files / "parity.cnf", "--samples", files / "s")
        assert code == 0
        assert "unsatisfying=0" in out and "reject=no" in out


class TestQuery:
    def test_imply(self, files, capsys):
        run(capsys, "compile", files / "or17.cnf", "--out", files / "or.ccdd")
        assert run(capsys, "query", files / "or.ccdd", "imply", "1")[:2] == (0, "yes\n")
        assert run(capsys, "query", files / "or.ccdd", "imply", "-1")[:2] == (0, "no\n")
        assert run(capsys, "query", files / "or.ccdd", "imply", "1 -1")[0] == 1

    def test_valid_consistent(self, files, capsys):
        assert run(capsys, "query", files / "top.ccdd", "valid")[1] == "yes\n"
        assert run(capsys, "query", files / "six_var.ccdd", "valid")[1] == "no\n"
        assert run(capsys, "query", files / "six_var.ccdd", "consistent")[1] == "yes\n"

    def test_enumerate(self, files, capsys):
        code, out, _ = run(capsys, "query", files / "six_var.ccdd", "enumerate", "--limit", 2)
        assert code == 0 and len(out.splitlines()) == 2
        assert len(run(capsys, "query", files / "six_var.ccdd", "enumerate")[1].splitlines()) == 8


class TestVerify:
    def test_parity(self, files, capsys):
        code, out, _ = run(capsys, "verify", files / "parity.cnf")
        assert code == 0
        assert "exact_mc=4" in out and "compile_ct=4" in out and "brute_count=4" in out

    def test_tampered(self, files, capsys):
        assert run(capsys, "verify", files / "parity.cnf", "--ccdd", files / "top.ccdd")[0] == 4

    def test_bad_sample(self, files, capsys):
        (files / "bad").write_text("1 2 3 4 5\n")
        assert run(capsys, "verify", files / "parity.cnf", "--samples", files / "bad")[0] == 4

    def test_large_skips_oracle(self, files, capsys):
        (files / "big.cnf").write_text("p cnf 30 1\n1 30 0\n")
        code, out, err = run(capsys, "verify", files / "big.cnf")
        assert code == 0 and "skipped" in err and "brute_count" not in out


class TestStatsDot:
    def test_top(self, files, capsys):
        code, out, _ = run(capsys, "stats", files / "top.ccdd")
        assert code == 0 and out.startswith("nodes=1 edges=0 ")

    def test_six_var(self, files, capsys):
        out = run(capsys, "stats", files / "six_var.ccdd")[1]
        assert int(dict(kv.split("=") for kv in out.split())["knodes"]) >= 2

    def test_dot(self, files, capsys):
        code, out, _ = run(capsys, "dot", files / "six_var.ccdd")
        assert code == 0 and out.startswith("digraph")

    def test_corrupt(self, files, capsys):
        (files / "bad.ccdd").write_text("ccdd 1 1\nQ\n")
        assert run(capsys, "stats", files / "bad.ccdd")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "compile", "x.cnf", "--order", "nope")[0] == 1


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "ccdd", "count", str(files / "parity.cnf")],
                       capture_output=True, text=True, timeout=60)
    assert r.returncode == 0 and r.stdout == "4\n"
