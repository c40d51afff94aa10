import csv
import io
import json
import math
import subprocess
import sys

import pytest

from kdiophantine.cli import main
from kdiophantine.report import TABLE1_HEADER

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEnumerate:
    def test_quadruples_golden(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--p", "23", "--k", "3", "--m", "4")
        assert code == 0
        assert out == (DATA / "quadruples_f23.txt").read_text()
        assert out.splitlines()[0] == "(1, 2, 4, 6)"

    def test_p5_has_two_lines(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--p", "5", "--k", "3", "--m", "3")
        assert len(out.splitlines()) == 2

    def test_not_a_prime(self, capsys):
        code, _, err = run(capsys, "enumerate", "--p", "4", "--k", "3", "--m", "3")
        assert code == 2
        assert "not an odd prime" in err

    def test_tuple_budget_exit_1(self, capsys):
        code, _, err = run(capsys, "enumerate", "--p", "101", "--k", "3", "--m", "3",
                           "--max-tuples", "10")
        assert code == 1 and "more than 10" in err

    def test_csv_and_json(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--p", "7", "--k", "2", "--m", "3", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["a1", "a2", "a3"]
        _, out, _ = run(capsys, "enumerate", "--p", "7", "--k", "2", "--m", "3", "--format", "json")
        doc = json.loads(out)
        assert set(doc) == {"command", "config", "results", "elapsed_ms"}
        assert doc["results"]["count"] == len(rows) - 1

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "t2.txt"
        code, out, _ = run(capsys, "enumerate", "--p", "23", "--k", "3", "--m", "4", "-o", str(target))
        assert code == 0 and out == ""
        assert target.read_bytes() == (DATA / "quadruples_f23.txt").read_bytes()


class TestTable1:
    PRIMES = "5,7,11,13,17,19,23,29,31,37,41,43,101"

    def test_golden(self, capsys):
        code, out, _ = run(capsys, "table1", "--primes", self.PRIMES, "--no-timing")
        assert code == 0
        assert out == (DATA / "n3_small_primes.csv").read_text()

    def test_header_and_line_endings(self, capsys, tmp_path):
        target = tmp_path / "t1.csv"
        run(capsys, "table1", "--primes", "7,5", "-o", str(target))
        raw = target.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode().splitlines()
        assert lines[0] == ",".join(TABLE1_HEADER)
        assert lines[0].startswith("p,class_mod3,n3_brute,n3_formula,a,error_term,elapsed_ms")
        assert [ln.split(",")[0] for ln in lines[1:]] == ["5", "7"]

    def test_p229_flagged(self, capsys):
        _, out, _ = run(capsys, "table1", "--primes", "229")
        row = list(csv.DictReader(io.StringIO(out)))[0]
        assert row["n3_brute"] == row["n3_formula"] == "974742"
        assert "97472" in row["note"]

    def test_empty_list(self, capsys):
        code, _, err = run(capsys, "table1", "--primes", "")
        assert code == 2 and "non-empty" in err


class TestVerify:
    @pytest.mark.parametrize("suite, pmax", [("cubecount", 500), ("gauss", 1000), ("charsums", 100)])
    def test_suites_pass(self, capsys, suite, pmax):
        code, out, _ = run(capsys, "verify", "--suite", suite, "--pmax", str(pmax))
        assert code == 0
        res = json.loads(out)["results"][suite]
        assert res["ok"] and res["checked"] == res["passed"] > 0

    def test_counterexample_exit_1(self, capsys, monkeypatch):
        import kdiophantine.tuples as t

        monkeypatch.setattr(t, "kernels", _BrokenKernels())
        code, out, err = run(capsys, "verify", "--suite", "cubecount", "--pmax", "20")
        assert code == 1
        assert "counterexample" in err
        assert json.loads(out)["results"]["cubecount"]["ok"] is False

    def test_seed_is_recorded(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "weil", "--pmax", "101", "--samples", "5",
                        "--seed", "7")
        assert json.loads(out)["config"]["seed"] == 7


class _BrokenKernels:
    def cube_triples(self, p):
        return -1


class TestPlotdata:
    def test_linear(self, capsys):
        _, out, _ = run(capsys, "plotdata", "--pmax", "43")
        lines = out.splitlines()
        assert lines[0] == "p,n3"
        assert len(lines) == 13
        assert lines[-1] == "43,5739"

    def test_loglog(self, capsys):
        _, out, _ = run(capsys, "plotdata", "--primes", "101", "--kind", "loglog")
        assert out.splitlines() == ["ln_p,ln_n3", "4.61512,11.3004"]
        x, y = map(float, out.splitlines()[1].split(","))
        assert x == pytest.approx(math.log(101), rel=1e-5)
        assert y == pytest.approx(11.30035, rel=1e-5)

    def test_empty_range(self, capsys):
        code, out, _ = run(capsys, "plotdata", "--pmin", "24", "--pmax", "28")
        assert code == 0 and out == "p,n3\n"


class TestWitness:
    def test_above_bound_pair(self, capsys):
        code, out, _ = run(capsys, "witness", "--k", "2", "--m", "2", "--above-bound")
        res = json.loads(out)["results"]
        assert code == 0
        assert res["p"] == 1031 and res["bound"] == "1024" and res["above_bound"]
        a, b = res["witness"]
        assert (a * b + 1) % 1031 in {y * y % 1031 for y in range(1031)}

    def test_quadruple_member(self, capsys):
        _, out, _ = run(capsys, "witness", "--k", "3", "--m", "4", "--p", "23")
        w = json.loads(out)["results"]["witness"]
        assert "(" + ", ".join(map(str, w)) + ")" in (DATA / "quadruples_f23.txt").read_text()

    def test_k_exceeds_m(self, capsys):
        code, _, err = run(capsys, "witness", "--k", "5", "--m", "4", "--p", "23")
        assert code == 2 and "k exceeds m" in err

    def test_no_witness_exit_1(self, capsys):
        code, out, err = run(capsys, "witness", "--k", "3", "--m", "4", "--p", "5")
        assert code == 1
        assert "p=5" in err and "bound 1048576" in err
        assert json.loads(out)["results"]["witness"] is None


class TestSmallCommands:
    def test_represent(self, capsys):
        _, out, _ = run(capsys, "represent", "--p", "229")
        assert json.loads(out)["results"] == {"p": 229, "a": 11, "b": 6}

    def test_represent_wrong_class(self, capsys):
        code, _, _ = run(capsys, "represent", "--p", "11")
        assert code == 2

    def test_curve(self, capsys):
        _, out, _ = run(capsys, "curve", "--p", "7", "--D", "2")
        assert json.loads(out)["results"] == {"p": 7, "D": 2, "exact": 9, "candidates": [3, 9]}

    def test_bound_is_a_decimal_string(self, capsys):
        _, out, _ = run(capsys, "bound", "--k", "5", "--m", "20")
        res = json.loads(out)["results"]
        c = math.comb(20, 4)
        assert res["bound"] == str(4**c * (c + 42) ** 2)
        assert res["k3_bound"] is None

    def test_count(self, capsys):
        _, out, _ = run(capsys, "count", "--p", "41", "--k", "3", "--m", "3")
        res = json.loads(out)["results"]
        assert res["brute_count"] == res["closed_form"] == 4940 and res["delta"] == 0

    def test_count_csv(self, capsys):
        _, out, _ = run(capsys, "count", "--p", "23", "--k", "3", "--m", "4", "--format", "csv",
                        "--no-timing")
        assert out == "p,k,m,brute_count,closed_form,delta,elapsed_ms\n23,3,4,330,,,0\n"

    def test_missing_argument(self, capsys):
        code, _, err = run(capsys, "count", "--p", "23")
        assert code == 2 and "--k" in err

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 2


class TestConfig:
    def test_flags_override_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"p": 23, "k": 3, "m": 3}))
        _, out, _ = run(capsys, "count", "--config", str(cfg), "--m", "4")
        res = json.loads(out)["results"]
        assert (res["p"], res["m"], res["brute_count"]) == (23, 4, 330)

    def test_file_alone(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"p": 23, "k": 3, "m": 3}))
        _, out, _ = run(capsys, "count", "--config", str(cfg))
        assert json.loads(out)["results"]["brute_count"] == 770

    def test_unknown_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"colour": "blue"}))
        code, _, err = run(capsys, "count", "--config", str(cfg))
        assert code == 2 and "colour" in err

    def test_environment_is_ignored(self, capsys, monkeypatch):
        monkeypatch.setenv("KDIO_P", "29")
        monkeypatch.setenv("P", "29")
        _, out, _ = run(capsys, "count", "--p", "23", "--k", "3", "--m", "3")
        assert json.loads(out)["results"]["p"] == 23

    def test_bad_workers(self, capsys):
        code, _, _ = run(capsys, "count", "--p", "23", "--k", "3", "--m", "3", "--workers", "0")
        assert code == 2


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["enumerate", "--p", "61", "--k", "3", "--m", "4"],
        ["enumerate", "--p", "61", "--k", "3", "--m", "4", "--format", "json", "--no-timing"],
        ["table1", "--pmax", "61", "--no-timing"],
        ["plotdata", "--pmax", "61", "--kind", "loglog"],
    ])
    def test_byte_identical_across_workers_and_backends(self, tmp_path, argv):
        outputs = []
        for workers, backend in [("1", "numba"), ("4", "numba"), ("1", "numpy"), ("3", "numpy")]:
            target = tmp_path / f"out-{workers}-{backend}"
            code = main(argv + ["--workers", workers, "--backend", backend, "-o", str(target)])
            assert code == 0
            outputs.append(target.read_bytes())
        assert len(set(outputs)) == 1


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "kdiophantine", "bound", "--k", "2", "--m", "2"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["bound"] == "1024"


def test_backend_flag_does_not_leak():
    from kdiophantine import backend

    before = backend()
    main(["bound", "--k", "2", "--m", "2", "--backend", "numpy", "-o", "/dev/null"])
    assert backend() == before
