"""End-to-end tests for the command line interface."""

import csv
import io
import json
import subprocess
import sys

import pytest

from hexwr import cli
from hexwr.enumeration import index_set_member, list_representations
from hexwr.errors import InvariantViolation
from hexwr.optimizer import rank_by_snr


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestCount:
    def test_table(self, capsys):
        code, out, _ = run_cli(capsys, "count", "84")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "N(84) = 2"
        assert any(line.split()[:5] == ["0", "2", "1", "5", "3"] for line in lines[2:])

    def test_trivial(self, capsys):
        code, out, _ = run_cli(capsys, "count", "1")
        assert code == 0
        assert out.splitlines()[0] == "N(1) = 1"

    def test_json_round_trip(self, capsys):
        code, out, _ = run_cli(capsys, "count", "84", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert json.dumps(obj, indent=2, sort_keys=True) == out.strip()
        assert obj["count"] == 2
        reps = list_representations(84)
        assert [r["k"] for r in obj["representations"]] == [r.k for r in reps]

    def test_csv(self, capsys):
        code, out, _ = run_cli(capsys, "count", "84", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["u", "j", "d", "m", "n", "k", "minimum"]
        assert len(rows) == 3
        assert rows[1][5:] == ["84", "84"]

    def test_malformed_argument(self, capsys):
        for bad in (["count", "abc"], ["count", "0"], ["count", "-3"], ["count"]):
            code, _, err = run_cli(capsys, *bad)
            assert code == 1
            assert "error" in err

    def test_dot_rejected_outside_tree(self, capsys):
        code, _, err = run_cli(capsys, "count", "84", "--format", "dot")
        assert code == 1
        assert "invalid choice" in err


class TestMaxmin:
    def test_single_index(self, capsys):
        code, out, _ = run_cli(capsys, "maxmin", "8")
        assert code == 0
        assert "7" in out and "Gamma_theta(3,2)" in out

    def test_no_sublattice(self, capsys):
        code, out, _ = run_cli(capsys, "maxmin", "2")
        assert code == 0
        assert "no well-rounded sublattice of index 2" in out

    def test_json(self, capsys):
        code, out, _ = run_cli(capsys, "maxmin", "45", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["max_minimum"] == 39
        assert obj["witnesses"] == [
            {"k": 3, "lattice": "sqrt(3)*Gamma_theta(4,3)", "m": 4, "n": 3}
        ]

    def test_table1_csv(self, capsys):
        code, out, _ = run_cli(capsys, "maxmin", "--table1", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["J", "max_minimum", "lattice"]
        body = {int(r[0]): (int(r[1]), r[2]) for r in rows[1:]}
        assert len(body) == 11
        assert body[8] == (7, "Gamma_theta(3,2)")
        assert body[24] == (21, "sqrt(3)*Gamma_theta(3,2)")
        assert body[32] == (28, "2*Gamma_theta(3,2)")
        # the exhaustive enumeration puts the scaled copy of the full
        # lattice first at index 21, minimum 21
        assert body[21] == (21, "sqrt(21)*Gamma_theta(1,1)")
        assert body[65] == (61, "Gamma_theta(9,5)")

    def test_flag_combinations(self, capsys):
        code, _, err = run_cli(capsys, "maxmin", "8", "--table1")
        assert code == 1 and "exactly one" in err
        code, _, err = run_cli(capsys, "maxmin")
        assert code == 1


class TestSnr:
    def test_index_84_table(self, capsys):
        code, out, _ = run_cli(capsys, "snr", "84")
        assert code == 0
        lines = out.splitlines()
        assert lines[1].split()[:4] == ["1", "1", "1", "84"]
        assert lines[2].split()[:4] == ["2", "5", "3", "76"]

    def test_empty(self, capsys):
        code, out, _ = run_cli(capsys, "snr", "2")
        assert code == 0
        assert "no well-rounded sublattice" in out

    def test_json_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "snr", "84", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        want = rank_by_snr(84)
        assert [e["snr_db"] for e in obj["ranking"]] == [s.db for _, _, s in want]
        assert [e["minimum"] for e in obj["ranking"]] == [m for _, m, _ in want]

    def test_tol_flag(self, capsys):
        code, out, _ = run_cli(capsys, "snr", "8", "--tol", "1e-6")
        assert code == 0 and "3" in out
        code, _, err = run_cli(capsys, "snr", "8", "--tol", "-1")
        assert code == 1

    def test_invariant_violation_exit_code(self, capsys, monkeypatch):
        def explode(J, rel_tol=1e-9):
            raise InvariantViolation("boom")

        monkeypatch.setattr(cli, "rank_by_snr", explode)
        code, _, err = run_cli(capsys, "snr", "84")
        assert code == 2
        assert "invariant violation" in err


class TestTree:
    def test_dot_contains_known_edge(self, capsys):
        code, out, _ = run_cli(capsys, "tree", "--cmax", "19", "--format", "dot")
        assert code == 0
        assert '"3,8,7" -> "5,21,19" [label="M1"];' in out
        assert out.startswith("digraph")

    def test_single_node(self, capsys):
        code, out, _ = run_cli(capsys, "tree", "--cmax", "1")
        assert code == 0
        assert "nodes: 1" in out
        assert "0,1,1 -M1-> 0,1,1" in out

    def test_larger_bound_reaches_97(self, capsys):
        code, out, _ = run_cli(capsys, "tree", "--cmax", "97", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert "55,112,97" in obj["nodes"]
        assert json.dumps(obj, indent=2, sort_keys=True) == out.strip()

    def test_csv_edges(self, capsys):
        code, out, _ = run_cli(capsys, "tree", "--cmax", "7", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["from", "label", "to"]
        assert ["0,1,1", "M1", "0,1,1"] in rows

    def test_depth_flag(self, capsys):
        code, out, _ = run_cli(capsys, "tree", "--depth", "1", "--format", "json")
        assert code == 0
        assert len(json.loads(out)["nodes"]) == 3

    def test_requires_bound(self, capsys):
        code, _, err = run_cli(capsys, "tree")
        assert code == 1
        assert "cmax" in err or "depth" in err


class TestOracle:
    def test_small_scan_agrees(self, capsys, monkeypatch):
        monkeypatch.setenv("HEXWR_THREADS", "1")
        code, out, _ = run_cli(capsys, "oracle", "60")
        assert code == 0
        assert out.strip() == "OK: 60/60 indices agree"

    def test_parallel_matches_serial(self, capsys, monkeypatch):
        monkeypatch.setenv("HEXWR_THREADS", "1")
        _, serial, _ = run_cli(capsys, "oracle", "40", "--format", "csv")
        monkeypatch.setenv("HEXWR_THREADS", "4")
        _, parallel, _ = run_cli(capsys, "oracle", "40", "--format", "csv")
        assert serial == parallel

    def test_json(self, capsys, monkeypatch):
        monkeypatch.setenv("HEXWR_THREADS", "1")
        code, out, _ = run_cli(capsys, "oracle", "25", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["agree"] is True
        assert obj["checked"] == 25 and obj["disagreements"] == []

    def test_disagreement_is_fatal(self, capsys, monkeypatch):
        monkeypatch.setenv("HEXWR_THREADS", "1")
        real = cli.count_N
        monkeypatch.setattr(cli, "count_N", lambda J: real(J) + (J == 5))
        code, out, _ = run_cli(capsys, "oracle", "10")
        assert code == 2
        assert "J=5" in out and "DISAGREE" in out

    def test_bad_thread_setting(self, capsys, monkeypatch):
        monkeypatch.setenv("HEXWR_THREADS", "soon")
        code, _, err = run_cli(capsys, "oracle", "5")
        assert code == 1
        assert "HEXWR_THREADS" in err


class TestClassesAndIndexSet:
    def test_classes_csv(self, capsys):
        code, out, _ = run_cli(capsys, "classes", "--cmax", "40", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert rows[1] == ["1", "1", "1", "1", "1/2"]
        assert ["5", "3", "19", "21", "11/38"] in rows
        assert len(rows) == 7

    def test_classes_sorted_by_minimum(self, capsys):
        code, out, _ = run_cli(capsys, "classes", "--cmax", "200", "--format", "json")
        assert code == 0
        minima = [c["class_minimum"] for c in json.loads(out)["classes"]]
        assert minima == sorted(minima)

    def test_index_set(self, capsys):
        code, out, _ = run_cli(capsys, "index-set", "--jmax", "20")
        assert code == 0
        assert out.splitlines()[1] == "1 3 4 7 8 9 12 13 15 16 19"

    def test_index_set_json(self, capsys):
        code, out, _ = run_cli(capsys, "index-set", "--jmax", "120", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        want = [J for J in range(1, 121) if index_set_member(J)]
        assert obj["members"] == want and obj["count"] == len(want)


class TestEntryPoints:
    def test_help_exits_cleanly(self, capsys):
        code, out, _ = run_cli(capsys, "--help")
        assert code == 0
        assert "maxmin" in out and "index-set" in out

    def test_no_command(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == 1

    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hexwr.cli", "maxmin", "8"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "7" in proc.stdout
