import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from netgame.cli import main
from netgame.constructions import from_targets
from netgame.io import serialize

from conftest import params


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    diags = [json.loads(line) for line in err.splitlines()]
    return code, out, diags


@pytest.fixture
def triangle(tmp_path, capsys):
    path = tmp_path / "tri.json"
    assert main(["build", "--construction", "clique", "--size", "3", "--gamma", "2/5", "--out", str(path)]) == 0
    capsys.readouterr()
    return path


class TestBuild:
    def test_clique_stdout(self, capsys):
        code, out, _ = run(capsys, "build", "--construction", "clique", "--size", "3", "--gamma", "2/5")
        assert code == 0
        assert json.loads(out)["params"] == {"a": "2/1", "b": "eps", "c": "5/1", "n": 3}

    def test_regime_error_exits_1(self, capsys):
        code, out, diags = run(capsys, "build", "--construction", "clique", "--size", "5", "--gamma", "1/6")
        assert code == 1 and out == ""
        assert diags[-1]["level"] == "error" and diags[-1]["kind"] == "RegimeError"

    def test_random_builder_needs_seed(self, capsys):
        code, _, diags = run(capsys, "build", "--construction", "dense", "--n", "30", "--K", "6", "--gamma", "2/5")
        assert code == 2 and diags[-1]["location"] == "argv"

    def test_a_and_c(self, capsys):
        code, out, _ = run(capsys, "build", "--construction", "h32", "--a", "3", "--c", "5", "--b", "eps")
        assert code == 0 and json.loads(out)["params"]["n"] == 4

    def test_community(self, capsys, tmp_path):
        sk = tmp_path / "sk.json"
        sk.write_text(json.dumps({"cliques": [4, 4], "joins": [{"between": [0, 1], "mode": "bridge"}]}))
        code, out, _ = run(capsys, "build", "--construction", "community", "--skeleton", str(sk), "--gamma", "3/5")
        assert code == 0 and json.loads(out)["params"]["n"] == 8

    def test_seeded_builds_are_byte_identical(self, capsys):
        argv = ["build", "--construction", "hypergraph", "--n", "200", "--k", "4", "--d", "2", "--gamma", "1/2", "--seed", "5"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b and a

    def test_unknown_flag(self, capsys):
        code, _, diags = run(capsys, "build", "--construction", "clique", "--bogus")
        assert code == 2 and diags[-1]["kind"] == "ParseError"


class TestCheck:
    def test_stable(self, capsys, triangle):
        for mode in ("criterion", "best-response"):
            code, out, _ = run(capsys, "check", str(triangle), "--mode", mode)
            assert code == 0 and json.loads(out)["stable"] is True

    def test_unstable_is_still_success(self, capsys, tmp_path):
        half = Fraction(1, 2)
        cfg = from_targets(params("2/5", 2), {0: {1: half}, 1: {0: half}})
        path = tmp_path / "bridge.json"
        path.write_text(serialize(cfg))
        code, out, _ = run(capsys, "check", str(path), "--mode", "best-response")
        doc = json.loads(out)
        assert code == 0 and doc["stable"] is False and doc["violations"]

    def test_parse_error_has_location(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"params": {"a": "1/0", "b": "eps", "c": "1", "n": 2}, "events": []}))
        code, _, diags = run(capsys, "check", str(path))
        assert code == 2
        assert diags[-1]["location"] == f"{path}:params.a"

    def test_missing_file(self, capsys, tmp_path):
        code, _, diags = run(capsys, "check", str(tmp_path / "none.json"))
        assert code == 2 and diags[-1]["kind"] == "ParseError"

    def test_criterion_refuses_concrete_b(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        code = main(["build", "--construction", "clique", "--size", "3", "--gamma", "2/5", "--b", "1/100", "--out", str(path)])
        assert code == 0
        capsys.readouterr()
        code, _, diags = run(capsys, "check", str(path), "--mode", "criterion")
        assert code == 1 and diags[-1]["kind"] == "UnsupportedRegimeError"


class TestMetricsAndExport:
    def test_metrics_json(self, capsys, triangle):
        code, out, _ = run(capsys, "metrics", str(triangle), "--json", "--check", "clustering")
        doc = json.loads(out)
        assert code == 0 and doc["clustering"] == "1/1" and doc["clustering_bound"]["holds"]

    def test_ksupport(self, capsys, triangle):
        code, out, _ = run(capsys, "metrics", str(triangle), "--json", "--check", "ksupport", "--K", "2")
        assert code == 0 and json.loads(out)["ksupport_bound"]["bound"] == "12/5"

    def test_export(self, capsys, triangle):
        code, out, _ = run(capsys, "export", str(triangle))
        assert code == 0 and out == "0 1\n0 2\n1 2\n"


class TestDegreeSeq:
    def test_input_file(self, capsys, tmp_path):
        f = tmp_path / "d.txt"
        f.write_text("\n".join(["3"] * 24) + "\n")
        rep = tmp_path / "r.json"
        code, out, _ = run(capsys, "degree-seq", "--input", str(f), "--gamma", "3/5", "--seed", "1", "--report", str(rep))
        doc = json.loads(rep.read_text())
        assert code == 0 and doc["stable"] and doc["connected"]
        assert json.loads(out)["params"]["n"] == 24

    def test_assumption_rejection(self, capsys, tmp_path):
        f = tmp_path / "d.txt"
        f.write_text("2\n" * 10)
        code, _, diags = run(capsys, "degree-seq", "--input", str(f), "--gamma", "3/5", "--seed", "1")
        assert code == 1 and diags[-1]["assumption"] == 2

    def test_needs_one_source(self, capsys):
        code, _, _ = run(capsys, "degree-seq", "--gamma", "3/5", "--seed", "1")
        assert code == 2


class TestDynamics:
    def test_fixed_point_round_trip(self, capsys, triangle, tmp_path):
        out = tmp_path / "final.json"
        trace = tmp_path / "t.jsonl"
        code, _, diags = run(capsys, "dynamics", "--init", str(triangle), "--trace", str(trace), "--out", str(out))
        assert code == 0
        assert out.read_bytes() == triangle.read_bytes()
        last = json.loads(trace.read_text().splitlines()[-1])
        assert last == {"kind": "status", "status": "converged", "rounds": 1, "changes": 0}
        assert any(d.get("event") == "dynamics" for d in diags)

    def test_arrivals(self, capsys, triangle, tmp_path):
        arr = tmp_path / "arr.json"
        arr.write_text(json.dumps([{"round": 2, "events": [{"invitees": [0, 1], "rate": "1/4"}]}]))
        out = tmp_path / "final.json"
        code, _, _ = run(capsys, "dynamics", "--init", str(triangle), "--arrivals", str(arr), "--out", str(out))
        assert code == 0 and json.loads(out.read_text())["params"]["n"] == 4

    def test_random_order_needs_seed(self, capsys, triangle):
        code, _, _ = run(capsys, "dynamics", "--init", str(triangle), "--order", "random")
        assert code == 2


def test_manifest_reproduces_output(capsys, tmp_path):
    out, man = tmp_path / "o.json", tmp_path / "m.json"
    argv = ["build", "--construction", "dense", "--n", "60", "--K", "5", "--gamma", "2/5", "--seed", "4",
            "--out", str(out), "--manifest", str(man)]
    assert main(argv) == 0
    m = json.loads(man.read_text())
    assert m["seed"] == 4 and m["argv"] == argv
    first = out.read_bytes()
    out.unlink()
    assert main(m["argv"]) == 0
    assert out.read_bytes() == first
    assert json.loads(man.read_text())["outputs"] == m["outputs"]


def test_module_entry_point_and_thread_cap():
    env = dict(os.environ, NETGAME_THREADS="1")
    res = subprocess.run(
        [sys.executable, "-m", "netgame", "build", "--construction", "clique", "--size", "3", "--gamma", "2/5"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["params"]["n"] == 3
