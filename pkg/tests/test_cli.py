import json
import subprocess
import sys

import pytest

from fairequiv.cli import main, parse_word
from fairequiv.lts import Lasso, parse_aut


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--no-timing")
    return code, json.loads(out)


def test_equiv_examples(capsys):
    code, out, _ = run(capsys, "equiv", "corpus:fig3-left", "p", "corpus:fig3-left", "q", "--kind", "trace")
    assert code == 0 and "trace: equivalent" in out
    code, out, _ = run(capsys, "equiv", "corpus:fig3-left", "p", "corpus:fig3-left", "q", "--kind", "failure-trace")
    assert code == 1 and "b.{a}" in out
    code, report = run_json(capsys, "equiv", "corpus:fig5", "p", "corpus:fig5", "p")
    assert code == 0 and all(v["equivalent"] for v in report["results"]["verdicts"])


def test_equiv_report_schema(capsys):
    code, report = run_json(capsys, "equiv", "corpus:fig3-left", "p", "corpus:fig3-left", "q", "--kind", "ready")
    assert list(report) == ["command", "inputs", "results", "seed", "bounds", "elapsed_ms"]
    assert report["inputs"][0]["ref"] == "corpus:fig3-left" and len(report["inputs"][0]["sha256"]) == 64
    verdict = report["results"]["verdicts"][0]
    assert verdict["witness"]["observation"] == [["b"], ["b"]] and verdict["witness"]["present_in"] == 1
    assert report["seed"] is None and report["elapsed_ms"] == 0


def test_equiv_two_files_merge(tmp_path, capsys):
    a = tmp_path / "a.aut"
    b = tmp_path / "b.aut"
    a.write_text('des (0,1,1)\n(0,"a",0)\n')
    b.write_text('des (0,2,2)\n(0,"a",1)\n(1,"a",0)\n')
    code, report = run_json(capsys, "equiv", str(a), "0", str(b), "0")
    assert code == 0
    assert report["results"]["q"] == 1 and report["results"]["alphabet"] == ["a"]
    # a refusal-based check sees the union alphabet
    c = tmp_path / "c.aut"
    c.write_text('des (0,2,1)\n(0,"a",0)\n(0,"b",0)\n')
    code, _, _ = run(capsys, "equiv", str(a), "0", str(c), "0", "--kind", "failures")
    assert code == 1


def test_equiv_errors(capsys, tmp_path):
    assert run(capsys, "equiv", "corpus:nope", "p", "corpus:fig1a", "q")[0] == 2
    assert run(capsys, "equiv", "corpus:fig1a", "zz", "corpus:fig1a", "q")[0] == 2
    assert run(capsys, "equiv", "corpus:fig1a", "q", "corpus:fig1a", "q", "--kind", "nope")[0] == 2
    bad = tmp_path / "bad.aut"
    bad.write_text("des (0,1,1)\n")
    code, _, err = run(capsys, "equiv", str(bad), "0", str(bad), "0")
    assert code == 2 and "line 1" in err
    assert run(capsys, "equiv", str(tmp_path / "missing.aut"), "0", "corpus:fig1a", "q")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_fair_examples(capsys):
    assert run(capsys, "fair", "corpus:fig1a", "q", "(a)^w", "--mode", "strong", "--actions", "c")[0] == 1
    code, report = run_json(capsys, "fair", "corpus:fig1a", "q", "(a)^w", "--mode", "weak", "--actions", "c")
    assert code == 0 and report["results"]["witness"]["cycle"]["labels"] == ["a", "a"]
    code, report = run_json(capsys, "fair", "corpus:fig1b", "p", "a", "--mode", "weak", "--actions", "c")
    assert code == 0 and report["results"]["witness"] == {"states": [0, 0], "labels": ["a"]}
    assert run(capsys, "fair", "corpus:fig5", "q", "a(bc)^w", "--mode", "weak", "--actions", "d,e")[0] == 0
    assert run(capsys, "fair", "corpus:fig1a", "q", "(a", "--actions", "c")[0] == 2
    assert run(capsys, "fair", "corpus:fig1a", "q", "(x)^w")[0] == 2
    assert run(capsys, "fair", "corpus:fig1a", "q", "(a)^w", "--actions", "x")[0] == 2


def test_parse_word():
    sigma = ("a", "b", "c")
    assert parse_word("a(bc)^w", sigma) == Lasso(("a",), ("b", "c"))
    assert parse_word("a, b (c)^ω", sigma) == Lasso(("a", "b"), ("c",))
    assert parse_word("a b,c", sigma) == ("a", "b", "c")
    assert parse_word("", sigma) == ()
    assert parse_word("send (recv ack)^w", ("ack", "recv", "send")) == Lasso(("send",), ("recv", "ack"))
    with pytest.raises(Exception):
        parse_word("()^w", sigma)


def test_fair_compare(capsys):
    code, report = run_json(capsys, "fair-compare", "corpus:fig3-right", "r", "corpus:fig3-right", "s",
                            "--mode", "strong", "--actions", "d", "--stem-bound", "1", "--cycle-bound", "3")
    assert code == 1 and report["results"]["witness"]["text"] == "(abc)^w"
    assert report["bounds"]["stem"] == 1
    code, out, _ = run(capsys, "fair-compare", "corpus:fig5", "p", "corpus:fig5", "q", "--mode", "weak",
                       "--actions", "d,e", "--stem-bound", "1", "--cycle-bound", "3")
    assert code == 1 and "a(bc)^w only in q" in out
    assert run(capsys, "fair-compare", "corpus:fig5", "p", "corpus:fig5", "p", "--actions", "d")[0] == 0
    assert run(capsys, "fair-compare", "corpus:fig5", "p", "corpus:fig5", "q",
               "--stem-bound", "8", "--cycle-bound", "8")[0] == 3


def test_compose(tmp_path, capsys):
    out = tmp_path / "pq.aut"
    code, report = run_json(capsys, "compose", "corpus:fig7-p", "corpus:fig7-q", "--sync-shared", "--out", str(out))
    assert code == 0 and report["results"]["states"] == 2 and report["results"]["sync"] == ["a"]
    composed = tmp_path / "pq.aut"
    code, _, _ = run(capsys, "equiv", str(composed), "0", "corpus:fig7-composed", "pq", "--kind", "bisimulation")
    assert code == 0
    unit = tmp_path / "unit.aut"
    unit.write_text("des (0,0,1)\n")
    code, report = run_json(capsys, "compose", "corpus:fig5", str(unit), "--sync", "", "--root", "p,0")
    assert code == 0 and report["results"]["states"] == 9
    assert run(capsys, "compose", "corpus:fig7-p", "corpus:fig7-q", "--sync", "x")[0] == 2
    assert run(capsys, "compose", "corpus:fig7-p", "corpus:fig7-q", "--root", "p")[0] == 2


def test_corpus_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0 and "fig3-left: p=0, q=1, q1=2" in out
    target = tmp_path / "fig4.aut"
    assert run(capsys, "corpus", "export", "fig4", "--out", str(target))[0] == 0
    lts = parse_aut(target.read_text())
    assert lts.state_count == 11
    code, _, _ = run(capsys, "equiv", str(target), "p", str(target), "q", "--kind", "possible-futures")
    assert code == 0
    assert run(capsys, "corpus", "export")[0] == 2


def test_experiment(capsys):
    code, report = run_json(capsys, "experiment", "--suite", "lattice", "--cases", "10", "--seed", "3")
    assert code == 0 and report["seed"] == 3 and report["results"]["ok"]
    code, out, _ = run(capsys, "experiment", "--suite", "conjecture-pf-weak", "--cases", "3",
                       "--stem-bound", "1", "--cycle-bound", "2")
    assert code == 0 and "0 findings" in out
    assert run(capsys, "experiment", "--suite", "theorem1", "--cases", "0")[0] == 2


def test_dot_output(tmp_path, capsys):
    dot = tmp_path / "w.dot"
    code, _, _ = run(capsys, "fair", "corpus:fig1a", "q", "(a)^w", "--mode", "weak", "--actions", "c",
                     "--dot", str(dot))
    text = dot.read_text()
    assert code == 0 and text.startswith("digraph") and 'label="0:q"' in text and "color=red" in text
    assert text.count("->") == 4


def test_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "fairequiv", "experiment", "--suite", "theorem2", "--cases", "3",
           "--seed", "11", "--json", "--no-timing"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["results"]["ok"]
