import io
import json
import subprocess
import sys

import pytest

from liftstar import cli
from liftstar.corpus import (CorpusFile, bundled_files, load, load_bundled, parse_text, quantale_block, same_semantics,
                             serialize)
from liftstar.errors import DanglingReference, ParseError, ValidationError
from liftstar.quantale import boolean, godel, lukasiewicz, max_chain3, powerset_z2

BAD = """# commutative and unital, not associative
quantale skew
labels: ["0", "a", "1"]
order: [["0", "a"], ["a", "1"]]
unit: "1"
mult: [["0", "a", "0"], ["a", "1", "a"], ["0", "a", "1"]]
end
"""


def run(*argv):
    buf = io.StringIO()
    code, report = cli.run(list(argv), buf)
    return code, buf.getvalue(), report


# corpus

def test_bundled_quantales_match_constructors():
    c = load_bundled()
    pairs = {"boolean": boolean(), "godel3": godel(3), "lukasiewicz3": lukasiewicz(3),
             "lukasiewicz4": lukasiewicz(4), "maxchain3": max_chain3(), "powerset_z2": powerset_z2()}
    for name, q in pairs.items():
        assert c.quantale(name).same_as(q), name
    assert "functors.q" in bundled_files()


def test_round_trip_preserves_semantics():
    c = load_bundled()
    again = parse_text(serialize(c))
    assert same_semantics(c, again)
    assert serialize(again) == serialize(c)


def test_quantale_block_round_trip():
    q = lukasiewicz(4)
    text = serialize(CorpusFile({"l4": quantale_block(q, "l4")}))
    assert parse_text(text).quantale("l4").same_as(q)


@pytest.mark.parametrize("text", ["", "# only a comment\n", "quantale q\nlabels: [\"0\"]\n",
                                  "quantale q\nlabels: [0\nend\n", "widget w\nend\n"],
                         ids=["empty", "comment", "no-end", "bad-json", "unknown-kind"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_text(text)


def test_missing_key_and_dangling_reference():
    with pytest.raises(ParseError):
        parse_text('quantale q\nlabels: ["0", "1"]\nend\n')
    with pytest.raises(DanglingReference):
        parse_text('dual d\nquantale: "nowhere"\nomega: "0"\nend\n')


def test_validation_error_names_the_block():
    with pytest.raises(ValidationError) as ei:
        parse_text(BAD)
    assert ei.value.block == "skew"


def test_load_merges_extra_files(tmp_path):
    p = tmp_path / "extra.q"
    p.write_text(BAD)
    c = load([str(p)], validate=False)
    assert "skew" in c.names("quantale") and "godel3" in c.names("quantale")


# command line

def test_girard_godel():
    code, out, report = run("girard", "godel3", "--omega", "0")
    assert code == 0
    assert json.loads(report.info["quotient <godel3, omega=0>"])["carrier"] == ["0", "1"]
    assert 'quotient <godel3, omega=0>: {"carrier":["0","1"]' in out


def test_dualizing_godel_fails_with_witness():
    code, out, report = run("check-dualizing", "godel3", "--omega", "0", "--instance", "powq")
    assert code == 1
    v = next(v for v in report.verdicts if v.law_id == "dual.A_left")
    assert v.witness["inputs"]["a"] == ["1/2"]
    assert "witness" in out


def test_closed_lukasiewicz():
    code, out, _ = run("check-closed", "lukasiewicz3", "--instance", "powq", "--max-obj", "2")
    assert code == 0
    assert "result: PASS" in out


def test_exit_two_on_bad_input(tmp_path):
    assert run("girard", "nosuch")[0] == 2
    assert run("girard", "godel3", "--omega", "7")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("nucleus", "godel3")[0] == 2
    p = tmp_path / "bad.q"
    p.write_text(BAD)
    assert run("girard", "skew", "--corpus", str(p))[0] == 2
    p.write_text("")
    assert run("girard", "--corpus", str(p))[0] == 2


def test_check_quantale_reports_a_bad_table(tmp_path):
    p = tmp_path / "bad.q"
    p.write_text(BAD)
    code, out, report = run("check-quantale", "skew", "--corpus", str(p))
    assert code == 1
    v = next(v for v in report.verdicts if v.law_id == "quantale.associative")
    assert v.witness["inputs"] == {"a": "0", "b": "a", "c": "a"}


def test_digest_is_deterministic_and_parallel_safe(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    run("girard", "--json", str(a))
    run("girard", "--json", str(b))
    run("girard", "--json", str(c), "--parallel", "2")
    da, db, dc = (json.loads(p.read_text())["digest"] for p in (a, b, c))
    assert da == db == dc


def test_replay_reproduces_every_witness(tmp_path):
    side = tmp_path / "w.json"
    code, _, _ = run("check-dualizing", "godel3", "--omega", "0", "--json", str(side))
    assert code == 1
    code, out, _ = run("check-dualizing", "godel3", "--omega", "0", "--replay", str(side))
    assert code == 1
    lines = [l for l in out.splitlines() if l.startswith("[")]
    assert lines and all(l.startswith("[REPRODUCED]") for l in lines)


def test_replay_refuses_other_command_lines(tmp_path):
    side = tmp_path / "w.json"
    run("check-dualizing", "godel3", "--omega", "0", "--json", str(side))
    assert run("check-dualizing", "lukasiewicz3", "--omega", "0", "--replay", str(side))[0] == 2


def test_json_records_budgets_and_witnesses(tmp_path):
    side = tmp_path / "w.json"
    run("check-dualizing", "godel3", "--omega", "0", "--json", str(side))
    body = json.loads(side.read_text())
    assert body["status"] == "fail" and "timings" in body
    for rec in body["verdicts"]:
        assert rec["budget"]
        if rec["status"] == "fail":
            w = rec["witness"]
            assert {"inputs", "lhs", "rhs"} <= set(w)


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "liftstar.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "liftstar" in r.stdout
