import io
import json
import os
import sys

import pytest

from idlogic import cli
from idlogic.syntax import parse_theory

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "idlogic", "data")


def d(name):
    return os.path.join(DATA, name)


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_wfm_total():
    code, text = run("wfm", d("delta0.idl"), d("unit.json"))
    assert code == 0
    assert text.splitlines()[0] == "total: yes; P=true; Q=false"


def test_wfm_liar():
    code, text = run("wfm", d("liar.idl"), d("unit.json"))
    assert code == 3
    assert "P: undefined" in text


def test_wfm_even_chain():
    code, text = run("wfm", d("even.idl"), d("chain4.json"))
    assert code == 0 and "E={0, 2, 4}" in text
    code, text = run("wfm", d("even.idl"), d("chain5.json"))
    assert code == 3 and "E[5]: undefined" in text


def test_wfm_trace_and_dump():
    code, text = run("wfm", d("delta0.idl"), d("unit.json"), "--trace", "--dump", "--dot")
    assert code == 0
    assert "initial: I = {}, J = {P, Q}" in text
    assert "digraph" in text


def test_wfm_json():
    code, text = run("wfm", d("even.idl"), d("chain5.json"), "--json", "--trace")
    data = json.loads(text)
    assert code == 3
    assert data["schema"] == "v1" and data["total"] is False
    assert data["undefined"] == ["E[5]"]
    assert data["trace"][0]["stage"] == -1 or "I" in data["trace"][0]


def test_models():
    code, text = run("models", d("loop_split.idl"))
    assert code == 0 and text.startswith("models: 2")
    code, text = run("models", d("loop.idl"))
    assert code == 0 and text.startswith("models: 1")
    code, text = run("models", d("loop.idl"), "--json")
    assert json.loads(text)["count"] == 1


def test_partition():
    code, text = run("partition", d("even_odd.idl"), d("schain5.json"), "--groups", "E:1,O:2")
    assert code == 0
    assert text.splitlines()[0] == "reduction partition: certified"
    code, text = run("partition", d("loop.idl"), d("unit.json"), "--groups", "P:1,Q:2")
    assert code == 3 and text.startswith("reduction partition: unknown")


def test_partition_bad_groups():
    code, _ = run("partition", d("loop.idl"), d("unit.json"), "--groups", "P1")
    assert code == 2


@pytest.mark.parametrize("op", ["complete", "posind", "circ"])
def test_transform_reparses(op):
    code, text = run("transform", d("even.idl"), "--op", op)
    assert code == 0
    parse_theory(text)


def test_transform_completion_text():
    _, text = run("transform", d("even.idl"), "--op", "complete")
    assert "!y: E(y) <=> y=0 | ?x: (y=s(x) & ~E(x))" in text


def test_exit_codes():
    assert run("wfm", d("nope.idl"), d("unit.json"))[0] == 1
    assert run("check", d("delta0.idl"), d("unit.json"))[0] == 2
    assert run("wfm", d("bad.idl"), d("unit.json"))[0] == 3


def test_parse_error(tmp_path):
    p = tmp_path / "broken.idl"
    p.write_text("pred P/0. { P <- . }")
    assert run("wfm", str(p), d("unit.json"))[0] == 1


def test_budget(monkeypatch):
    monkeypatch.setenv("IDLOGIC_BUDGET", "2")
    code, _ = run("wfm", d("even.idl"), d("chain5.json"))
    assert code == 4


def test_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(open(d("delta0.idl")).read()))
    code, text = run("wfm", "-", d("unit.json"))
    assert code == 0 and "P=true" in text
