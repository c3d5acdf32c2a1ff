import json

import pytest
from hypothesis import given, strategies as st

from bsfkit.algebra import Ring
from bsfkit.cli import execute_text, main, render_json, render_text
from bsfkit.jobfile import (
    Command,
    IdealDecl,
    JobError,
    JobFile,
    RingDecl,
    SchemeDecl,
    parse_job,
    print_job,
)
from conftest import polys

SAT = "ring R = QQ[x,y] grevlex;\nideal I = (x*y, y^2) in R;\nrun saturate I by x;\n"


def err(text):
    with pytest.raises(JobError) as ei:
        parse_job(text)
    e = ei.value
    return e.code, e.line, e.col


def test_parse_saturate_job():
    j = parse_job(SAT)
    assert j.command == Command("saturate", ("I", "x"))
    assert j.lookup("I") == IdealDecl("I", ("x*y", "y^2"), "R")


def test_syntax_errors_carry_positions():
    assert err("ring R = QQ[x,y]\nideal I = (x) in R;\nrun groebner I;\n") == ("E-SYNTAX", 1, 17)
    assert err("ring R = QQ[x,x];\n")[0] == "E-SYNTAX"
    assert err("ring R = QQ[x];\nrun frobnicate R;\n")[:2] == ("E-SYNTAX", 2)
    assert err("ring R = QQ[x];\nideal I = (x +) in R;\nrun groebner I;\n")[:2] == ("E-SYNTAX", 2)


def test_undeclared_names():
    assert err("ring R = QQ[x];\nrun groebner I;\n")[:2] == ("E-UNDECLARED", 2)
    assert err("ring R = QQ[x];\nideal I = (y) in R;\nrun groebner I;\n")[:2] == ("E-UNDECLARED", 2)
    assert err("ideal I = (x) in R;\n")[0] == "E-UNDECLARED"


def test_arity_errors():
    assert err("ring R = QQ[x];\nideal I = (x) in R;\nrun saturate I by;\n")[0] == "E-ARITY"
    assert err("ring R = QQ[x];\nideal I = (x) in R;\nrun groebner I, I;\n")[0] == "E-ARITY"
    text = "ring R = QQ[x,y];\nring S = QQ[t];\nmap f : R -> S = (t);\nrun image f;\n"
    assert err(text)[:2] == ("E-ARITY", 3)


def test_type_errors():
    text = "ring R = QQ[x];\nring S = QQ[y];\nideal I = (x) in R;\nideal J = (y) in S;\nrun intersect I, J;\n"
    assert err(text)[:2] == ("E-TYPE", 5)
    assert err("ring R = QQ[x];\nrun groebner R;\n")[0] in ("E-TYPE", "E-UNDECLARED")


def test_exit_codes(tmp_path, capsys):
    ok = tmp_path / "ok.job"
    ok.write_text(SAT)
    assert main(["run", str(ok), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1 and doc["result"]["gb"] == ["y"]

    bad = tmp_path / "bad.job"
    bad.write_text("ring R = QQ[x]\n")
    assert main(["run", str(bad)]) == 1
    assert "E-SYNTAX" in capsys.readouterr().out

    math = tmp_path / "math.job"
    math.write_text("ring R = QQ[x,u];\nideal N = (u^2 - 1) in R;\nscheme S = R / N;\n"
                    "run productform S fiber (u) along (u - 1)*x;\n")
    assert main(["run", str(math), "--format", "json"]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["code"] == "E-MATH"

    assert main(["run", str(tmp_path / "missing.job")]) == 1
    assert main(["bogus"]) == 1


def test_budget_exit(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("BSFKIT_GB_STEP_LIMIT", "1")
    job = tmp_path / "b.job"
    job.write_text("ring R = QQ[x,y,z] lex;\nideal I = (x^2 - y, x*y - z, x*z - y^2) in R;\nrun groebner I;\n")
    assert main(["run", str(job), "--format", "json"]) == 3
    assert json.loads(capsys.readouterr().out)["error"]["code"] == "E-BUDGET"


def test_bad_algebra_table_is_math_failure():
    code, doc = execute_text("ring R = QQ[x];\nscheme X = R;\nalgebra B dim 3;\ne2*e3 = e2;\nrun restrict X over B;\n")
    assert code == 2 and "associative" in doc["error"]["message"]


def test_json_round_trip_and_text():
    code, doc = execute_text(SAT)
    assert json.loads(render_json(doc)) == doc
    assert render_json(doc) == render_json(json.loads(render_json(doc)))
    assert "status: ok" in render_text(doc)


def test_corpus_list_and_run(capsys):
    assert main(["corpus", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "ideal_ops.saturate.1" in names and len(names) >= 96
    assert main(["corpus", "run", "ideal_ops.saturate.1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["failed"] == [] and doc["entries"][0]["passed"]
    assert main(["corpus", "run", "no.such.entry"]) == 1


VARS = ("x", "y", "z", "a", "b")


@st.composite
def jobs(draw):
    vs = draw(st.lists(st.sampled_from(VARS), min_size=1, max_size=4, unique=True))
    order = draw(st.sampled_from(["grevlex", "lex"]))
    R = Ring(tuple(vs))
    gens = draw(st.lists(polys(R, max_terms=3, max_deg=3), min_size=1, max_size=3))
    decls = [RingDecl("R", tuple(vs), order), IdealDecl("I", tuple(str(g) for g in gens), "R")]
    kind = draw(st.sampled_from(["groebner", "saturate", "eliminate", "iso", "member"]))
    if kind == "groebner":
        cmd = Command("groebner", ("I",))
    elif kind == "saturate":
        cmd = Command("saturate", ("I", str(draw(polys(R, max_terms=2, max_deg=2)))))
    elif kind == "member":
        cmd = Command("member", (str(draw(polys(R, max_terms=2, max_deg=2))), "I"))
    elif kind == "eliminate":
        cmd = Command("eliminate", ("I", tuple(draw(st.lists(st.sampled_from(vs), unique=True)))))
    else:
        decls.append(SchemeDecl("X", "R"))
        cmd = Command("iso", ("I", "X", (draw(st.sampled_from(vs)),)))
    return JobFile(tuple(decls), cmd)


@given(jobs())
def test_print_parse_round_trip(job):
    text = print_job(job)
    assert parse_job(text) == job
    assert print_job(parse_job(text)) == text
