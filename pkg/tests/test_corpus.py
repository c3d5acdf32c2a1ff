import json

import pytest

from bsfkit.cli import render_json
from bsfkit.corpus import ENTRIES, corpus_names, run_corpus, run_entry

MODULES = ("algebra_core", "ideal_ops", "scheme", "blowup", "weil", "family", "bsf", "cli")


def test_every_module_has_examples():
    for m in MODULES:
        assert len([n for n in ENTRIES if n.startswith(m + ".")]) >= 3, m


@pytest.mark.parametrize("name", corpus_names())
def test_entry(name):
    out = run_entry(name)
    assert out["passed"], json.dumps(out["output"], indent=1)[:2000]


def test_parallel_run_matches_sequential():
    names = [n for n in corpus_names() if n.startswith(("ideal_ops.", "weil."))]
    seq = [render_json(run_entry(n)) for n in names]
    code, doc = run_corpus("all", jobs=4)
    assert code == 0
    par = {e["name"]: render_json(e) for e in doc["entries"]}
    assert [par[n] for n in names] == seq
