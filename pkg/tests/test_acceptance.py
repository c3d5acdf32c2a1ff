"""Acceptance criteria, each timed against its limit.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Run directly with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from bsfkit.bsf import bsf_pipeline, bsf_structure, cluster_fixtures, compare_with_rees, verify_small_resolution_fixture
from bsfkit.fixtures import ALGEBRAS, factorization_suite, origin_pipeline_input, p1_p2_atlas
from bsfkit.ideals import ideal_equal

LINES = []


def report(n, title, ok, elapsed, limit, detail=""):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {n} {status}: {title} ({elapsed:.2f}s, limit {limit:g}s)"
    if detail:
        line += f" {detail}"
    LINES.append(line)
    print(line)
    return ok and within


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_1_closing_ring_fixtures():
    rep, dt = timed(cluster_fixtures)
    bad = [c.name for c in rep.checks if not c.passed]
    assert report(1, "closing ring fixtures", rep.ok, dt, 1, f"{len(rep.checks)} checks"), bad


def _structure():
    res = bsf_structure(p1_p2_atlas())
    ok = res.components == ["empty", "1"] and res.core_empty and not res.partial
    for p in res.pieces:
        X = p.b.target
        z = X.ring.var("z") if "z" in X.variables else None
        if p.component == "1":
            # the length one component is V+(z): z = 0 on the x and y charts, absent on z = 1
            ok = ok and z is not None and ideal_equal(p.chart.modulus, p.chart.ideal(["z"]))
        else:
            # the empty fiber component lives where z is invertible
            ok = ok and (z is None or p.chart.ideal(["z"]).is_unit() or _z_invertible(p))
    charts = {p.b.target.name for p in res.pieces}
    return ok and charts == {"x=1", "y=1", "z=1"}


def _z_invertible(p):
    from bsfkit.ideals import is_regular

    z = p.chart.ring.var("z")
    return (p.chart.modulus + p.chart.ideal(["z"])).is_unit() and is_regular(z, p.chart.coords)


def test_criterion_2_graph_structure():
    ok, dt = timed(_structure)
    assert report(2, "bsf_structure on the P^1 x P^2 atlas: V+(z) and its complement, empty core", ok, dt, 10)


def test_criterion_3_small_resolution():
    rep, dt = timed(verify_small_resolution_fixture)
    bad = [c.name for c in rep.checks if not c.passed]
    assert report(3, "verify_small_resolution_fixture", rep.ok, dt, 30, f"{len(rep.checks)} checks"), bad


def _degenerations():
    X, Z = origin_pipeline_input()
    out = {}
    for key in sorted(ALGEBRAS):
        res = bsf_pipeline(X, ALGEBRAS[key](), Z)
        out[key] = compare_with_rees(res, X, X.ideal(Z)) == [True, True]
    return out


def test_criterion_4_pipeline_degenerates_to_rees():
    out, dt = timed(_degenerations)
    ok = all(out.values())
    assert report(4, "pipeline over QQ, D, QxQ gives the Rees charts", ok, dt, 10,
                  " ".join(f"{k}={'ok' if v else 'bad'}" for k, v in out.items())), out


def _properties():
    import test_properties as tp

    tp.CASES.clear()
    for name in tp.PROPERTIES:
        getattr(tp, name)()
    return {name: tp.CASES[name] for name in tp.PROPERTIES}


def test_criterion_5_property_suite():
    counts, dt = timed(_properties)
    ok = len(counts) == 7 and all(c >= 200 for c in counts.values())
    assert report(5, "property suite, >= 200 fixed-seed cases each", ok, dt, 300,
                  f"min {min(counts.values())} cases over {len(counts)} properties"), counts


def test_criterion_6_factorization_banks():
    outcomes, dt = timed(factorization_suite)
    per = {}
    for o in outcomes:
        per.setdefault(o.fixture, []).append(o)
    bad = [f"{o.fixture}:{o.name}" for o in outcomes if o.misclassified]
    ok = not bad and all(len(v) >= 10 for v in per.values())
    assert report(6, "factorization banks, zero misclassifications", ok, dt, 60,
                  f"{len(outcomes)} maps over {len(per)} fixtures"), bad


def _corpus_bytes():
    cmd = [sys.executable, "-m", "bsfkit", "corpus", "run", "all"]
    return [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]


def test_criterion_7_corpus_is_deterministic():
    (a, b), dt = timed(_corpus_bytes)
    ok = a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    assert report(7, "two corpus runs are byte identical", ok, dt, 120,
                  f"{len(a.stdout)} bytes"), (a.returncode, b.returncode, a.stderr[-500:])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
