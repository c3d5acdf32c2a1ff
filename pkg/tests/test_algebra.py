from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsfkit.algebra import (
    GREVLEX,
    LEX,
    GroebnerBudgetExceeded,
    PolySyntaxError,
    Ring,
    TermOrder,
    groebner,
    is_groebner,
    normal_form,
    parse_poly,
)
from conftest import R2, R3, nonzero_polys, polys


def test_arithmetic_examples():
    x, y = R2.var("x"), R2.var("y")
    assert (x + y) + (x - y) == x.scale(2)
    assert (x + y) * (x - y) == x * x - y * y


@given(polys(R3))
def test_times_zero(p):
    assert (p * R3.zero).is_zero()


@given(polys(R3), polys(R3), polys(R3))
@settings(max_examples=60)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a - a == R3.zero


@given(polys(R3))
@settings(max_examples=80)
def test_print_parse_roundtrip(p):
    assert parse_poly(str(p), R3) == p


def test_parse_errors():
    with pytest.raises(PolySyntaxError, match="implicit multiplication"):
        R2.parse("2x")
    with pytest.raises(PolySyntaxError, match="unknown variable"):
        R2.parse("x + q")
    with pytest.raises(PolySyntaxError):
        R2.parse("x +")
    assert R2.parse("(x + y)^2 / 2") == (R2.var("x") + R2.var("y")) ** 2 * R2.const(Fraction(1, 2))


def test_exact_rationals():
    p = R2.parse("x/3 + y/6")
    assert p.monic() == R2.parse("x + y/2")
    assert p.lc() == Fraction(1, 3)


def test_normal_form_examples():
    R = Ring(("x", "y"), LEX)
    # two division steps: x^2*y -> y*y
    assert normal_form(R.parse("x^2*y"), [R.parse("x^2 - y")]) == R.parse("y^2")
    assert normal_form(R.one, [R.var("x")]) == R.one


def test_groebner_twisted_cubic_lex():
    R = Ring(("x", "y", "z"), LEX)
    G = groebner([R.parse("x^2 - y"), R.parse("x^3 - z")])
    # frozen from an independent Groebner engine
    want = {R.parse(s) for s in ("x^2 - y", "x*y - z", "x*z - y^2", "y^3 - z^2")}
    assert set(G) == want
    assert all(normal_form(g, G).is_zero() for g in G)


def test_groebner_small_examples():
    R = Ring(("x",))
    assert groebner([R.var("x"), R.parse("x^2")]) == [R.var("x")]
    assert groebner([R2.parse("2*x + 2*y")]) == [R2.parse("x + y")]
    assert groebner([R2.zero]) == []


def test_block_order_eliminates_first_block():
    R = Ring(("t", "x", "y"), TermOrder("block", 1))
    G = groebner([R.parse("x - t^2"), R.parse("y - t^3")])
    low = [g for g in G if g.degree_in("t") == 0]
    assert low == [R.parse("x^3 - y^2")] or low == [R.parse("y^2 - x^3")]


def test_budget(monkeypatch):
    monkeypatch.setenv("BSFKIT_GB_STEP_LIMIT", "1")
    R = Ring(("x", "y", "z"), LEX)
    with pytest.raises(GroebnerBudgetExceeded):
        groebner([R.parse("x^2 - y"), R.parse("x^3 - z"), R.parse("y*z - 1")])


@given(st.lists(nonzero_polys(R2, max_terms=3, max_deg=2), min_size=1, max_size=3))
@settings(max_examples=60)
def test_groebner_is_reduced_and_spans(gens):
    G = groebner(gens)
    assert is_groebner(G)
    assert all(normal_form(g, G).is_zero() for g in gens)
    assert all(g.lc() == 1 for g in G)
    assert groebner(G) == G
