import pytest

from bsfkit.algebra import LEX, Ring
from bsfkit.ideals import (
    Ideal,
    QuotientRing,
    RingMap,
    coefficient_ideal,
    eliminate,
    ideal_equal,
    ideal_power,
    intersect,
    is_effective_cartier,
    is_principal_cartier,
    is_regular,
    member,
    quotient,
    ring_map_kernel,
    saturate,
    saturate_iterated,
)
from conftest import R2


def I(ring, *gens):
    return Ideal.parse(ring, gens)


def test_member_examples():
    R = Ring(("x", "y", "z"), LEX)
    assert member(R.parse("y^3 - z^2"), I(R, "x^2 - y", "x^3 - z"))
    assert not member(Ring(("x",)).one, I(Ring(("x",)), "x"))
    assert member(R2.zero, I(R2, "x^2 + y"))


def test_ideal_equal_examples():
    assert ideal_equal(I(R2, "x", "y"), I(R2, "x + y", "y"))
    assert not ideal_equal(I(Ring(("x",)), "x^2"), I(Ring(("x",)), "x"))
    # <y>*<x,y> = <xy, y^2>, frozen by expanding the product
    assert ideal_equal(I(R2, "x*y", "y^2"), I(R2, "y") * I(R2, "x", "y"))


def test_eliminate_examples():
    R = Ring(("x", "y", "z"))
    E = eliminate(I(R, "y - x^2", "z - x^3"), ["y", "z"])
    # frozen from an independent lex basis
    assert ideal_equal(E, I(E.ring, "y^3 - z^2"))
    assert eliminate(I(R2, "x"), ["y"]).is_zero()
    E0 = eliminate(I(Ring(("x",)), "x - 1"), [])
    assert E0.is_zero() and E0.ring.nvars == 0


def test_quotient_examples():
    assert ideal_equal(quotient(I(R2, "x*y"), R2.var("x")), I(R2, "y"))
    # frozen: (x^2, xy) cap (x) divided by x
    assert ideal_equal(quotient(I(R2, "x^2", "x*y"), R2.var("x")), I(R2, "x", "y"))
    J = I(R2, "x^2 - y^3", "x*y")
    assert ideal_equal(quotient(J, R2.one), J)


def test_saturate_examples():
    # the closing ring examples: A -> A/(y) and the collapse of the line (y)
    assert saturate(I(R2, "x*y"), R2.var("x")).gb() == [R2.var("y")]
    assert saturate(I(R2, "y^2", "x*y"), R2.var("x")).gb() == [R2.var("y")]
    J = I(R2, "x^2 - y")
    assert ideal_equal(saturate(J, R2.var("x")), J)


def test_saturate_matches_iterated_colon():
    for gens, f in ((("x*y",), "x"), (("y^2", "x*y"), "x"), (("x^3*y", "x*y^2"), "x")):
        J = I(R2, *gens)
        assert ideal_equal(saturate(J, R2.parse(f)), saturate_iterated(J, R2.parse(f)))


def test_intersect_examples():
    assert ideal_equal(intersect(I(R2, "x"), I(R2, "y")), I(R2, "x*y"))
    # the closing ring example: V(y) and V(x) cover Spec QQ[x,y]/(y^2, xy)
    got = intersect(I(R2, "y", "y^2", "x*y"), I(R2, "x", "y^2", "x*y"))
    assert ideal_equal(got, I(R2, "y^2", "x*y"))
    J = I(R2, "x^2", "y - x")
    assert ideal_equal(intersect(J, Ideal.unit(R2)), J)


def test_ring_map_kernel_examples():
    S = Ring(("t",))
    phi = RingMap(R2, QuotientRing.free(S), [S.parse("t^2"), S.parse("t^3")])
    assert ideal_equal(ring_map_kernel(phi), I(R2, "y^2 - x^3"))
    ident = RingMap(R2, QuotientRing.free(R2), [R2.var("x"), R2.var("y")])
    assert ring_map_kernel(ident).is_zero()
    X = Ring(("x",))
    fat = RingMap(X, QuotientRing(S, I(S, "t^2")), [S.var("t")])
    assert ideal_equal(ring_map_kernel(fat), I(X, "x^2"))
    with pytest.raises(ValueError):
        RingMap(R2, QuotientRing.free(S), [S.var("t")])


def test_coefficient_ideal_examples():
    R = Ring(("c", "a", "a2"))
    C = coefficient_ideal(I(R, "c*(a - a2)"), ["a", "a2"])
    assert ideal_equal(C, I(C.ring, "c"))
    R = Ring(("c", "a"))
    assert ideal_equal(coefficient_ideal(I(R, "c"), ["a"]), I(Ring(("c",)), "c"))
    assert ideal_equal(coefficient_ideal(I(R, "c*a", "c^2"), ["a"]), I(Ring(("c",)), "c"))


def test_is_regular_examples():
    A = QuotientRing(R2, I(R2, "x*y"))
    assert not is_regular(R2.var("x"), A)
    assert is_regular(R2.var("x"), QuotientRing.free(R2))
    assert is_regular(R2.parse("x + y"), A)


def test_cartier_examples():
    free = QuotientRing.free(R2)
    st = is_principal_cartier(I(R2, "x"), free)
    assert (st.kind, str(st.generator)) == ("cartier", "x")
    st = is_principal_cartier(I(R2, "x"), QuotientRing(R2, I(R2, "x*y")))
    assert (st.kind, str(st.generator)) == ("principal_not_cartier", "x")
    assert is_principal_cartier(Ideal.unit(R2), free).kind == "full"


def test_effective_cartier_without_principal_generator():
    # on the chart u + v = 1 of the blown up plane the center is (p, q) = (p + q)
    R = Ring(("p", "q", "u", "v"))
    A = QuotientRing(R, I(R, "p*v - q*u", "u + v - 1"))
    assert is_effective_cartier(I(R, "p", "q"), A).is_cartier
    assert not is_effective_cartier(I(R2, "x", "y"), QuotientRing.free(R2)).is_cartier


def test_ideal_power():
    assert ideal_equal(ideal_power(I(R2, "x", "y"), 2), I(R2, "x^2", "x*y", "y^2"))
