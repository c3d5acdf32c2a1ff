from fractions import Fraction

import pytest

from bsfkit.ideals import ideal_equal
from bsfkit.scheme import AffineChart, SchemeMap
from bsfkit.weil import (
    AlgebraTableError,
    FiniteAlgebra,
    adjunction_check,
    base_change,
    eval_over_B,
    rational_points,
    rational_roots,
    restrict_affine,
    restrict_map,
    restrict_scheme,
)


def test_presets_multiply():
    D = FiniteAlgebra.dual_numbers()
    S = FiniteAlgebra.split()
    assert D.mul((1, 2), (3, 4)) == (3, 10)  # (1 + 2e)(3 + 4e) = 3 + 10e
    assert S.mul((0, 1), (0, 1)) == (0, 1)
    assert FiniteAlgebra.rational().dim == 1


def test_invalid_tables_rejected():
    with pytest.raises(AlgebraTableError):
        FiniteAlgebra.from_products("bad", 2, {(1, 2): (1, 0)})
    with pytest.raises(AlgebraTableError):
        FiniteAlgebra.from_products("bad", 2, {(3, 3): (0, 0)})
    # e2*e3 = e2 with e2*e2 = e3*e3 = 0 is not associative: (e2 e3) e3 = e2, e2 (e3 e3) = 0
    with pytest.raises(AlgebraTableError):
        FiniteAlgebra.from_products("bad", 3, {(2, 3): (0, 1, 0)})
    with pytest.raises(AlgebraTableError):
        FiniteAlgebra.from_products("bad", 2, {(2, 2): (0, 1, 0)})


def test_tensor_of_dual_numbers():
    D = FiniteAlgebra.dual_numbers()
    T = D.tensor(D)
    assert T.dim == 4
    e = (0, 1, 0, 0)
    assert T.mul(e, e) == (0, 0, 0, 0)


def test_restrict_over_dual_numbers():
    # frozen: x^2 - 3 - 5e over D restricts to (x0^2 - 3, 2 x0 x1 - 5)
    X = AffineChart.presented("X", ["x", "e2"], ["x^2 - 3 - 5*e2"])
    R = restrict_scheme(X, FiniteAlgebra.dual_numbers())
    assert ideal_equal(R.restricted.modulus, R.restricted.ideal(["x_0^2 - 3", "2*x_0*x_1 - 5"]))


def test_restrict_over_split_algebra():
    R = restrict_affine(["x"], ["x^2 - 2*x"], FiniteAlgebra.split())
    # frozen grevlex basis from an independent computation
    want = ["x_0^2 - 2*x_0", "x_1^2 + 2*x_0*x_1 - 2*x_1", "x_1^3 - 4*x_1"]
    assert ideal_equal(R.restricted.modulus, R.restricted.ideal(want))
    assert len(rational_points(R.restricted.modulus)) == 4


def test_restrict_over_rationals_is_identity():
    X = AffineChart.presented("X", ["x", "y"], ["x*y - 1"])
    R = restrict_scheme(X, FiniteAlgebra.rational())
    assert ideal_equal(R.restricted.modulus, R.restricted.ideal(["x_0*y_0 - 1"]))


def test_restrict_map_square():
    B = FiniteAlgebra.dual_numbers()
    A = AffineChart.affine("A", ["x"])
    src, tgt = restrict_scheme(A, B), restrict_scheme(AffineChart.affine("A'", ["y"]), B)
    h = restrict_map(SchemeMap(A, AffineChart.affine("A'", ["y"]), {"y": "x^3"}), B, src, tgt)
    # (x0 + x1 e)^3 = x0^3 + 3 x0^2 x1 e
    assert {k: str(v) for k, v in h.images.items()} == {"y_0": "x_0^3", "y_1": "3*x_0^2*x_1"}


def test_eval_over_B():
    B = FiniteAlgebra.dual_numbers()
    R = AffineChart.affine("A", ["x"]).ring
    assert eval_over_B(R.parse("x^2 + 1"), B, {"x": (Fraction(1), Fraction(1))}) == (2, 2)


def test_base_change_presents_tensor():
    X = AffineChart.presented("X", ["x"], ["x^2"])
    Xb = base_change(X, FiniteAlgebra.split())
    assert "e2" in Xb.variables
    assert ideal_equal(Xb.modulus, Xb.ideal(["x^2", "e2^2 - e2"]))


def test_rational_roots():
    from bsfkit.algebra import Ring

    R = Ring(("t",))
    assert sorted(rational_roots(R.parse("6*t^3 - 5*t^2 - 2*t + 1"))) == [Fraction(-1, 2), Fraction(1, 3), 1]
    assert rational_roots(R.parse("t^2 + 1")) == []


def test_adjunction_points_and_empty():
    R = restrict_scheme(AffineChart.presented("X", ["x"], ["x^2 - 1"]), FiniteAlgebra.dual_numbers())
    rep = adjunction_check(R)
    assert rep.holds is True
    # frozen: x0 = +-1, x1 = 0
    got = sorted((p["x_0"], p["x_1"]) for p in rep.restricted_points)
    assert got == [(-1, 0), (1, 0)]
    assert adjunction_check(R, "empty").holds is True
