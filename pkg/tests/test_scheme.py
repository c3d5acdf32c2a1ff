import pytest

from bsfkit.ideals import ideal_equal
from bsfkit.scheme import (
    AffineChart,
    ClosedSub,
    SchemeError,
    SchemeMap,
    adjoin_free,
    constant_along_fibres,
    flat_base_change_image_check,
    product,
    schematic_image,
)


def test_map_must_respect_relations():
    X = AffineChart.presented("X", ["x", "y"], ["x*y"])
    A = AffineChart.affine("A", ["t"])
    with pytest.raises(SchemeError):
        SchemeMap(A, X, {"x": "t", "y": "t"})
    SchemeMap(A, X, {"x": "t", "y": "0"})
    with pytest.raises(SchemeError):
        SchemeMap(A, X, {"x": "t"})


def test_compose_and_pullback():
    A = AffineChart.affine("A", ["t"])
    B = AffineChart.affine("B", ["x", "y"])
    C = AffineChart.affine("C", ["w"])
    f = SchemeMap(A, B, {"x": "t^2", "y": "t + 1"})
    g = SchemeMap(B, C, {"w": "x*y"})
    h = f.compose(g)
    assert str(h.images["w"]) == str(A.ring.parse("t^3 + t^2"))


def test_product_projections_pull_back_coordinates():
    P = product(AffineChart.presented("X", ["x"], ["x^2"]), AffineChart.affine("Y", ["y"]))
    assert ideal_equal(P.chart.modulus, P.chart.ideal(["x^2"]))
    assert P.first.target.name == "X" and P.second.target.name == "Y"


def test_product_renames_clashing_coordinates():
    X = AffineChart.affine("X", ["x"])
    P = product(X, X)
    assert len(set(P.chart.variables)) == 2


def test_image_of_twisted_cubic():
    f = SchemeMap(AffineChart.affine("T", ["t"]), AffineChart.affine("A3", ["x", "y", "z"]),
                  {"x": "t", "y": "t^2", "z": "t^3"})
    img = schematic_image(f)
    # frozen from an independent elimination
    assert ideal_equal(img.ideal, img.ambient.ideal(["y - x^2", "z - x^3", "x*z - y^2"]))


def test_image_of_empty_source_is_empty():
    E = AffineChart.presented("E", ["t"], ["1"])
    f = SchemeMap(E, AffineChart.affine("A", ["x"]), {"x": "t"})
    assert schematic_image(f).is_empty()


def test_adjoin_free_and_image_check():
    X = AffineChart.presented("X", ["x"], ["x^2"])
    Xb, new = adjoin_free(X, ["s"])
    assert new == ["s"] and list(Xb.variables) == ["x", "s"]
    assert ideal_equal(Xb.modulus, Xb.ideal(["x^2"]))
    f = SchemeMap(AffineChart.affine("T", ["t"]), AffineChart.affine("A", ["x", "y"]), {"x": "t", "y": "t^2"})
    assert flat_base_change_image_check(f, ["s", "r"])


def test_closed_sub_contains_modulus():
    X = AffineChart.presented("X", ["x", "y"], ["x*y"])
    Z = ClosedSub(X, X.ideal(["x"]))
    assert ideal_equal(Z.ideal, X.ideal(["x"]))
    assert not Z.is_empty() and not Z.is_everything()
    assert Z.inclusion().target is X


def test_constant_along_fibres_over_two_points():
    # the fibre coordinate a is a square root of 1; c*a is not constant, c*(a^2) is
    X = AffineChart.presented("X", ["c", "a"], ["a^2 - 1"])
    S = AffineChart.affine("S", ["c"])
    p = SchemeMap(X, S, {"c": "c"})
    W = AffineChart.affine("W", ["w"])
    assert not constant_along_fibres(SchemeMap(X, W, {"w": "c*a"}), p).holds
    r = constant_along_fibres(SchemeMap(X, W, {"w": "c*a^2"}), p)
    assert r.holds
    assert str(r.witness.source.coords.reduce(r.witness.images["w"])) == "c"
