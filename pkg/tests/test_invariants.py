"""Per-module invariants beyond the acceptance property suite."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from bsfkit.algebra import Ring, divmod_poly, groebner
from bsfkit.blowup import blowup_locally_principal, blowup_rees, factors_through, rees_overlap_consistent
from bsfkit.bsf import bsf_pipeline, bsf_structure
from bsfkit.family import fiber_length_at, flattening_strata, iso_locus, make_split
from bsfkit.fixtures import ALGEBRAS, determinantal_atlas, p1_p2_atlas, zero_section_atlas
from bsfkit.ideals import (
    Ideal,
    QuotientRing,
    RingMap,
    coefficient_ideal,
    ideal_equal,
    intersect,
    is_regular,
    lift,
    member,
    ring_map_kernel,
)
from bsfkit.scheme import AffineChart, ClosedSub, SchemeMap, constant_along_fibres, product, schematic_image
from bsfkit.weil import FiniteAlgebra, expand, restrict_affine, vec_mul
from conftest import R2, R3, coeffs, nonzero_polys, polys

FEW = settings(max_examples=60)


def small_gens(ring, n=3, **kw):
    kw.setdefault("max_terms", 2)
    kw.setdefault("max_deg", 2)
    return st.lists(nonzero_polys(ring, **kw), min_size=1, max_size=n)


# --- algebra_core --------------------------------------------------------------------------

@FEW
@given(polys(R3, max_terms=4, max_deg=3), small_gens(R3))
def test_division_quotients_witness_membership(f, G):
    q, r = divmod_poly(f, G)
    acc = r
    for qi, g in zip(q, G):
        acc = acc + qi * g
    assert acc == f
    GB = groebner(G)
    _, r2 = divmod_poly(f, GB)
    assert lift(f - r2, GB) is not None


@FEW
@given(small_gens(R3, max_terms=3), st.randoms(use_true_random=False), st.lists(coeffs(nonzero=True), min_size=3, max_size=3))
def test_reduced_basis_is_unique(G, rnd, scales):
    H = [g.scale(c) for g, c in zip(G, scales + [Fraction(1)] * len(G))]
    rnd.shuffle(H)
    assert groebner(H) == groebner(G)


# --- ideal_ops -----------------------------------------------------------------------------

@FEW
@given(nonzero_polys(R2), nonzero_polys(R2))
def test_product_lies_in_intersection(p, q):
    assert member(p * q, intersect(Ideal(R2, [p]), Ideal(R2, [q])))


T1 = Ring(("t", "s"))


@FEW
@given(st.lists(polys(T1, max_terms=2, max_deg=2), min_size=2, max_size=2))
def test_kernel_members_map_to_zero(images):
    phi = RingMap(R2, QuotientRing.free(T1), images)
    sub = {"x": images[0], "y": images[1]}
    for k in ring_map_kernel(phi).gens:
        assert k.substitute(sub, T1).is_zero()


CA = Ring(("c", "d", "a"))


@FEW
@given(small_gens(CA), small_gens(CA, n=2))
def test_coefficient_ideal_is_monotone(I, extra):
    small = coefficient_ideal(Ideal(CA, I), ["a"])
    big = coefficient_ideal(Ideal(CA, I + extra), ["a"])
    assert big.contains(small)


# --- scheme --------------------------------------------------------------------------------

A2 = AffineChart.affine("A2", ["x", "y"])
TT = AffineChart.affine("T", ["t", "s"])


@FEW
@given(st.lists(polys(T1, max_terms=2, max_deg=2), min_size=2, max_size=2), small_gens(R2, n=2))
def test_image_is_smallest(images, cands):
    f = SchemeMap(TT, A2, {"x": images[0], "y": images[1]})
    img = schematic_image(f)
    kernel_built = [k * c for k in img.ideal.gens for c in cands]
    for gens in (cands, kernel_built):
        Z = ClosedSub(A2, Ideal(R2, gens))
        if factors_through(f, Z):
            assert img.ideal.contains(Z.ideal)


@FEW
@given(st.lists(polys(T1, max_terms=2, max_deg=2), min_size=2, max_size=2), small_gens(R2, n=2))
def test_iso_descent_through_image(images, zgens):
    f = SchemeMap(TT, A2, {"x": images[0], "y": images[1]})
    img = schematic_image(f)
    Z = Ideal(R2, zgens)
    assert f.pull_ideal(Z).is_unit() == (img.ideal + Z).is_unit()


def test_constancy_is_stable_under_closed_embeddings():
    X = AffineChart.presented("X", ["c", "a"], ["a^2 - a"])
    p = SchemeMap(X, AffineChart.affine("S", ["c"]), {"c": "c"})
    W = AffineChart.affine("W", ["w"])
    W2 = AffineChart.affine("W2", ["w", "z"])
    for img in ("c^2", "c*a", "c*a^2 - c*a + 1", "a"):
        f = SchemeMap(X, W, {"w": img})
        g = SchemeMap(X, W2, {"w": img, "z": "0"})  # f followed by w -> (w, 0)
        assert constant_along_fibres(f, p).holds == constant_along_fibres(g, p).holds


def test_product_is_associative():
    X = AffineChart.presented("X", ["x"], ["x^2"])
    Y = AffineChart.presented("Y", ["y"], ["y^3 - y"])
    Z = AffineChart.presented("Z", ["z"], ["z - 1"])
    left = product(product(X, Y).chart, Z).chart
    right = product(X, product(Y, Z).chart).chart
    assert list(left.variables) == list(right.variables) == ["x", "y", "z"]
    assert ideal_equal(left.modulus, Ideal(left.ring, [g.to_ring(left.ring) for g in right.modulus.gens]))


# --- blowup --------------------------------------------------------------------------------

def test_saturation_blowup_universal_property():
    X = AffineChart.presented("X", ["x", "y"], ["x*y", "y^2"])
    r = blowup_locally_principal(X, "x")
    T = AffineChart.affine("T", ["t"])
    for images in ({"x": "t", "y": "0"}, {"x": "t^2 + 1", "y": "0"}):
        h = SchemeMap(T, X, images)
        assert is_regular(h.pullback(X.ring.var("x")), T.coords)
        assert factors_through(h, r.result)


def test_saturation_blowup_against_primary_decompositions():
    # hand decompositions: the result keeps the components whose radical avoids f
    cases = [
        (["y^2", "x*y"], [["y"], ["x", "y^2"]], "x"),
        (["x^2*y"], [["x^2"], ["y"]], "x"),
        (["x^2*y"], [["x^2"], ["y"]], "y"),
        (["x*y*(x - y)"], [["x"], ["y"], ["x - y"]], "x - y"),
    ]
    for mod, comps, f in cases:
        X = AffineChart.presented("X", ["x", "y"], mod)
        r = blowup_locally_principal(X, f)
        fp = R2.parse(f)
        keep = [Ideal(R2, [R2.parse(g) for g in c]) for c in comps]
        keep = [c for c in keep if not member(fp ** 4, c)]
        assert ideal_equal(r.result.ideal, intersect(*keep)), (mod, f)


@FEW
@given(small_gens(R2, n=2), nonzero_polys(R2, max_terms=2, max_deg=2))
def test_locally_principal_blowup_is_idempotent(I, f):
    X = AffineChart("X", QuotientRing(R2, Ideal(R2, I)))
    once = blowup_locally_principal(X, f).result
    twice = blowup_locally_principal(once.as_chart(), f).result
    assert ideal_equal(once.ideal, twice.ideal)


@FEW
@given(small_gens(R2, n=2))
def test_rees_transitions_agree(I):
    rb = blowup_rees(A2, Ideal(R2, I))
    ne = [rc.index for rc in rb.nonempty_charts()]
    for i in ne:
        for j in ne:
            if i < j:
                assert rees_overlap_consistent(rb, i, j)


# --- weil ----------------------------------------------------------------------------------

X1 = Ring(("x", "y"))
XR = Ring(("x_0", "x_1", "y_0", "y_1"))
IMAGES = {"x": [XR.var("x_0"), XR.var("x_1")], "y": [XR.var("y_0"), XR.var("y_1")]}


@FEW
@given(st.sampled_from(["D", "QxQ"]), polys(X1, max_terms=3, max_deg=3), polys(X1, max_terms=3, max_deg=3))
def test_expand_is_multiplicative(key, f, g):
    B = ALGEBRAS[key]()
    assert expand(f * g, B, IMAGES, XR) == vec_mul(B, expand(f, B, IMAGES, XR), expand(g, B, IMAGES, XR))
    assert expand(f + g, B, IMAGES, XR) == [a + b for a, b in zip(expand(f, B, IMAGES, XR), expand(g, B, IMAGES, XR))]


@FEW
@given(st.sampled_from(sorted(ALGEBRAS)), small_gens(X1, n=2), small_gens(X1, n=2))
def test_restriction_of_sum_and_product(key, I, J):
    B = ALGEBRAS[key]()
    r = lambda gens: restrict_affine(["x", "y"], [str(g) for g in gens], B)
    RI, RJ = r(I), r(J)
    ring = RI.restricted.ring
    assert len(ring.variables) == 2 * B.dim
    mod = lambda R: Ideal(ring, [g.to_ring(ring) for g in R.restricted.modulus.gens])
    assert ideal_equal(mod(r(I + J)), mod(RI) + mod(RJ))
    assert (mod(RI) * mod(RJ)).contains(mod(r([a * b for a in I for b in J])))


# --- family --------------------------------------------------------------------------------

GRID = [(a, b) for a in range(-2, 3) for b in range(-2, 3)]


def test_underlying_set_law_on_grid():
    X = AffineChart.affine("X", ["c", "d", "a"])
    sp = make_split(X, ["a"])
    for gens in (["c*a - d", "c*d*a^2"], ["(c - 1)*a", "d*(c - 1)"], ["c*a^2 - c", "d^2*a"]):
        Z = ClosedSub(X, X.ideal(gens))
        loc = iso_locus(Z, sp).locus.ideal
        ra = Ring(("a",))
        for c, d in GRID:
            vals = {"c": ra.const(c), "d": ra.const(d)}
            zero_fiber = all(g.substitute(vals, ra).is_zero() for g in Z.ideal.gens)
            in_locus = all(not g.evaluate({"c": c, "d": d}) for g in loc.gens)
            assert in_locus == zero_fiber, (gens, c, d)


def _partition(Z, fiber, names):
    rep = flattening_strata(Z, fiber)
    grid = GRID if len(names) == 2 else [(a,) for a in range(-3, 4)]
    for vals in grid:
        point = dict(zip(names, vals))
        where = rep.locate(point)
        assert len(where) == 1, (point, where)
        length = fiber_length_at(Z, fiber, point)
        expect = "full" if length == "full" else ("empty" if length == 0 else str(length))
        assert where == [expect], (point, where, length)


def test_strata_partition_graph_charts():
    atlas = p1_p2_atlas()
    for name, Z in atlas.items():
        base = [v for v in Z.ambient.variables if v not in ("u", "v")]
        _partition(Z, ("u", "v"), base)


def test_strata_partition_zero_section():
    _partition(zero_section_atlas()["A"], ("a",), ["x"])


# --- bsf -----------------------------------------------------------------------------------

def test_exceptional_divisor_law():
    X = AffineChart.affine("X", ["x", "y"])
    results = [bsf_pipeline(X, mk(), ["x", "y"]) for mk in ALGEBRAS.values()]
    results += [bsf_pipeline(X, mk(), ["x^2", "y"]) for mk in ALGEBRAS.values()]
    results += [bsf_structure(p1_p2_atlas()), bsf_structure(zero_section_atlas(), ("a",)),
                bsf_structure(determinantal_atlas())]
    for res in results:
        for p in res.pieces:
            assert p.certificate.is_cartier, (res.route, p.chart.name)
            g = p.exceptional
            if g is not None and p.certificate.kind == "cartier" and res.route == "pipeline":
                from bsfkit.weil import base_change

                WB = base_change(p.chart, res.center["algebra"])
                assert is_regular(g.to_ring(WB.ring), WB.coords)
