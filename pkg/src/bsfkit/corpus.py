"""Golden examples, runnable by name.

Each entry is either a job file (run through the CLI path) or a small
Python computation. Its check decides pass/fail from the produced
document; the document itself is printed so runs can be diffed.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .algebra import GREVLEX, LEX, Ring, groebner, normal_form, parse_poly
from .ideals import Ideal, QuotientRing, coefficient_ideal, ideal_equal

SCHEMA = 1


@dataclass
class Entry:
    name: str
    job: Optional[str] = None
    compute: Optional[Callable[[], dict]] = None
    check: Callable[[dict], bool] = lambda doc: doc.get("status") == "ok"
    source: str = ""  # where the expected value comes from


ENTRIES: Dict[str, Entry] = {}


def job(name, text, check, source=""):
    ENTRIES[name] = Entry(name, job=text, check=check, source=source)


def py(name, check=None, source=""):
    def deco(fn):
        ENTRIES[name] = Entry(name, compute=fn, check=check or (lambda d: bool(d.get("ok"))), source=source)
        return fn

    return deco


def same_ideal(gens, expected, variables, order=GREVLEX):
    R = Ring(variables, order)
    return ideal_equal(Ideal(R, [parse_poly(g, R) for g in gens]), Ideal(R, [parse_poly(g, R) for g in expected]))


def result(doc):
    return doc.get("result", {})


def gb_is(expected, variables, order=GREVLEX):
    return lambda d: d["status"] == "ok" and same_ideal(result(d)["gb"], expected, variables, order)


def exact_gb(expected, variables, order=GREVLEX):
    """The reduced basis itself, up to ordering of the list."""
    R = Ring(variables, order)

    def chk(d):
        if d["status"] != "ok":
            return False
        got = sorted(str(parse_poly(g, R)) for g in result(d)["gb"])
        return got == sorted(str(parse_poly(g, R)) for g in expected)

    return chk


def field_is(key, value):
    return lambda d: d["status"] == "ok" and result(d).get(key) == value


# --- algebra_core ---------------------------------------------------------------------------

R_XY = Ring(("x", "y"))


@py("algebra_core.poly_arith.1")
def _():
    x, y = R_XY.var("x"), R_XY.var("y")
    out = (x + y) + (x - y)
    return {"value": str(out), "ok": out == x.scale(2)}


@py("algebra_core.poly_arith.2")
def _():
    x, y = R_XY.var("x"), R_XY.var("y")
    out = (x + y) * (x - y)
    return {"value": str(out), "ok": out == x * x - y * y}


@py("algebra_core.poly_arith.3")
def _():
    rng = random.Random(7)
    R = Ring(("x", "y", "z"))
    ok = True
    for _ in range(20):
        p = R.zero
        for _ in range(rng.randint(1, 5)):
            m = R.const(rng.randint(-9, 9))
            for v in R.variables:
                for _ in range(rng.randint(0, 3)):
                    m = m * R.var(v)
            p = p + m
        ok = ok and (p * R.zero).is_zero()
    return {"cases": 20, "ok": ok}


@py("algebra_core.normal_form.1", source="derived: x^2*y -> y*y by one division step")
def _():
    R = Ring(("x", "y"), LEX)
    r = normal_form(R.parse("x^2*y"), [R.parse("x^2 - y")])
    return {"value": str(r), "ok": r == R.parse("y^2")}


@py("algebra_core.normal_form.2")
def _():
    R = Ring(("x", "y", "z"), LEX)
    G = groebner([R.parse("x^2 - y"), R.parse("x^3 - z")])
    return {"gb": [str(g) for g in G], "ok": all(normal_form(g, G).is_zero() for g in G)}


@py("algebra_core.normal_form.3")
def _():
    R = Ring(("x",))
    r = normal_form(R.one, [R.var("x")])
    return {"value": str(r), "ok": r == R.one}


LEX_XYZ = "ring R = QQ[x,y,z] lex;\n"
job("algebra_core.groebner.1", LEX_XYZ + "ideal I = (x^2 - y, x^3 - z) in R;\nrun groebner I;\n",
    exact_gb(["x^2 - y", "x*y - z", "x*z - y^2", "y^3 - z^2"], ("x", "y", "z"), LEX),
    "derived: S-pair closure, frozen in the tests")
job("algebra_core.groebner.2", "ring R = QQ[x];\nideal I = (x, x^2) in R;\nrun groebner I;\n",
    exact_gb(["x"], ("x",)))
job("algebra_core.groebner.3", "ring R = QQ[x,y];\nideal I = (2*x + 2*y) in R;\nrun groebner I;\n",
    exact_gb(["x + y"], ("x", "y")))
job("algebra_core.member.1", LEX_XYZ + "ideal I = (x^2 - y, x^3 - z) in R;\nrun member y^3 - z^2 in I;\n",
    field_is("member", True))
job("algebra_core.member.2", "ring R = QQ[x];\nideal I = (x) in R;\nrun member 1 in I;\n", field_is("member", False))
job("algebra_core.member.3", "ring R = QQ[x,y];\nideal I = (x^2 + y, x*y) in R;\nrun member 0 in I;\n",
    field_is("member", True))
job("algebra_core.ideal_equal.1",
    "ring R = QQ[x,y];\nideal I = (x, y) in R;\nideal J = (x + y, y) in R;\nrun equal I, J;\n",
    field_is("equal", True))
job("algebra_core.ideal_equal.2",
    "ring R = QQ[x];\nideal I = (x^2) in R;\nideal J = (x) in R;\nrun equal I, J;\n", field_is("equal", False))


@py("algebra_core.ideal_equal.3", source="derived: <y>*<x,y> = <xy, y^2> by expanding")
def _():
    R = R_XY
    prod = Ideal.parse(R, ["y"]) * Ideal.parse(R, ["x", "y"])
    return {"product": [str(g) for g in prod.gb()], "ok": ideal_equal(Ideal.parse(R, ["x*y", "y^2"]), prod)}


# --- ideal_ops ------------------------------------------------------------------------------

job("ideal_ops.eliminate.1", LEX_XYZ + "ideal I = (y - x^2, z - x^3) in R;\nrun eliminate I keep (y, z);\n",
    gb_is(["y^3 - z^2"], ("y", "z")), "derived: twisted cubic")
job("ideal_ops.eliminate.2", "ring R = QQ[x,y];\nideal I = (x) in R;\nrun eliminate I keep (y);\n",
    gb_is([], ("y",)))
job("ideal_ops.eliminate.3", "ring R = QQ[x];\nideal I = (x - 1) in R;\nrun eliminate I keep ();\n",
    lambda d: d["status"] == "ok" and result(d)["gb"] == [] and result(d)["variables"] == [])
job("ideal_ops.quotient.1", "ring R = QQ[x,y];\nideal I = (x*y) in R;\nrun quotient I by x;\n",
    gb_is(["y"], ("x", "y")))
job("ideal_ops.quotient.2", "ring R = QQ[x,y];\nideal I = (x^2, x*y) in R;\nrun quotient I by x;\n",
    gb_is(["x", "y"], ("x", "y")))
job("ideal_ops.quotient.3", "ring R = QQ[x,y];\nideal I = (x^2 - y^3, x*y) in R;\nrun quotient I by 1;\n",
    gb_is(["x^2 - y^3", "x*y"], ("x", "y")))
job("ideal_ops.saturate.1", "ring R = QQ[x,y];\nideal I = (x*y) in R;\nrun saturate I by x;\n",
    exact_gb(["y"], ("x", "y")), "closing ring example: A -> A/(y)")
job("ideal_ops.saturate.2", "ring R = QQ[x,y];\nideal I = (y^2, x*y) in R;\nrun saturate I by x;\n",
    exact_gb(["y"], ("x", "y")), "closing ring example: the line (y) collapses")
job("ideal_ops.saturate.3", "ring R = QQ[x,y];\nideal I = (x^2 - y) in R;\nrun saturate I by x;\n",
    gb_is(["x^2 - y"], ("x", "y")))
job("ideal_ops.intersect.1", "ring R = QQ[x,y];\nideal I = (x) in R;\nideal J = (y) in R;\nrun intersect I, J;\n",
    gb_is(["x*y"], ("x", "y")))
job("ideal_ops.intersect.2",
    "ring R = QQ[x,y];\nideal I = (y, y^2, x*y) in R;\nideal J = (x, y^2, x*y) in R;\nrun intersect I, J;\n",
    gb_is(["y^2", "x*y"], ("x", "y")), "closing ring example: W_E union W' = W")
job("ideal_ops.intersect.3",
    "ring R = QQ[x,y];\nideal I = (x^2, y - x) in R;\nideal J = (1) in R;\nrun intersect I, J;\n",
    gb_is(["x^2", "y - x"], ("x", "y")))
job("ideal_ops.ring_map_kernel.1",
    "ring R = QQ[x,y];\nring S = QQ[t];\nmap f : R -> S = (t^2, t^3);\nrun kernel f;\n",
    gb_is(["y^2 - x^3"], ("x", "y")), "derived: cusp parametrization")
job("ideal_ops.ring_map_kernel.2", "ring R = QQ[x,y];\nmap f : R -> R = (x, y);\nrun kernel f;\n",
    gb_is([], ("x", "y")))
job("ideal_ops.ring_map_kernel.3",
    "ring R = QQ[x];\nring T = QQ[t];\nideal N = (t^2) in T;\nscheme S = T / N;\nmap f : R -> S = (t);\nrun kernel f;\n",
    gb_is(["x^2"], ("x",)))


@py("ideal_ops.coefficient_ideal.1")
def _():
    R = Ring(("c", "a", "a2"))
    C = coefficient_ideal(Ideal.parse(R, ["c*(a - a2)"]), ["a", "a2"])
    return {"gb": [str(g) for g in C.gb()], "ok": same_ideal([str(g) for g in C.gens], ["c"], ("c",))}


@py("ideal_ops.coefficient_ideal.2")
def _():
    R = Ring(("c", "a"))
    C = coefficient_ideal(Ideal.parse(R, ["c"]), ["a"])
    return {"gb": [str(g) for g in C.gb()], "ok": same_ideal([str(g) for g in C.gens], ["c"], ("c",))}


@py("ideal_ops.coefficient_ideal.3")
def _():
    R = Ring(("c", "a"))
    C = coefficient_ideal(Ideal.parse(R, ["c*a", "c^2"]), ["a"])
    return {"gb": [str(g) for g in C.gb()], "ok": same_ideal([str(g) for g in C.gens], ["c"], ("c",))}


XY_MOD = "ring R = QQ[x,y];\nideal N = (x*y) in R;\nscheme X = R / N;\n"
job("ideal_ops.is_regular.1", XY_MOD + "run regular x on X;\n", field_is("regular", False))
job("ideal_ops.is_regular.2", "ring R = QQ[x,y];\nscheme X = R;\nrun regular x on X;\n", field_is("regular", True))
job("ideal_ops.is_regular.3", XY_MOD + "run regular x + y on X;\n", field_is("regular", True))
job("ideal_ops.is_principal_cartier.1", "ring R = QQ[x,y];\nscheme X = R;\nideal I = (x) in R;\nrun cartier I on X;\n",
    lambda d: result(d) == {"kind": "cartier", "generator": "x"})
job("ideal_ops.is_principal_cartier.2", XY_MOD + "ideal I = (x) in R;\nrun cartier I on X;\n",
    lambda d: result(d) == {"kind": "principal_not_cartier", "generator": "x"})
job("ideal_ops.is_principal_cartier.3", "ring R = QQ[x,y];\nscheme X = R;\nideal I = (1) in R;\nrun cartier I on X;\n",
    lambda d: result(d).get("kind") == "full")


# --- scheme ---------------------------------------------------------------------------------

@py("scheme.product.1")
def _():
    from .scheme import AffineChart, product

    P = product(AffineChart.affine("A1a", ["a"]), AffineChart.affine("A1c", ["c"]))
    ok = list(P.chart.variables) == ["a", "c"] and P.chart.modulus.is_zero()
    ok = ok and str(P.first.images["a"]) == "a" and str(P.second.images["c"]) == "c"
    return {"product": P.chart.to_json(), "ok": ok}


@py("scheme.product.2")
def _():
    from .scheme import AffineChart, product

    P = product(AffineChart.presented("X", ["x", "y"], ["x*y"]), AffineChart.affine("A1t", ["t"]))
    ok = list(P.chart.variables) == ["x", "y", "t"] and same_ideal(
        [str(g) for g in P.chart.modulus.gens], ["x*y"], ("x", "y", "t"))
    return {"product": P.chart.to_json(), "ok": ok}


@py("scheme.product.3", source="derived: the equalising relations written out")
def _():
    from .scheme import AffineChart, SchemeMap, product

    V = AffineChart.presented("V", ["x", "y"], ["x - y"])
    A = AffineChart.affine("A1", ["x"])
    p = SchemeMap(V, A, {"x": "x"})
    P = product(V, V, over=(p, p))
    vs = list(P.chart.variables)
    ok = len(vs) == 4 and same_ideal([str(g) for g in P.chart.modulus.gens],
                                     [f"{vs[0]} - {vs[1]}", f"{vs[2]} - {vs[3]}", f"{vs[0]} - {vs[2]}"], tuple(vs))
    return {"product": P.chart.to_json(), "ok": ok}


job("scheme.schematic_image.1",
    "ring R = QQ[x,y];\nring S = QQ[t];\nmap f : R -> S = (t^2, t^3);\nrun image f;\n",
    gb_is(["y^2 - x^3"], ("x", "y")))
job("scheme.schematic_image.2",
    "ring R = QQ[x,y];\nideal N = (y - x^2) in R;\nscheme C = R / N;\nmap f : R -> C = (x, y);\nrun image f;\n",
    gb_is(["y - x^2"], ("x", "y")))
job("scheme.schematic_image.3",
    "ring A = QQ[x];\nring T = QQ[t];\nideal N = (t^2) in T;\nscheme S = T / N;\nmap f : A -> S = (t);\nrun image f;\n",
    gb_is(["x^2"], ("x",)), "derived: schematic, not reduced, image")


@py("scheme.flat_base_change_image_check.1")
def _():
    from .scheme import AffineChart, SchemeMap, flat_base_change_image_check

    f = SchemeMap(AffineChart.affine("T", ["t"]), AffineChart.affine("A2", ["x", "y"]), {"x": "t^2", "y": "t^3"})
    return {"ok": flat_base_change_image_check(f, ["s"])}


@py("scheme.flat_base_change_image_check.2")
def _():
    from .scheme import AffineChart, flat_base_change_image_check

    X = AffineChart.presented("X", ["x", "y"], ["x^2 - y^3"])
    return {"ok": flat_base_change_image_check(X.identity(), ["s", "r"])}


@py("scheme.flat_base_change_image_check.3")
def _():
    from .scheme import AffineChart, SchemeMap, flat_base_change_image_check, schematic_image

    U = AffineChart.presented("D(x)", ["x", "y", "i"], ["x*y", "x*i - 1"])
    X = AffineChart.presented("X", ["x", "y"], ["x*y"])
    f = SchemeMap(U, X, {"x": "x", "y": "y"})
    img = schematic_image(f)
    ok = flat_base_change_image_check(f, ["t"]) and same_ideal([str(g) for g in img.ideal.gens], ["y"], ("x", "y"))
    return {"image": [str(g) for g in img.ideal.gb()], "ok": ok}


def _fibres(images, rel=()):
    from .scheme import AffineChart, SchemeMap, constant_along_fibres

    X = AffineChart.presented("X", ["c", "a"], list(rel))
    S = AffineChart.affine("S", ["c"])
    W = AffineChart.affine("W", ["w"])
    p = SchemeMap(X, S, {"c": "c"})
    f = SchemeMap(X, W, {"w": images})
    return constant_along_fibres(f, p)


def _witness(r):
    if r.witness is None:
        return None
    return {k: str(r.witness.source.coords.reduce(v)) for k, v in sorted(r.witness.images.items())}


@py("scheme.constant_along_fibres.1")
def _():
    r = _fibres("c")
    g = _witness(r)
    return {"constant": r.holds, "descended": g, "ok": r.holds and g == {"w": "c"}}


@py("scheme.constant_along_fibres.2")
def _():
    r = _fibres("c*a")
    return {"constant": r.holds, "ok": not r.holds}


@py("scheme.constant_along_fibres.3")
def _():
    r = _fibres("c*a", ["c"])
    g = _witness(r)
    return {"constant": r.holds, "descended": g, "ok": r.holds and g == {"w": "0"}}


# --- blowup ---------------------------------------------------------------------------------

job("blowup.blowup_locally_principal.1", XY_MOD + "run blowup X along x;\n",
    lambda d: same_ideal(result(d)["result"], ["y"], ("x", "y")) and not result(d)["empty"],
    "closing ring example: A -> A/(y)")
job("blowup.blowup_locally_principal.2",
    "ring R = QQ[x,y];\nideal N = (y^2, x*y) in R;\nscheme X = R / N;\nrun blowup X along x;\n",
    lambda d: same_ideal(result(d)["result"], ["y"], ("x", "y")), "closing ring example: embedded point shaved")
job("blowup.blowup_locally_principal.3", "ring R = QQ[x,y];\nscheme X = R;\nrun blowup X along x;\n",
    lambda d: result(d)["result"] == [] and not result(d)["empty"])


def _rees_charts_are(expected):
    def chk(d):
        if d["status"] != "ok":
            return False
        charts = result(d)["charts"]
        if len(charts) != len(expected):
            return False
        return all(same_ideal(c["ideal"], e, tuple(c["variables"])) for c, e in zip(charts, expected))

    return chk


job("blowup.blowup_rees.1", "ring R = QQ[x,y];\nscheme X = R;\nideal I = (x, y) in R;\nrun rees X along I;\n",
    _rees_charts_are([["x*t1 - y"], ["y*t0 - x"]]), "derived: the classical charts y = t*x and x = t*y")
job("blowup.blowup_rees.2", "ring R = QQ[x,y];\nscheme X = R;\nideal I = (x^2 + y) in R;\nrun rees X along I;\n",
    _rees_charts_are([[]]))
job("blowup.blowup_rees.3",
    "# chart x=1, u=1 of P^1 x P^2; the graph center reads (z, v - y)\n"
    "ring R = QQ[y,z,v];\nscheme X = R;\nideal I = (z, v - y) in R;\nrun rees X along I;\n",
    lambda d: _rees_charts_are([["z*t1 - v + y"], ["(v - y)*t0 - z"]])(d)
    and sorted(c["exceptional"] for c in result(d)["charts"]) == ["-y + v", "z"])


@py("blowup.product_form_blowup.1")
def _():
    from .blowup import product_form_blowup
    from .scheme import AffineChart

    X = AffineChart.presented("Xt", ["x", "y", "t"], ["x*y"])
    r = product_form_blowup(X, ["t"], "x")
    ok = same_ideal([str(g) for g in r.W.ideal.gens], ["y"], ("x", "y"))
    return {**r.to_json(), "ok": ok}


@py("blowup.product_form_blowup.2")
def _():
    from .blowup import product_form_blowup
    from .scheme import AffineChart

    r = product_form_blowup(AffineChart.affine("A", ["x", "t"]), ["t"], "x")
    return {**r.to_json(), "ok": r.W.ideal.is_zero()}


job("blowup.product_form_blowup.3",
    "# two points times a line; the center (u - 1)*x is not a product\n"
    "ring R = QQ[x,u];\nideal N = (u^2 - 1) in R;\nscheme S = R / N;\nrun productform S fiber (u) along (u - 1)*x;\n",
    lambda d: d["exit"] == 2 and "product form violated" in d["error"]["message"],
    "derived: the saturation (u + 1) is not extended from the base")


# --- weil -----------------------------------------------------------------------------------

DUAL = "algebra B dim 2;\ne2*e2 = 0;\n"
SPLIT = "algebra B dim 2;\ne2*e2 = e2;\n"
job("weil.restrict_scheme.1",
    "ring R = QQ[x,e2];\nideal I = (x^2 - 3 - 5*e2) in R;\nscheme X = R / I;\n" + DUAL + "run restrict X over B;\n",
    lambda d: same_ideal(result(d)["ideal"], ["x_0^2 - 3", "2*x_0*x_1 - 5"], ("x_0", "x_1")),
    "derived: a = 3, b = 5; coordinates of 1 and e2")
job("weil.restrict_scheme.2",
    "ring R = QQ[x,y];\nideal I = (x^2 - y) in R;\nscheme X = R / I;\nalgebra B dim 1;\nrun restrict X over B;\n",
    lambda d: same_ideal(result(d)["ideal"], ["x_0^2 - y_0"], ("x_0", "y_0")))
job("weil.restrict_scheme.3",
    "ring R = QQ[x];\nideal I = (x^2 - 2*x) in R;\nscheme X = R / I;\n" + SPLIT + "run restrict X over B;\n",
    lambda d: same_ideal(result(d)["ideal"], ["x_0^2 - 2*x_0", "(x_0 + x_1)^2 - 2*(x_0 + x_1)"], ("x_0", "x_1")),
    "derived: x = x_0 + x_1 e2 is (x_0, x_0 + x_1) in QQ x QQ")


def _restrict_map(images_src, expected):
    from .scheme import AffineChart, SchemeMap
    from .weil import FiniteAlgebra, restrict_map, restrict_scheme

    B = FiniteAlgebra.dual_numbers()
    src = restrict_scheme(AffineChart.affine("A", ["x"]), B)
    tgt = restrict_scheme(AffineChart.affine("A'", ["y"]), B)
    g = SchemeMap(AffineChart.affine("A", ["x"]), AffineChart.affine("A'", ["y"]), {"y": images_src})
    h = restrict_map(g, B, src, tgt)
    got = {k: str(v) for k, v in sorted(h.images.items())}
    return {"images": got, "ok": got == expected}


@py("weil.restrict_map.1")
def _():
    return _restrict_map("x^2", {"y_0": "x_0^2", "y_1": "2*x_0*x_1"})


@py("weil.restrict_map.2")
def _():
    return _restrict_map("x", {"y_0": "x_0", "y_1": "x_1"})


@py("weil.restrict_map.3")
def _():
    return _restrict_map("7", {"y_0": "7", "y_1": "0"})


job("weil.adjunction_check.1",
    "ring R = QQ[x];\nideal I = (x^2 - 1) in R;\nscheme X = R / I;\n" + DUAL + "run adjunction X over B;\n",
    lambda d: result(d)["holds"] is True and len(result(d)["restricted_points"]) == 2,
    "derived: x_0^2 = 1, 2 x_0 x_1 = 0")


@py("weil.adjunction_check.2")
def _():
    from .scheme import AffineChart
    from .weil import FiniteAlgebra, adjunction_check, restrict_scheme

    R = restrict_scheme(AffineChart.presented("X", ["x"], ["x^2 - 1"]), FiniteAlgebra.dual_numbers())
    rep = adjunction_check(R, "empty")
    return {**rep.to_json(), "ok": rep.holds is True}


job("weil.adjunction_check.3",
    "ring R = QQ[x];\nideal I = (x) in R;\nscheme X = R / I;\n" + SPLIT + "run adjunction X over B;\n",
    lambda d: result(d)["holds"] is True and len(result(d)["restricted_points"]) == 1)


# --- family ---------------------------------------------------------------------------------

CA = "ring R = QQ[c,a];\nscheme X = R;\n"
job("family.iso_locus.1", CA + "ideal Z = (c) in R;\nrun iso Z on X fiber (a);\n",
    lambda d: same_ideal(result(d)["locus"], ["c"], ("c",)))
job("family.iso_locus.2", CA + "ideal Z = (c*a, c^2) in R;\nrun iso Z on X fiber (a);\n",
    lambda d: same_ideal(result(d)["locus"], ["c"], ("c",)))
job("family.iso_locus.3", CA + "ideal Z = (a, c) in R;\nrun iso Z on X fiber (a);\n",
    lambda d: same_ideal(result(d)["locus"], ["1"], ("c",)))
CW = "ring W = QQ[w];\n"
job("family.constfy.1", CA + CW + "map f : W -> X = (c*a);\nrun constfy f fiber (a);\n",
    lambda d: same_ideal(result(d)["locus"], ["c"], ("c",)) and result(d)["descended"] == {"w": "0"})
job("family.constfy.2", CA + CW + "map f : W -> X = (c);\nrun constfy f fiber (a);\n",
    lambda d: result(d)["locus"] == [] and result(d)["descended"] == {"w": "c"})
job("family.constfy.3", CA + CW + "map f : W -> X = (a);\nrun constfy f fiber (a);\n",
    lambda d: same_ideal(result(d)["locus"], ["1"], ("c",)))


@py("family.flattening_strata.1", source="the graph example: the chart z != 0 and V(z)")
def _():
    from .family import flattening_strata
    from .fixtures import p1_p2_atlas

    out, ok = {}, True
    for name, Z in sorted(p1_p2_atlas().items()):
        rep = flattening_strata(Z)
        out[name] = rep.to_json()
        labels = [s.name for s in rep.strata]
        ok = ok and rep.core.is_empty()
        ok = ok and labels == (["empty"] if name == "z=1" else ["empty", "1"])
        ok = ok and all(s.cartier == "yes" for s in rep.strata)
    return {"charts": out, "ok": ok}


job("family.flattening_strata.2", "ring R = QQ[x,a];\nscheme X = R;\nideal Z = (a) in R;\nrun strata Z on X fiber (a);\n",
    lambda d: [s["label"] for s in result(d)["strata"]] == ["1"] and result(d)["core"] == ["1"])
job("family.flattening_strata.3",
    "ring R = QQ[x,y,z,w,u,v];\nideal N = (x*w - y*z) in R;\nscheme D = R / N;\n"
    "ideal Z = (x*u + y*v, z*u + w*v) in R;\nrun strata Z on D fiber (u, v);\n",
    lambda d: same_ideal(result(d)["core"], ["x", "y", "z", "w"], ("x", "y", "z", "w"))
    and [s["label"] for s in result(d)["strata"]] == ["1"],
    "determinantal example: the core is the origin")


# --- bsf ------------------------------------------------------------------------------------

def _pipeline_is_rees(d):
    if d["status"] != "ok":
        return False
    ps = result(d)["pieces"]
    want = [["x*t1 - y"], ["y*t0 - x"]]
    return len(ps) == 2 and all(same_ideal(p["chart"]["ideal"], w, tuple(p["chart"]["variables"]))
                                for p, w in zip(ps, want))


A2 = "ring R = QQ[x,y];\nscheme X = R;\n"
job("bsf.bsf_pipeline.1", A2 + "ideal Z = (x, y) in R;\n" + DUAL + "run bsf X over B center Z;\n",
    _pipeline_is_rees, "the classic blow up of the plane at the origin")
job("bsf.bsf_pipeline.2", A2 + "ideal Z = (1) in R;\n" + DUAL + "run bsf X over B center Z;\n",
    lambda d: len(result(d)["pieces"]) == 1 and result(d)["pieces"][0]["b"] == {"x": "x", "y": "y"}
    and result(d)["pieces"][0]["chart"]["ideal"] == [])
job("bsf.bsf_pipeline.3", A2 + "ideal Z = () in R;\n" + DUAL + "run bsf X over B center Z;\n",
    lambda d: result(d)["pieces"] == [] and result(d)["core"] == {"X": []})


def _structure_p1p2(d):
    r = result(d)
    if r.get("components") != ["empty", "1"] or not r.get("core_empty") or r.get("partial"):
        return False
    pieces = {(p["target"], p["component"]): p["chart"] for p in r["pieces"]}
    ok = same_ideal(pieces[("x=1", "1")]["ideal"], ["z"], ("y", "z"))
    ok = ok and same_ideal(pieces[("y=1", "1")]["ideal"], ["z"], ("x", "z"))
    ok = ok and pieces[("z=1", "empty")]["ideal"] == []
    ok = ok and same_ideal(pieces[("x=1", "empty")]["ideal"], ["z*s - 1"], ("y", "z", "s"))
    return ok and ("z=1", "1") not in pieces


job("bsf.bsf_structure.1", "run fixture p1xp2;\n", _structure_p1p2, "the graph example: P^2 minus V+(z), and V+(z)")
job("bsf.bsf_structure.2", "run fixture determinantal;\n",
    lambda d: result(d)["partial"] and same_ideal(result(d)["core"]["D"], ["x", "y", "z", "w"], ("x", "y", "z", "w"))
    and result(d)["components"] == ["1"], "determinantal example: D minus the origin")
job("bsf.bsf_structure.3", "run fixture zero_section;\n",
    lambda d: result(d)["components"] == ["1"] and result(d)["core_empty"] and len(result(d)["pieces"]) == 1
    and result(d)["pieces"][0]["chart"]["ideal"] == [])


def _small_check(prefix):
    def chk(d):
        cs = [c for c in result(d)["checks"] if c["check"].startswith(prefix)]
        return bool(cs) and all(c["passed"] for c in cs)

    return chk


job("bsf.verify_small_resolution_fixture.1", "run fixture small_resolution;\n", _small_check("chart a=1 ideal"))
job("bsf.verify_small_resolution_fixture.2", "run fixture small_resolution;\n",
    _small_check("n=1: coefficient system"), "determinantal example: constant forms off the origin")
job("bsf.verify_small_resolution_fixture.3", "run fixture small_resolution;\n",
    lambda d: _small_check("X_0 matches")(d) and _small_check("blow up of P^1 x X_0")(d))


# --- cli ------------------------------------------------------------------------------------

SAT_JOB = "ring R = QQ[x,y] grevlex;\nideal I = (x*y, y^2) in R;\nrun saturate I by x;\n"


@py("cli.parse_job.1")
def _():
    from .jobfile import parse_job

    j = parse_job(SAT_JOB)
    return {"command": j.command.to_text(), "ok": j.command.name == "saturate" and j.command.args == ("I", "x")}


@py("cli.parse_job.2")
def _():
    from .jobfile import JobError, parse_job

    try:
        parse_job("ring R = QQ[x,y]\nideal I = (x) in R;\nrun groebner I;\n")
    except JobError as e:
        return {**e.to_json(), "ok": e.code == "E-SYNTAX" and (e.line, e.col) == (1, 17)}
    return {"ok": False}


@py("cli.parse_job.3")
def _():
    from .jobfile import parse_job

    j = parse_job(A2 + "ideal Z = (x, y) in R;\n" + DUAL + "run bsf X over B center Z;\n")
    return {"command": j.command.to_text(), "ok": j.command.name == "bsf" and j.command.args == ("X", "B", "Z")}


@py("cli.run_job.1", source="closing ring example: A -> A/(y)")
def _():
    from .cli import execute_text, render_text

    code, doc = execute_text("ring R = QQ[x,y];\nideal I = (x*y) in R;\nrun saturate I by x;\n")
    text = render_text(doc)
    return {"exit": code, "text": text, "ok": code == 0 and "gb:\n    - y" in text}


@py("cli.run_job.2", source="the graph, determinantal and small resolution fixtures")
def _():
    from .cli import run_fixture

    p = run_fixture("p1xp2")
    d = run_fixture("determinantal")
    s = run_fixture("small_resolution")
    ok = _structure_p1p2({"status": "ok", "result": p}) and d["partial"] and s["ok"]
    return {"p1xp2": p["components"], "determinantal_partial": d["partial"], "small_resolution": s["ok"], "ok": ok}


@py("cli.run_job.3")
def _():
    import json

    from .cli import execute_text, render_json
    from .jobfile import parse_job, print_job

    code, doc = execute_text(SAT_JOB)
    back = json.loads(render_json(doc))
    job_rt = parse_job(print_job(parse_job(SAT_JOB))) == parse_job(SAT_JOB)
    return {"ok": back == doc and job_rt and code == 0}


# --- acceptance fixtures --------------------------------------------------------------------

job("fixtures.cluster", "run fixture cluster;\n", lambda d: result(d)["ok"])
job("fixtures.factorization", "run fixture factorization;\n",
    lambda d: result(d)["misclassified"] == 0 and len(result(d)["maps"]) >= 40)
job("fixtures.agreement", "run fixture agreement;\n", lambda d: all(c["ok"] for c in result(d)["cases"]))


# --- running --------------------------------------------------------------------------------

def corpus_names():
    return sorted(ENTRIES)


def run_entry(name: str) -> dict:
    from .cli import execute_text

    e = ENTRIES[name]
    if e.job is not None:
        code, doc = execute_text(e.job)
        doc = dict(doc, exit=code)
    else:
        try:
            doc = {"schema": SCHEMA, "status": "ok", "result": e.compute()}
        except Exception as exc:  # a crash is a failed entry, reported not raised
            doc = {"schema": SCHEMA, "status": "error", "error": f"{type(exc).__name__}: {exc}"}
    try:
        ok = bool(e.check(doc if e.job is not None else doc.get("result", {})))
    except (KeyError, TypeError, IndexError, ValueError):
        ok = False
    out = {"name": name, "passed": ok, "output": doc}
    if e.job is not None:
        out["job"] = e.job
    return out


def run_corpus(name: str, jobs: int = 1):
    """(exit code, document). Entries run in parallel when jobs > 1; output is ordered by name."""
    names = corpus_names() if name == "all" else [name]
    if name != "all" and name not in ENTRIES:
        raise KeyError(name)
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            entries = list(ex.map(run_entry, names))
    else:
        entries = [run_entry(n) for n in names]
    failed = [e["name"] for e in entries if not e["passed"]]
    doc = {"schema": SCHEMA, "entries": entries, "passed": len(entries) - len(failed), "failed": failed}
    return (0 if not failed else 2), doc
