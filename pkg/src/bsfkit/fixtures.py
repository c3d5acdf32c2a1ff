"""Shipped atlases, test-map banks and cross-route checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .algebra import GREVLEX, Ring
from .bsf import BsfResult, bsf_pipeline, bsf_structure, classify_test_map
from .ideals import Ideal, QuotientRing, eliminate, ideal_equal
from .scheme import AffineChart, ClosedSub, SchemeMap
from .weil import FiniteAlgebra

# --- atlases --------------------------------------------------------------------------------

P2_CHARTS = {
    "x=1": (("y", "z"), {"x": "1"}),
    "y=1": (("x", "z"), {"y": "1"}),
    "z=1": (("x", "y"), {"z": "1"}),
}


def _dehomogenize(g: str, sub: Dict[str, str]) -> str:
    return "".join(sub.get(ch, ch) for ch in g)


def p1_p2_atlas() -> Dict[str, ClosedSub]:
    """Z = V(z, v*x - u*y) in P^1 x P^2, one entry per standard chart of P^2.

    The P^1 factor keeps homogeneous coordinates u, v; with its two charts
    u=1 and v=1 this is the six chart atlas.
    """
    atlas = {}
    for name, (coords, sub) in P2_CHARTS.items():
        A = AffineChart.affine(name, list(coords) + ["u", "v"])
        gens = [_dehomogenize(g, sub) for g in ("z", "v*x - u*y")]
        atlas[name] = ClosedSub(A, A.ideal(gens))
    return atlas


def six_charts(atlas: Dict[str, ClosedSub], fiber=("u", "v")) -> Dict[str, ClosedSub]:
    """Affine charts of the atlas with each fiber coordinate set to 1 in turn."""
    u, v = fiber
    out = {}
    for name, Z in sorted(atlas.items()):
        X = Z.ambient
        for one, other in ((u, v), (v, u)):
            keep = [x for x in X.variables if x != one]
            ring = Ring(keep, GREVLEX)
            images = {x: ring.var(x) for x in keep}
            images[one] = ring.one
            mod = Ideal(ring, [g.substitute(images, ring) for g in X.modulus.gens])
            chart = AffineChart(f"{name},{one}=1", QuotientRing(ring, mod))
            out[chart.name] = ClosedSub(chart, Ideal(ring, [g.substitute(images, ring) for g in Z.ideal.gens]))
    return out


def determinantal_atlas() -> Dict[str, ClosedSub]:
    """Incidence {M (u,v)^t = 0} over D = V(xw - yz), M = [[x, y], [z, w]]."""
    D = AffineChart.presented("D", ["x", "y", "z", "w", "u", "v"], ["x*w - y*z"])
    return {"D": ClosedSub(D, D.ideal(["x*u + y*v", "z*u + w*v"]))}


def zero_section_atlas() -> Dict[str, ClosedSub]:
    """The zero section of A^1_x x A^1_a."""
    A = AffineChart.affine("A", ["x", "a"])
    return {"A": ClosedSub(A, A.ideal(["a"]))}


def origin_pipeline_input():
    """X = A^2 and the product center origin x B."""
    return AffineChart.affine("X", ["x", "y"]), ["x", "y"]


ALGEBRAS = {
    "QQ": FiniteAlgebra.rational,
    "D": FiniteAlgebra.dual_numbers,
    "QxQ": FiniteAlgebra.split,
}


# --- test-map banks ------------------------------------------------------------------------

@dataclass
class TestMap:
    name: str
    variables: Sequence[str]
    relations: Sequence[str]
    images: Dict[str, str]
    cartier: bool  # expected: the pulled back center is an effective Cartier divisor
    chart: Optional[str] = None  # target chart for atlas fixtures

    __test__ = False

    def build(self, target: AffineChart) -> SchemeMap:
        vs = list(self.variables) or ["s"]
        rels = list(self.relations) if self.variables else ["s"]
        T = AffineChart.presented("T", vs, rels)
        return SchemeMap(T, target, dict(self.images))


def origin_bank() -> List[TestMap]:
    """Maps T -> A^2 against the center (x, y)."""
    M = TestMap
    return [
        M("(s,s)", ["s"], [], {"x": "s", "y": "s"}, True),
        M("(s,s^2)", ["s"], [], {"x": "s", "y": "s^2"}, True),
        M("(s^2,s)", ["s"], [], {"x": "s^2", "y": "s"}, True),
        M("(s,0)", ["s"], [], {"x": "s", "y": "0"}, True),
        M("(1,1)", [], [], {"x": "1", "y": "1"}, True),
        M("(s+1,s)", ["s"], [], {"x": "s + 1", "y": "s"}, True),
        M("chart u+v", ["p", "q", "u", "v"], ["p*v - q*u", "u + v - 1"], {"x": "p", "y": "q"}, True),
        M("(s^3,s^2) cusp", ["s"], [], {"x": "s^3", "y": "s^2"}, True),
        M("id", ["p", "q"], [], {"x": "p", "y": "q"}, False),
        M("(p^2,p*q)", ["p", "q"], [], {"x": "p^2", "y": "p*q"}, False),
        M("(p,q) from A3", ["p", "q", "r"], [], {"x": "p", "y": "q"}, False),
        M("origin", [], [], {"x": "0", "y": "0"}, False),
        M("(s,s) on s^2=0", ["s"], ["s^2"], {"x": "s", "y": "s"}, False),
    ]


def p1_p2_bank() -> List[TestMap]:
    M = TestMap
    return [
        M("line in V(z)", ["s"], [], {"y": "s", "z": "0"}, True, "x=1"),
        M("line off V(z)", ["s"], [], {"y": "s", "z": "1"}, True, "x=1"),
        M("point in V(z)", [], [], {"y": "3", "z": "0"}, True, "x=1"),
        M("point off V(z)", [], [], {"y": "2", "z": "1"}, True, "x=1"),
        M("fat point in V(z)", ["s"], ["s^2"], {"y": "s", "z": "0"}, True, "x=1"),
        M("unit z", ["s", "r"], ["s*r - 1"], {"y": "s", "z": "r"}, True, "x=1"),
        M("line in V(z), chart y=1", ["s"], [], {"x": "s", "z": "0"}, True, "y=1"),
        M("plane, chart z=1", ["p", "q"], [], {"x": "p", "y": "q"}, True, "z=1"),
        M("diagonal", ["s"], [], {"y": "s", "z": "s"}, False, "x=1"),
        M("fat transversal", ["s"], ["s^2"], {"y": "0", "z": "s"}, False, "x=1"),
        M("id", ["y", "z"], [], {"y": "y", "z": "z"}, False, "x=1"),
        M("parabola", ["s"], [], {"y": "s", "z": "s^2"}, False, "x=1"),
        M("thickened V(z)", ["y", "z"], ["z^2"], {"y": "y", "z": "z"}, False, "x=1"),
    ]


def zero_section_bank() -> List[TestMap]:
    M = TestMap
    c = "A"
    return [
        M("id", ["x"], [], {"x": "x"}, True, c),
        M("point 0", [], [], {"x": "0"}, True, c),
        M("point 5", [], [], {"x": "5"}, True, c),
        M("square", ["s"], [], {"x": "s^2"}, True, c),
        M("fat point", ["s"], ["s^2"], {"x": "s"}, True, c),
        M("node", ["p", "q"], ["p*q"], {"x": "p + q"}, True, c),
        M("plane", ["p", "q"], [], {"x": "p*q - 1"}, True, c),
        M("unit", ["s", "r"], ["s*r - 1"], {"x": "s"}, True, c),
        M("two points", ["s"], ["s^2 - s"], {"x": "s"}, True, c),
        M("cubic", ["s"], [], {"x": "s^3 - s"}, True, c),
    ]


def determinantal_bank() -> List[TestMap]:
    """Maps into D avoiding the core, and maps with non-Cartier pullback."""
    M = TestMap
    c = "D"
    return [
        M("point (1,2,2,4)", [], [], {"x": "1", "y": "2", "z": "2", "w": "4"}, True, c),
        M("point (1,0,0,0)", [], [], {"x": "1", "y": "0", "z": "0", "w": "0"}, True, c),
        M("point (0,0,0,1)", [], [], {"x": "0", "y": "0", "z": "0", "w": "1"}, True, c),
        M("line x=1", ["s"], [], {"x": "1", "y": "s", "z": "0", "w": "0"}, True, c),
        M("line w=1", ["s"], [], {"x": "0", "y": "0", "z": "s", "w": "1"}, True, c),
        M("rank one family", ["s"], [], {"x": "1", "y": "s", "z": "s", "w": "s^2"}, True, c),
        M("fat point off core", ["s"], ["s^2"], {"x": "1", "y": "s", "z": "0", "w": "0"}, True, c),
        M("unit x", ["s", "r"], ["s*r - 1"], {"x": "s", "y": "0", "z": "0", "w": "0"}, True, c),
        M("core point", [], [], {"x": "0", "y": "0", "z": "0", "w": "0"}, False, c),
        M("fat core point", ["s"], ["s^2"], {"x": "0", "y": "0", "z": "0", "w": "0"}, False, c),
        M("core line thickening", ["s", "r"], ["r^2"], {"x": "r", "y": "0", "z": "0", "w": "0"}, False, c),
    ]


# --- running a bank -----------------------------------------------------------------------

@dataclass
class BankOutcome:
    fixture: str
    name: str
    expected_cartier: bool
    cartier: bool
    kind: str
    components: List[str]

    @property
    def misclassified(self):
        if self.cartier != self.expected_cartier:
            return True
        return len(self.components) != (1 if self.cartier else 0)

    def to_json(self):
        return {
            "fixture": self.fixture,
            "map": self.name,
            "expected_cartier": self.expected_cartier,
            "cartier": self.cartier,
            "kind": self.kind,
            "components": list(self.components),
            "ok": not self.misclassified,
        }


def _chart_of(result: BsfResult, name: str) -> AffineChart:
    for p in result.pieces:
        if p.b.target.name == name:
            return p.b.target
    Z = result.center["atlas"][name]
    from .family import make_split

    return AffineChart(name, make_split(Z.ambient, result.center["fiber"]).base.coords)


def run_bank(fixture: str, result: BsfResult, bank: Sequence[TestMap], target: AffineChart = None) -> List[BankOutcome]:
    out = []
    for m in bank:
        tgt = target if target is not None else _chart_of(result, m.chart)
        g = m.build(tgt)
        case = classify_test_map(result, m.name, g, m.chart)
        out.append(BankOutcome(fixture, m.name, m.cartier, case.cartier, case.cartier_kind, case.components))
    return out


def factorization_suite() -> List[BankOutcome]:
    """Every shipped bank against its fixture."""
    out = []
    X, Z = origin_pipeline_input()
    for key in sorted(ALGEBRAS):
        res = bsf_pipeline(X, ALGEBRAS[key](), Z)
        out += run_bank(f"origin/{key}", res, origin_bank(), X)
    out += run_bank("p1xp2", bsf_structure(p1_p2_atlas()), p1_p2_bank())
    out += run_bank("zero section", bsf_structure(zero_section_atlas(), ("a",)), zero_section_bank())
    out += run_bank("determinantal", bsf_structure(determinantal_atlas()), determinantal_bank())
    return out


# --- the two routes side by side -----------------------------------------------------------

AGREEMENT_CASES = {
    "origin in A2": (["x", "y"], ["x", "y"]),
    "axis in A3": (["x", "y", "z"], ["x", "y"]),
    "two points in A1": (["x"], ["x^2 - x"]),
    "cusp center in A2": (["x", "y"], ["x^2", "y"]),
}


def pipeline_structure_agreement(name: str) -> dict:
    """Compare both routes for Y a point (B = QQ) off the core.

    The structure route returns the complement of Z, one piece D(f) per
    frontier generator. The pipeline piece for the generator f, localised
    at f, must present the same open subscheme.
    """
    variables, center = AGREEMENT_CASES[name]
    X = AffineChart.affine("X", variables)
    pipe = bsf_pipeline(X, FiniteAlgebra.rational(), center)
    Zc = ClosedSub(X, X.ideal(center))
    struct = bsf_structure({"X": Zc}, fiber=())
    checks = []
    for p in pipe.pieces:
        if p.exceptional is None or p.exceptional.is_constant():
            continue
        loc = _open_in_X(p.chart, p.b, f=p.exceptional)
        match = None
        for sp in struct.pieces:
            if ideal_equal(loc, _open_in_X(sp.chart, sp.b, s_var=sp.chart.variables[-1])):
                match = sp.chart.name
                break
        checks.append({"pipeline_piece": p.chart.name, "structure_piece": match})
    ok = bool(checks) and all(c["structure_piece"] for c in checks)
    return {"case": name, "ok": ok, "partial": struct.partial, "checks": checks}


def _open_in_X(chart: AffineChart, b: SchemeMap, f=None, s_var=None) -> Ideal:
    """Graph of chart -> X x A^1_s where s = 1/f, as an ideal on X x A^1_s.

    Either f is given (the chart is localised at it) or the chart already
    has the inverse as its coordinate ``s_var``.
    """
    X = b.target
    big = Ring(tuple(f"{v}_c" for v in chart.variables) + tuple(X.variables) + ("s",), GREVLEX)
    ren = {v: big.var(f"{v}_c") for v in chart.variables}
    rel = [g.substitute(ren, big) for g in chart.modulus.gens]
    if f is not None:
        rel.append(big.var("s") * f.substitute(ren, big) - big.one)
    else:
        rel.append(big.var("s") - ren[s_var])
    for x in X.variables:
        rel.append(big.var(x) - b.images[x].substitute(ren, big))
    keep = list(X.variables) + ["s"]
    E = eliminate(Ideal(big, rel), keep)
    out = Ring(tuple(keep), GREVLEX)
    return Ideal(out, [e.to_ring(out) for e in E.gens])
