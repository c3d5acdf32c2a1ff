"""Blow up split section families: the finite free pipeline and the strata route."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from .algebra import GREVLEX, Poly, Ring, TermOrder, groebner
from .blowup import (
    ProductFormViolated,
    blowup_locally_principal,
    blowup_rees,
    product_form_blowup,
)
from .family import (
    StratumReport,
    algebra_split,
    constfy,
    flattening_strata,
    iso_locus,
    make_split,
)
from .ideals import (
    CartierStatus,
    Ideal,
    QuotientRing,
    eliminate,
    fresh_name,
    ideal_equal,
    intersect,
    is_effective_cartier,
    is_principal_cartier,
    member,
    quotient,
    saturate,
)
from .scheme import AffineChart, ClosedSub, SchemeMap
from .weil import FiniteAlgebra, base_change, restrict_scheme


class BsfStageError(ValueError):
    """A stage of the pipeline failed; ``hypothesis`` names what broke."""

    def __init__(self, stage, hypothesis, detail=""):
        self.stage = stage
        self.hypothesis = hypothesis
        super().__init__(f"stage {stage} failed ({hypothesis}): {detail}")


@dataclass
class BsfPiece:
    component: str
    chart: AffineChart
    b: SchemeMap  # chart -> X (or the X chart it lands in)
    exceptional: Optional[Poly]
    certificate: CartierStatus
    saturate_by: Optional[Poly] = None  # regular on the piece, cuts out the exceptional locus

    def to_json(self):
        return {
            "component": self.component,
            "chart": self.chart.to_json(),
            "b": self.b.to_json(),
            "target": self.b.target.name,
            "exceptional": None if self.exceptional is None else str(self.exceptional),
            "certificate": self.certificate.to_json(),
        }


@dataclass
class BsfResult:
    route: str  # pipeline | structure
    pieces: List[BsfPiece]
    core: Dict[str, ClosedSub]  # per chart of X
    partial: bool = False
    notes: List[str] = field(default_factory=list)
    stages: dict = field(default_factory=dict)
    center: dict = field(default_factory=dict)

    @property
    def components(self):
        return sorted({p.component for p in self.pieces}, key=_label_key)

    def pieces_of(self, label):
        return [p for p in self.pieces if p.component == label]

    @property
    def core_empty(self):
        return all(c.is_empty() for c in self.core.values())

    def to_json(self):
        return {
            "route": self.route,
            "components": self.components,
            "pieces": [p.to_json() for p in self.pieces],
            "core": {k: [str(g) for g in c.ideal.gb()] for k, c in sorted(self.core.items())},
            "core_empty": self.core_empty,
            "partial": self.partial,
            "notes": list(self.notes),
        }


def _label_key(s):
    if s == "empty":
        return (0, 0, s)
    if s.isdigit():
        return (1, int(s), s)
    return (2, 0, s)


# --- helpers ----------------------------------------------------------------------------

def drop_zero_variables(chart: AffineChart, b: SchemeMap, rename: Mapping[str, str] = None):
    """Remove coordinates lying in the ideal (they are 0) and optionally rename.

    Returns (new chart, new b).
    """
    gb = chart.modulus.gb()
    zero = [v for v in chart.variables if member(chart.ring.var(v), chart.modulus)]
    keep = [v for v in chart.variables if v not in zero]
    rename = dict(rename or {})
    names = [rename.get(v, v) for v in keep]
    if len(set(names)) != len(names):
        names = keep
        rename = {}
    ring = Ring(names, GREVLEX)
    sub = {v: ring.zero for v in zero}
    sub.update({v: ring.var(rename.get(v, v)) for v in keep})
    mod = Ideal(ring, [g.substitute(sub, ring) for g in gb])
    new = AffineChart(chart.name, QuotientRing(ring, mod))
    images = {w: new.coords.reduce(p.substitute(sub, ring)) for w, p in b.images.items()}
    return new, SchemeMap(new, b.target, images, check=False)


# --- the pipeline ------------------------------------------------------------------------

def bsf_pipeline(X: AffineChart, B: FiniteAlgebra, Z) -> BsfResult:
    """Blow up split section family of X_B -> Spec B along Z, B finite free.

    Stages: Rees blow up of X_B along Z; Weil restriction of every chart;
    constfy the composite to X; blow up the pulled back center on the
    product with Spec B and descend it.
    """
    XB = base_change(X, B)
    if isinstance(Z, ClosedSub):
        if Z.ambient.ring != XB.ring:
            raise ValueError("center must live on X x Spec B")
        Zs = ClosedSub(XB, Z.ideal)
    else:
        Zs = ClosedSub(XB, XB.ideal(list(Z)))
    split = algebra_split(XB, B)
    core = iso_locus(Zs, split).locus
    core_sub = ClosedSub(X, Ideal(X.ring, [g.to_ring(X.ring) for g in core.ideal.gens]))
    center = {"algebra": B, "Z": Zs, "X": X}
    stages = {"core": core_sub}
    if Zs.is_empty():
        ident = X.identity()
        piece = BsfPiece("0", X, ident, None, CartierStatus("full", X.ring.one))
        return BsfResult("pipeline", [piece], {X.name: core_sub}, stages=stages, center=center,
                         notes=["empty center: the family is X itself"])
    if Zs.is_everything():
        return BsfResult("pipeline", [], {X.name: core_sub}, stages=stages, center=center,
                         notes=["the center is all of X_B: nothing to split"])
    try:
        rees = blowup_rees(XB, Zs.ideal)
    except ValueError as e:
        raise BsfStageError("blowup", "center must be a proper nonzero ideal", str(e))
    stages["blowup"] = rees
    stages["restriction"], stages["constfy"], stages["product_form"] = [], [], []
    pieces = []
    for rc in rees.charts:
        if rc.empty:
            continue
        R = restrict_scheme(rc.chart, B, name=f"{X.name}_w{rc.index}")
        stages["restriction"].append(R)
        RB = R.counit.source
        f = SchemeMap(RB, X, {v: R.counit.images[v] for v in X.variables}, check=False)
        rsplit = algebra_split(RB, B)
        try:
            cl = constfy(f, rsplit)
        except ValueError as e:
            raise BsfStageError("constfy", "finite locally free base", str(e))
        stages["constfy"].append(cl)
        if cl.locus.is_empty() or cl.descended_map is None:
            continue
        zeta = cl.locus.as_chart(f"{X.name}_z{rc.index}")
        zetaB = base_change(zeta, B)
        gen = R.counit.pullback(rc.generator).to_ring(zetaB.ring)
        try:
            pf = product_form_blowup(zetaB, B.extra_basis, gen)
        except ProductFormViolated as e:
            raise BsfStageError("product_form", "finite locally free base with the product form", str(e))
        stages["product_form"].append(pf)
        if pf.W.is_empty():
            continue
        W = pf.W.as_chart(f"{X.name}_bsf{rc.index}")
        b = SchemeMap(W, X, {v: cl.descended_map.images[v].to_ring(W.ring) for v in X.variables}, check=False)
        zero = {w for w in W.variables if member(W.ring.var(w), W.modulus)}
        rename = {ws[0]: v for v, ws in R.names.items() if all(w in zero for w in ws[1:])}
        W, b = drop_zero_variables(W, b, rename)
        exc, cert = _pipeline_certificate(W, b, R, rename, B, Zs, rc)
        norm = algebra_norm(exc, W, B) if cert.kind == "cartier" else None
        pieces.append(BsfPiece("0", W, b, exc, cert, norm))
    return BsfResult("pipeline", pieces, {X.name: core_sub}, stages=stages, center=center)


def _pipeline_certificate(W, b, R, rename, B, Zs, rc):
    """Cartier status of the pulled back center on W x Spec B."""
    WB = base_change(W, B)
    ring = WB.ring
    images = {}
    for v, ws in R.names.items():
        p = ring.zero
        for k, w in enumerate(ws):
            name = rename.get(w, w)
            if name not in ring:
                continue
            p = p + ring.var(name) * (ring.one if k == 0 else ring.var(B.basis[k]))
        images[v] = p
    for e in B.extra_basis:
        images[e] = ring.var(e)
    pulled = Ideal(ring, [g.substitute(images, ring) for g in Zs.ideal.gens])
    hint = rc.generator.substitute(images, ring)
    status = is_principal_cartier(pulled, WB.coords, hints=[hint])
    return status.generator, status


def algebra_norm(f: Poly, W: AffineChart, B: FiniteAlgebra) -> Poly:
    """det of multiplication by f on W x Spec B, as a function on W."""
    WB = base_change(W, B)
    f = f.to_ring(WB.ring)
    split = algebra_split(WB, B)
    coeffs = split.coefficients(f)
    n = B.dim
    c = []
    for k in range(n):
        mono = tuple(1 if j == k - 1 else 0 for j in range(n - 1))
        c.append(coeffs.get(mono, split.base.ring.zero).to_ring(W.ring))
    M = [[W.ring.zero] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            acc = W.ring.zero
            for i in range(n):
                t = B.table[i][j][k]
                if t and c[i]:
                    acc = acc + c[i].scale(t)
            M[j][k] = acc
    from .family import _det

    return W.coords.reduce(_det(M))


def compare_with_rees(result: BsfResult, X: AffineChart, W: Ideal) -> List[bool]:
    """Chartwise equality of the pipeline pieces with the Rees charts of X along W."""
    rees = blowup_rees(X, W)
    out = []
    charts = [c for c in rees.charts if not c.empty]
    if len(charts) != len(result.pieces):
        return [False]
    for rc, piece in zip(charts, result.pieces):
        if set(rc.chart.variables) != set(piece.chart.variables):
            out.append(False)
            continue
        ring = rc.chart.ring
        J = Ideal(ring, [g.to_ring(ring) for g in piece.chart.modulus.gens])
        out.append(ideal_equal(J, rc.chart.modulus))
    return out


# --- the structure route -------------------------------------------------------------------

def bsf_structure(atlas: Mapping[str, ClosedSub], fiber: Sequence[str] = ("u", "v")) -> BsfResult:
    """Components from the flattening strata with Cartier fibers.

    ``atlas`` maps a name of a chart of X to the center Z on chart x fiber
    coordinates. ``fiber`` is a projective pair, one affine coordinate, or
    empty for Y a point. Without a core the answer is complete; otherwise
    only the part off the core is returned and flagged partial.
    """
    pieces, cores, notes, reports = [], {}, [], {}
    partial = False
    for name in sorted(atlas):
        Z = atlas[name]
        if fiber:
            rep = flattening_strata(Z, fiber)
        else:
            rep = _point_strata(Z)
        reports[name] = rep
        base = rep.base
        base = AffineChart(name, base.coords)
        cores[name] = ClosedSub(base, Ideal(base.ring, rep.core.ideal.gens))
        for st in rep.strata:
            if st.cartier != "yes":
                partial = True
                notes.append(f"{name}: stratum {st.name} has Cartier status {st.cartier}; left out")
                continue
            for k, f in enumerate(st.frontier):
                if f.is_constant():
                    ring = base.ring
                    mod = Ideal(ring, st.closed.gb())
                else:
                    s = fresh_name("s", set(base.variables))
                    ring = Ring(tuple(base.variables) + (s,), GREVLEX)
                    mod = Ideal(ring, list(st.closed.extend(ring).gens) + [ring.var(s) * f.to_ring(ring) - ring.one])
                    mod = Ideal(ring, mod.gb())
                if mod.is_unit():
                    continue
                chart = AffineChart(f"{name}_{st.name}_{k}", QuotientRing(ring, mod))
                b = SchemeMap(chart, base, {v: ring.var(v) for v in base.variables}, check=False)
                status = _piece_status(st, f)
                pieces.append(BsfPiece(st.name, chart, b, status.generator, status))
    if any(not c.is_empty() for c in cores.values()):
        partial = True
        notes.append("the core is nonempty: only the part off the core is described")
    notes.append("assumed, not certified: X connected; Y integral, noetherian, projective and flat")
    return BsfResult("structure", pieces, cores, partial, notes, {"strata": reports},
                     {"atlas": dict(atlas), "fiber": tuple(fiber)})


def _piece_status(st, f):
    statuses = [p[3] for p in st.pieces if p[0] == f]
    for s in statuses:
        if s.kind == "cartier":
            return s
    return statuses[0] if statuses else CartierStatus("full", None)


def _point_strata(Z: ClosedSub) -> StratumReport:
    """Y a point: the fiber over x is all of Y on Z and empty off it."""
    from .family import Stratum

    X = Z.ambient
    frontier = [g for g in Z.ideal.gb() if not member(g, X.modulus)]
    strata = []
    if frontier and not all(saturate(X.modulus, f).is_unit() for f in frontier):
        st = Stratum(0, X.modulus, frontier)
        st.pieces = [(f, X.ring, "point", CartierStatus("full", X.ring.one)) for f in frontier]
        strata.append(st)
    return StratumReport(X, (), 0, strata, ClosedSub(X, Z.ideal), [Z.ideal])


# --- universal property tests -------------------------------------------------------------

def local_factor_ideal(piece: BsfPiece, g: SchemeMap) -> Ideal:
    """Ideal L of T with: on D(l), l in L, g factors through the piece, uniquely.

    The fibre product F = T x_X piece is built; each piece coordinate must
    satisfy a relation q*y - r with q, r on T, and F must then agree with T
    on the localisation.
    """
    T = g.source
    P = piece.chart
    taken = set(T.variables)
    ren = {}
    for v in P.variables:
        w = fresh_name(f"{v}_p", taken)
        taken.add(w)
        ren[v] = w
    unknowns = [ren[v] for v in P.variables]
    ring = Ring(tuple(T.variables) + tuple(unknowns), GREVLEX)
    sub = {v: ring.var(ren[v]) for v in P.variables}
    gens = [h.to_ring(ring) for h in T.modulus.gens]
    gens += [h.substitute(sub, ring) for h in P.modulus.gens]
    for x in piece.b.target.variables:
        gens.append(piece.b.images[x].substitute(sub, ring) - g.images[x].to_ring(ring))
    F = Ideal(ring, gens)
    if piece.saturate_by is not None and not piece.saturate_by.is_constant():
        # strict transform: a factorization with regular pulled back center lands here
        F = saturate(F, piece.saturate_by.substitute(sub, ring))
    IT = T.modulus
    if F.is_unit():
        return Ideal.unit(T.ring) if IT.is_unit() else Ideal(T.ring, IT.gens)
    Q = None
    for y in unknowns:
        Jy = eliminate(F, list(T.variables) + [y])
        bring = Ring((y,) + tuple(T.variables), TermOrder("block", 1))
        qs = []
        for h in groebner([p.to_ring(bring) for p in Jy.gens]):
            d = h.degree_in(y)
            if d == 0:
                qs.append(h.to_ring(T.ring))
            elif d == 1:
                lead = Poly(bring, {m: c for m, c in h.terms.items() if m[0] == 1})
                qs.append(Poly(bring, {(0,) + m[1:]: c for m, c in lead.terms.items()}).to_ring(T.ring))
        Qy = IT + Ideal(T.ring, qs)
        Q = Qy if Q is None else intersect(Q, Qy)
    if Q is None:
        Q = Ideal.unit(T.ring)
    contributions = []
    for q in Q.gb():
        if member(q, IT):
            continue
        s = fresh_name("s", set(ring.variables))
        lring = Ring(tuple(ring.variables) + (s,), GREVLEX)
        Fq = F.extend(lring) + Ideal(lring, [lring.var(s) * q.to_ring(lring) - lring.one])
        E = eliminate(Fq, list(T.variables))
        E = Ideal(T.ring, [e.to_ring(T.ring) for e in E.gens])
        satT = saturate(IT, q)
        if ideal_equal(E, satT):
            contributions.append(q)
            continue
        ann = None
        for e in E.gens:
            c = quotient(satT, e)
            ann = c if ann is None else intersect(ann, c)
        for a in (ann.gens if ann is not None else []):
            contributions.append(q * a)
    return IT + Ideal(T.ring, contributions)


def factoring_components(result: BsfResult, g: SchemeMap) -> List[str]:
    """Components through which g: T -> X factors (uniquely, by construction)."""
    out = []
    for label in result.components:
        pieces = [p for p in result.pieces_of(label) if p.b.target.ring == g.target.ring
                  and ideal_equal(Ideal(g.target.ring, p.b.target.modulus.gens), g.target.modulus)]
        if not pieces:
            continue
        total = Ideal(g.source.ring, g.source.modulus.gens)
        for p in pieces:
            total = total + local_factor_ideal(p, g)
            if total.is_unit():
                break
        if total.is_unit():
            out.append(label)
    return out


def center_pullback_status(result: BsfResult, g: SchemeMap, chart_name: Optional[str] = None) -> CartierStatus:
    """Cartier status of the center pulled back to T_Y, computed on T directly."""
    T = g.source
    if result.route == "pipeline":
        B = result.center["algebra"]
        Zs = result.center["Z"]
        TB = base_change(T, B)
        images = {v: g.images[v].to_ring(TB.ring) for v in result.center["X"].variables}
        images.update({e: TB.ring.var(e) for e in B.extra_basis})
        pulled = Ideal(TB.ring, [h.substitute(images, TB.ring) for h in Zs.ideal.gens])
        return is_effective_cartier(pulled, TB.coords)
    Z = result.center["atlas"][chart_name]
    fiber = result.center["fiber"]
    if not fiber:
        pulled = Ideal(T.ring, [h.substitute(dict(g.images), T.ring) for h in Z.ideal.gens])
        return is_effective_cartier(pulled, T.coords)
    if len(fiber) == 1:
        charts = [(None, fiber[0])]
    else:
        u, v = fiber
        charts = [(u, v), (v, u)]
    statuses = []
    for one, coord in charts:
        c = fresh_name(coord, set(T.variables))
        ring = Ring(tuple(T.variables) + (c,), GREVLEX)
        images = {x: g.images[x].to_ring(ring) for x in g.target.variables}
        images[coord] = ring.var(c)
        if one is not None:
            images[one] = ring.one
        pulled = Ideal(ring, [h.substitute(images, ring) for h in Z.ideal.gens])
        A = QuotientRing(ring, T.modulus.extend(ring))
        statuses.append(is_effective_cartier(pulled, A))
    for s in statuses:
        if not s.is_cartier:
            return s
    return statuses[0]


@dataclass
class FactorizationCase:
    name: str
    cartier: bool
    cartier_kind: str
    components: List[str]

    @property
    def correct(self):
        if self.cartier:
            return len(self.components) == 1
        return not self.components

    def to_json(self):
        return {
            "map": self.name,
            "cartier": self.cartier,
            "components": self.components,
            "correct": self.correct,
        }


def classify_test_map(result: BsfResult, name: str, g: SchemeMap, chart_name=None) -> FactorizationCase:
    status = center_pullback_status(result, g, chart_name)
    return FactorizationCase(name, status.is_cartier, status.kind, factoring_components(result, g))


# --- fixture checks ---------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self):
        return {"check": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class FixtureReport:
    name: str
    checks: List[Check]

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {"fixture": self.name, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _gb_text(I):
    return "{" + ", ".join(str(g) for g in I.gb()) + "}"


def _eq_check(name, I, J):
    ok = ideal_equal(I, J)
    return Check(name, ok, "" if ok else f"{_gb_text(I)} != {_gb_text(J)}")


def cluster_fixtures() -> FixtureReport:
    """The two closing ring examples: A = QQ[x,y]/(xy) and QQ[x,y]/(y^2, xy), E = V(x)."""
    from .ideals import saturate_iterated

    R = Ring(("x", "y"))
    x, y = R.var("x"), R.var("y")
    checks = []
    I1 = Ideal(R, [x * y])
    I2 = Ideal(R, [y**2, x * y])
    checks.append(_eq_check("saturate(<xy>, x) = <y>", saturate(I1, x), Ideal(R, [y])))
    checks.append(_eq_check("saturate(<y^2, xy>, x) = <y>", saturate(I2, x), Ideal(R, [y])))
    checks.append(_eq_check("iterated colon agrees (xy)", saturate_iterated(I1, x), Ideal(R, [y])))
    checks.append(_eq_check("iterated colon agrees (y^2, xy)", saturate_iterated(I2, x), Ideal(R, [y])))
    # A = QQ[x,y]/(xy): W' = V(y), W_E = W_E^ii = V(x)
    A1 = AffineChart("W1", QuotientRing(R, I1))
    Wp = blowup_locally_principal(A1, x).result
    checks.append(_eq_check("W' of QQ[x,y]/(xy) is A/(y)", Wp.ideal, Ideal(R, [y])))
    checks.append(_eq_check("W_E^ii of QQ[x,y]/(xy) is A/(x)", saturate(I1, y), Ideal(R, [x])))
    checks.append(_eq_check("W_E of QQ[x,y]/(xy) is A/(x)", I1 + Ideal(R, [x]), Ideal(R, [x])))
    # A = QQ[x,y]/(y^2, xy)
    A2 = AffineChart("W2", QuotientRing(R, I2))
    Wp2 = blowup_locally_principal(A2, x).result
    WE = I2 + Ideal(R, [x])
    checks.append(_eq_check("W' of QQ[x,y]/(y^2,xy) is A/(y)", Wp2.ideal, Ideal(R, [y])))
    checks.append(_eq_check("W_E union W' equals W", intersect(WE, Wp2.ideal), I2))
    checks.append(Check("W_E^ii is empty", saturate(I2, y).is_unit()))
    checks.append(_eq_check(
        "intersect(<y, y^2, xy>, <x, y^2, xy>) = <y^2, xy>",
        intersect(Ideal(R, [y, y**2, x * y]), Ideal(R, [x, y**2, x * y])),
        Ideal(R, [y**2, x * y]),
    ))
    return FixtureReport("cluster-examples", checks)


def sylvester_resultant(A: Sequence[Poly], Bc: Sequence[Poly]) -> Poly:
    """Resultant of two binary forms of degree n given by coefficient lists."""
    from .family import _det

    n = len(A) - 1
    if n == 0:
        return A[0].ring.one
    size = 2 * n
    zero = A[0].ring.zero
    rows = []
    for k in range(n):
        rows.append([zero] * k + list(A) + [zero] * (n - 1 - k))
    for k in range(n):
        rows.append([zero] * k + list(Bc) + [zero] * (n - 1 - k))
    assert all(len(r) == size for r in rows)
    return _det(rows)


def coefficient_system(n: int):
    """Ring, coefficient equations of xA - zB, yA - wB and det, and the resultant."""
    a = [f"a{k}" for k in range(n + 1)]
    b = [f"b{k}" for k in range(n + 1)]
    ring = Ring(("x", "y", "z", "w") + tuple(a) + tuple(b), GREVLEX)
    x, y, z, w = (ring.var(v) for v in "xyzw")
    A = [ring.var(v) for v in a]
    Bc = [ring.var(v) for v in b]
    eqs = []
    for k in range(n + 1):
        eqs.append(x * A[k] - z * Bc[k])
        eqs.append(y * A[k] - w * Bc[k])
    eqs.append(x * w - y * z)
    res = sylvester_resultant(A, Bc)
    return ring, eqs, res


def verify_small_resolution_fixture(n_max=2) -> FixtureReport:
    checks = []
    det = "x*w - y*z"
    # (i) the constant component X_0 against the incidence variety, chartwise
    ring0, eqs0, _ = coefficient_system(0)
    X0 = Ideal(ring0, eqs0)
    for chart, (one, other, sign) in {"a=1": ("a0", "b0", -1), "b=1": ("b0", "a0", -1)}.items():
        vars_ = ("x", "y", "z", "w", other)
        R = Ring(vars_, GREVLEX)
        sub = {one: R.one, other: R.var(other)}
        X0c = Ideal(R, [g.substitute(sub, R) for g in eqs0])
        # incidence Z = {M lambda^t = 0}; X_0 -> Z by M -> M^t and [a:b] -> [a:-b]
        Zr = Ring(("x", "y", "z", "w", "l"), GREVLEX)
        if one == "a0":
            inc = ["x + y*l", "z + w*l", det]  # chart u = 1, l = v
        else:
            inc = ["x*l + y", "z*l + w", det]  # chart v = 1, l = u
        iso = {"x": R.var("x"), "y": R.var("z"), "z": R.var("y"), "w": R.var("w"),
               "l": R.var(other).scale(sign)}
        Zc = Ideal(R, [Zr.parse(t).substitute(iso, R) for t in inc])
        checks.append(_eq_check(f"X_0 matches the incidence variety on chart {chart}", X0c, Zc))
        # compact spot-check from the worked chart
        if one == "a0":
            explicit = Ideal.parse(R, ["x - z*b0", "y - w*b0", det])
            checks.append(_eq_check("chart a=1 ideal is <x - z*b, y - w*b, xw - yz>", X0c, explicit))
    # (ii) n >= 1: over pairs of forms without common zero, M = 0
    for n in range(1, n_max + 1):
        ring, eqs, res = coefficient_system(n)
        I = Ideal(ring, eqs)
        target = Ideal.parse(ring, ["x", "y", "z", "w"])
        ok_members = all(any(member(v * res**k, I) for k in range(1, 5)) for v in target.gens)
        sat = saturate(I, res)
        checks.append(_eq_check(f"n={n}: coefficient system saturated by the resultant is <x,y,z,w>", sat, target))
        checks.append(Check(f"n={n}: x,y,z,w times a resultant power lie in the system", ok_members))
    # (iii) P^1 x X_0: the pulled back Z is Cartier; on n >= 1 components it is everything
    for chart, (one, other) in {"a=1": ("a0", "b0"), "b=1": ("b0", "a0")}.items():
        for fchart, (fu, fv) in {"u=1": ("u", "v"), "v=1": ("v", "u")}.items():
            R = Ring(("x", "y", "z", "w", other, fv), GREVLEX)
            sub = {one: R.one, other: R.var(other)}
            amb = AffineChart(f"P1xX0_{chart}_{fchart}",
                              QuotientRing(R, Ideal(R, [g.substitute(sub, R) for g in eqs0])))
            Zr = Ring(("x", "y", "z", "w", "u", "v"), GREVLEX)
            zsub = {"x": R.var("x"), "y": R.var("y"), "z": R.var("z"), "w": R.var("w"),
                    fu: R.one, fv: R.var(fv)}
            # Z lives in P^1 x D, pulled back along b' (identity on M)
            pulled = Ideal(R, [Zr.parse(t).substitute(zsub, R) for t in ("x*u + y*v", "z*u + w*v")])
            st = is_principal_cartier(pulled, amb.coords)
            checks.append(Check(f"pulled back Z is Cartier on {chart}, {fchart}", st.kind == "cartier",
                                st.kind if st.generator is None else f"{st.kind}: {st.generator}"))
            if st.generator is not None and st.kind == "cartier":
                bl = blowup_locally_principal(amb, st.generator)
                checks.append(Check(f"blow up of P^1 x X_0 is the identity on {chart}, {fchart}",
                                    bl.result.is_everything()))
    for n in range(1, n_max + 1):
        ring, eqs, res = coefficient_system(n)
        ring2 = Ring(tuple(ring.variables) + ("u", "v"), GREVLEX)
        comp = saturate(Ideal(ring, eqs), res).extend(ring2)
        amb = AffineChart(f"P1xX{n}", QuotientRing(ring2, comp))
        zgen = ring2.parse("x*u + y*v")
        z2 = ring2.parse("z*u + w*v")
        pulled_zero = member(zgen, comp) and member(z2, comp)
        bl = blowup_locally_principal(amb, zgen)
        checks.append(Check(f"n={n}: pulled back Z is all of P^1 x X_{n}, blow up empty",
                            pulled_zero and bl.empty))
    return FixtureReport("small-resolution", checks)
