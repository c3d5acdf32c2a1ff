"""Loci in the base of a family: Iso locus, constfy locus, flattening strata, core."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .algebra import GREVLEX, Poly, Ring, groebner, normal_form
from .ideals import (
    CartierStatus,
    Ideal,
    QuotientRing,
    eliminate,
    fresh_name,
    ideal_equal,
    is_principal_cartier,
    member,
    saturate,
)
from .scheme import AffineChart, ClosedSub, SchemeError, SchemeMap


class SplitViolated(ValueError):
    pass


class NotFiberFinite(ValueError):
    pass


# --- base x fiber splittings --------------------------------------------------------

@dataclass
class Split:
    """Ambient = base x fiber, where fiber = QQ[fiber_vars]/fiber_relations.

    The standard monomials of the fiber relations are a basis of the fiber
    algebra, so every element of the ambient ring has well defined base
    coefficients.
    """

    ambient: AffineChart
    base: AffineChart
    fiber_vars: tuple
    fiber_gb: list

    def coefficients(self, f: Poly) -> Dict[tuple, Poly]:
        r = normal_form(f, self.fiber_gb) if self.fiber_gb else f
        return r.coefficients_in(list(self.fiber_vars), self.base.ring)

    def coefficient_ideal(self, polys: Sequence[Poly]) -> Ideal:
        coeffs = []
        for f in polys:
            coeffs.extend(self.coefficients(f).values())
        return self.base.modulus + Ideal(self.base.ring, coeffs)

    def extend(self, I: Ideal) -> Ideal:
        return self.ambient.modulus + I.extend(self.ambient.ring)


def make_split(ambient: AffineChart, fiber_vars: Sequence[str], name=None) -> Split:
    fiber_vars = tuple(fiber_vars)
    for v in fiber_vars:
        ambient.ring.index(v)
    base_vars = [v for v in ambient.variables if v not in fiber_vars]
    mod = ambient.modulus
    base_mod = eliminate(mod, base_vars)
    fib_mod = eliminate(mod, list(fiber_vars))
    ring = ambient.ring
    rebuilt = Ideal(ring, [g.to_ring(ring) for g in base_mod.gens + fib_mod.gens])
    if not ideal_equal(rebuilt, mod):
        raise SplitViolated(
            f"{ambient.name} is not a product of a base and a fiber in {list(fiber_vars)}"
        )
    base = AffineChart(name or f"{ambient.name}_base", QuotientRing(base_mod.ring, base_mod))
    fib_gb = groebner([g.to_ring(ring) for g in fib_mod.gens]) if fib_mod.gens else []
    return Split(ambient, base, fiber_vars, fib_gb)


def algebra_split(ambient: AffineChart, B) -> Split:
    """Split of X x Spec B with the basis names of B as fiber coordinates."""
    return make_split(ambient, B.extra_basis)


# --- Iso locus ----------------------------------------------------------------------------

@dataclass
class IsoLocus:
    base: AffineChart
    locus: ClosedSub
    certificate: Ideal  # the coefficient ideal

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "locus": [str(g) for g in self.locus.ideal.gb()],
            "empty": self.locus.is_empty(),
        }


def iso_locus(Z: ClosedSub, split: Split) -> IsoLocus:
    """Largest closed W of the base with Z_W = X_W: V(coefficient ideal)."""
    if Z.ambient.ring != split.ambient.ring:
        raise SplitViolated("Z does not live on the split ambient")
    C = split.coefficient_ideal(Z.ideal.gens)
    locus = ClosedSub(split.base, C)
    over = split.extend(C)
    if not ideal_equal(Z.ideal + over, over):
        raise AssertionError("Z does not fill the ambient over its Iso locus")
    return IsoLocus(split.base, locus, C)


def fills_over(Z: ClosedSub, split: Split, W: Ideal) -> bool:
    """Z_W = X_W for the closed W = V(W) of the base."""
    over = split.extend(W)
    return ideal_equal(Z.ideal + over, over)


# --- constfy -------------------------------------------------------------------------------

@dataclass
class ConstfyLocus:
    base: AffineChart
    locus: ClosedSub
    descended_map: Optional[SchemeMap]
    equaliser: Ideal

    def to_json(self):
        return {
            "locus": [str(g) for g in self.locus.ideal.gb()],
            "empty": self.locus.is_empty(),
            "descended": None if self.descended_map is None else self.descended_map.to_json(),
        }


def fibre_square(split: Split, suffix="'"):
    """X x_Y X for the projection X -> base (fiber duplicated); returns (split2, first, second)."""
    amb = split.ambient
    taken = set(amb.variables)
    dup = {}
    for v in split.fiber_vars:
        w = fresh_name(v + "_b", taken)
        taken.add(w)
        dup[v] = w
    ring = Ring(tuple(amb.variables) + tuple(dup[v] for v in split.fiber_vars), GREVLEX)
    sub = {v: ring.var(dup[v]) for v in split.fiber_vars}
    gens = [g.to_ring(ring) for g in amb.modulus.gens]
    gens += [g.to_ring(ring).substitute(sub, ring) for g in split.fiber_gb]
    chart = AffineChart(f"{amb.name}x{amb.name}", QuotientRing(ring, Ideal(ring, gens)))
    fib = tuple(split.fiber_vars) + tuple(dup[v] for v in split.fiber_vars)
    fib_gb = groebner(
        [g.to_ring(ring) for g in split.fiber_gb]
        + [g.to_ring(ring).substitute(sub, ring) for g in split.fiber_gb]
    ) if split.fiber_gb else []
    base = split.base
    split2 = Split(chart, base, fib, fib_gb)
    first = SchemeMap(chart, amb, {v: ring.var(v) for v in amb.variables}, check=False)
    second_images = {v: ring.var(v) for v in amb.variables}
    second_images.update(sub)
    second = SchemeMap(chart, amb, second_images, check=False)
    return split2, first, second


def constfy(f: SchemeMap, split: Split) -> ConstfyLocus:
    """Largest closed W of the base over which f is constant along the fibres.

    The equaliser of f o pr1 and f o pr2 on X x_Y X is a closed subscheme;
    its Iso locus is the answer. The descended map is the constant
    coefficient of f over the locus.
    """
    if f.source.ring != split.ambient.ring:
        raise SplitViolated("f must start at the split ambient")
    split2, p1, p2 = fibre_square(split)
    eq = [p1.pullback(f.images[w]) - p2.pullback(f.images[w]) for w in f.target.variables]
    E = ClosedSub(split2.ambient, Ideal(split2.ambient.ring, eq))
    loc = iso_locus(E, split2)
    locus = ClosedSub(split.base, loc.certificate)
    descended = None
    if not locus.is_empty():
        chart = locus.as_chart(f"{split.base.name}_const")
        zero = tuple([0] * len(split.fiber_vars))
        images = {}
        for w in f.target.variables:
            images[w] = split.coefficients(f.images[w]).get(zero, split.base.ring.zero)
        try:
            descended = SchemeMap(chart, f.target, images)
        except SchemeError:
            descended = None
    return ConstfyLocus(split.base, locus, descended, E.ideal)


# --- fiber lengths over a projective line --------------------------------------------------

def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * _det(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total if total is not None else M[0][0] - M[0][0]


def minors(M, k) -> List[Poly]:
    """All k x k minors of a matrix of Polys (nonzero ones, deduplicated)."""
    out, seen = [], set()
    rows, cols = len(M), len(M[0]) if M else 0
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            d = _det([[M[r][c] for c in C] for r in R])
            if d and d not in seen:
                seen.add(d)
                out.append(d)
    return out


def homogenize(g: Poly, a: str, u: str, v: str, ring: Ring) -> Poly:
    """a -> u/v, cleared by v^deg_a(g); the result lives in ``ring``."""
    D = g.degree_in(a)
    ia = g.ring.index(a)
    out = ring.zero
    for m, c in g.terms.items():
        k = m[ia]
        rest = {g.ring.variables[i]: e for i, e in enumerate(m) if e and i != ia}
        t = ring.const(c)
        for name, e in rest.items():
            t = t * ring.var(name) ** e
        out = out + t * ring.var(u) ** k * ring.var(v) ** (D - k)
    return out


@dataclass
class Stratum:
    label: int  # fiber length; 0 is the empty fiber
    closed: Ideal
    frontier: List[Poly]
    cartier: str = "yes"  # yes | no | unknown
    pieces: list = field(default_factory=list)  # (frontier generator, chart, fiber chart name, CartierStatus)
    note: str = ""

    @property
    def name(self):
        return "empty" if self.label == 0 else str(self.label)

    def contains_point(self, point) -> bool:
        if any(g.evaluate(point) for g in self.closed.gens):
            return False
        return any(f.evaluate(point) for f in self.frontier)

    def to_json(self):
        return {
            "label": self.name,
            "closed": [str(g) for g in self.closed.gb()],
            "frontier": [str(f) for f in self.frontier],
            "cartier": self.cartier,
            "note": self.note,
        }


@dataclass
class StratumReport:
    base: AffineChart
    fiber: tuple
    degree: int  # the slice degree N
    strata: List[Stratum]
    core: ClosedSub
    fitting: List[Ideal]

    def locate(self, point) -> List[str]:
        """Labels of the strata containing a rational base point, 'full' for the core."""
        out = [s.name for s in self.strata if s.contains_point(point)]
        if all(not g.evaluate(point) for g in self.core.ideal.gens):
            out.append("full")
        return out

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "fiber": list(self.fiber),
            "strata": [s.to_json() for s in self.strata],
            "core": [str(g) for g in self.core.ideal.gb()],
            "core_empty": self.core.is_empty(),
        }


def _fiber_setup(Z: ClosedSub, fiber: Sequence[str], monic_witness=None):
    """Return (split, u, v, homogeneous generators in base+u+v ring, affine_name)."""
    amb = Z.ambient
    split = make_split(amb, fiber)
    if split.fiber_gb:
        raise SplitViolated("the fiber coordinates must be free")
    base = split.base
    gens = [g for g in Z.ideal.gens if not member(g, amb.modulus)]
    if len(fiber) == 2:
        u, v = fiber
        iu, iv = amb.ring.index(u), amb.ring.index(v)
        for g in gens:
            degs = {m[iu] + m[iv] for m in g.terms}
            if len(degs) > 1:
                raise ValueError(f"{g} is not homogeneous in {u}, {v}")
        ring = Ring(tuple(base.variables) + (u, v), GREVLEX)
        return split, u, v, [g.to_ring(ring) for g in gens], None
    if len(fiber) != 1:
        raise ValueError("fiber must be one affine or two projective coordinates")
    (a,) = fiber
    taken = set(amb.variables)
    u = fresh_name("u", taken)
    v = fresh_name("v", taken | {u})
    ring = Ring(tuple(base.variables) + (u, v), GREVLEX)
    witness = _find_monic(Z, a) if monic_witness is None else amb.ring(monic_witness)
    if witness is not None:
        if not member(witness, Z.ideal):
            raise NotFiberFinite(f"monic witness {witness} is not in the ideal of Z")
        if not _is_monic_in(witness, a, split):
            raise NotFiberFinite(f"witness {witness} is not monic in {a}")
        gens = gens + [witness]
    hom = [homogenize(g, a, u, v, ring) for g in gens]
    if witness is None:
        # points at infinity may only sit over the core
        tops = [split.coefficients(g).get((g.degree_in(a),), base.ring.zero) for g in gens]
        inf = base.modulus + Ideal(base.ring, tops)
        core = split.coefficient_ideal(gens)
        for c in core.gens:
            if not saturate(inf, c).is_unit():
                raise NotFiberFinite(
                    f"not fiber-finite: fibers of Z over V({', '.join(map(str, tops))}) reach infinity off the core"
                )
    return split, u, v, hom, a


def _is_monic_in(g: Poly, a: str, split: Split) -> bool:
    d = g.degree_in(a)
    if d == 0:
        return False
    lead = split.coefficients(g).get((d,))
    return lead is not None and lead.is_constant() and bool(lead)


def _find_monic(Z: ClosedSub, a: str):
    try:
        split = make_split(Z.ambient, (a,))
    except SplitViolated:
        return None
    cands = [g for g in Z.ideal.gens] + list(Z.ideal.gb())
    for g in sorted(cands, key=lambda p: (p.degree_in(a), len(p.terms))):
        if _is_monic_in(g, a, split):
            return g
    return None


def slice_matrix(gens: Sequence[Poly], u: str, v: str, base: AffineChart, N: int):
    """Rows: coefficients (in base) of m*g in degree N, columns u^N .. v^N."""
    rows = []
    for g in gens:
        iu = g.ring.index(u)
        iv = g.ring.index(v)
        d = next(iter(g.terms))[iu] + next(iter(g.terms))[iv]
        if d > N:
            raise ValueError("slice degree below a generator degree")
        coeffs = g.coefficients_in([u, v], base.ring)
        for k in range(N - d + 1):
            # multiplier u^k v^(N-d-k)
            row = [base.ring.zero] * (N + 1)
            for (eu, ev), c in coeffs.items():
                row[N - (eu + k)] = base.coords.reduce(c)
            if any(row):
                rows.append(row)
    return rows


def flattening_strata(Z: ClosedSub, fiber: Sequence[str] = ("u", "v"), monic_witness=None) -> StratumReport:
    """Strata of the base by the length of the fibers of Z, plus the core.

    ``fiber`` is either two homogeneous coordinates of a projective line or a
    single affine coordinate (then Z must be finite over the base off the
    core, certified by a monic generator or by the absence of points at
    infinity off the core). Lengths come from the degree N slice with N twice
    the largest fiber degree, where the Hilbert function is already constant;
    stratum d is V(Fitt_{d-1}) minus V(Fitt_d).
    """
    split, u, v, gens, affine = _fiber_setup(Z, fiber, monic_witness)
    base = split.base
    ring = gens[0].ring if gens else Ring(tuple(base.variables) + (u, v), GREVLEX)
    D = max((next(iter(g.terms))[ring.index(u)] + next(iter(g.terms))[ring.index(v)] for g in gens), default=0)
    N = 2 * D
    M = slice_matrix(gens, u, v, base, N)
    fitting = []
    for j in range(N + 1):
        k = N + 1 - j
        fitting.append(base.modulus + Ideal(base.ring, minors(M, k) if len(M) >= k else []))
    core_ideal = fitting[N]
    check = split.coefficient_ideal([g.to_ring(split.ambient.ring) for g in gens]) if affine is None else None
    if check is not None and not ideal_equal(check, core_ideal):
        raise AssertionError("core from the slice differs from the coefficient ideal")
    strata = []
    for d in range(N + 1):
        closed = base.modulus if d == 0 else fitting[d - 1]
        frontier = [f for f in fitting[d].gb() if not member(f, closed)]
        frontier = [f for f in frontier if not saturate(closed, f).is_unit()]
        if not frontier:
            continue
        st = Stratum(d, closed, frontier)
        _cartier_flags(st, base, gens, u, v, affine)
        strata.append(st)
    return StratumReport(base, tuple(fiber), N, strata, ClosedSub(base, core_ideal), fitting)


def _cartier_flags(st: Stratum, base: AffineChart, gens, u, v, affine):
    # (coordinate set to 1, remaining coordinate)
    charts = [(v, u)] if affine else [(u, v), (v, u)]
    flags = []
    for f in st.frontier:
        for one, coord in charts:
            taken = set(base.variables) | {coord}
            s = fresh_name("s", taken)
            ring = Ring(tuple(base.variables) + (coord, s), GREVLEX)
            mod = st.closed.extend(ring) + Ideal(ring, [ring.var(s) * f.to_ring(ring) - ring.one])
            A = QuotientRing(ring, mod)
            if A.is_zero_ring():
                continue
            sub = {one: ring.one, coord: ring.var(coord)}
            J = Ideal(ring, [g.substitute(sub, ring) for g in gens])
            status = is_principal_cartier(J, A)
            name = affine or f"{one}=1"
            st.pieces.append((f, ring, name, status))
            flags.append(status)
    if all(s.is_cartier for s in flags):
        st.cartier = "yes"
    elif any(s.kind == "principal_not_cartier" for s in flags):
        st.cartier = "no"
        st.note = "the Cartier locus of this stratum is a proper open subset; connectedness is not certified"
    else:
        st.cartier = "unknown"
        st.note = "no single generator found on some piece"


# --- independent sample-point oracle ---------------------------------------------------------

def fiber_length_at(Z: ClosedSub, fiber: Sequence[str], point: Mapping[str, object]):
    """Length of the fiber of Z over a rational base point, or 'full'.

    Computed directly: in the chart v = 1 the fiber ideal is principal in
    QQ[u] and its degree counts the affine points; the point at infinity
    contributes the order of vanishing at v = 0 in the chart u = 1.
    """
    amb = Z.ambient
    gens = [g for g in Z.ideal.gens]
    if len(fiber) == 1:
        (a,) = fiber
        r1 = Ring((a,), GREVLEX)
        vals = {k: r1.const(Fraction(x)) for k, x in point.items()}
        spec = [g.substitute(vals, r1) for g in gens]
        g1 = _univariate_gcd(spec)
        if g1 is None:
            return "full"
        return g1.total_degree()
    u, v = fiber
    ru, rv = Ring((u,), GREVLEX), Ring((v,), GREVLEX)
    vals_u = {k: ru.const(Fraction(x)) for k, x in point.items()}
    vals_v = {k: rv.const(Fraction(x)) for k, x in point.items()}
    vals_u[v] = ru.one
    vals_v[u] = rv.one
    g1 = _univariate_gcd([g.substitute(vals_u, ru) for g in gens])
    g2 = _univariate_gcd([g.substitute(vals_v, rv) for g in gens])
    if g1 is None or g2 is None:
        return "full"
    order = min(m[0] for m in g2.terms)
    return g1.total_degree() + order


def _univariate_gcd(polys):
    polys = [p for p in polys if p]
    if not polys:
        return None
    return groebner(polys)[0]
