"""Weil restriction along a finite free QQ-algebra B, by coordinate expansion."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import LEX, GREVLEX, Poly, Ring, groebner
from .ideals import Ideal, QuotientRing, fresh_name
from .scheme import AffineChart, SchemeMap

Vec = Tuple[Fraction, ...]


class AlgebraTableError(ValueError):
    pass


class FiniteAlgebra:
    """B = QQ e1 + ... + QQ en with e1 = 1 and a structure-constant table.

    ``table[i][j]`` is the coordinate vector of e_{i+1} * e_{j+1}.
    """

    def __init__(self, name: str, dim: int, table, basis: Optional[Sequence[str]] = None):
        if dim < 1:
            raise AlgebraTableError("dimension must be positive")
        self.name = name
        self.dim = dim
        self.basis = tuple(basis) if basis else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.basis) != dim:
            raise AlgebraTableError("basis length differs from dimension")
        self.table = [[tuple(Fraction(c) for c in table[i][j]) for j in range(dim)] for i in range(dim)]
        for row in self.table:
            for v in row:
                if len(v) != dim:
                    raise AlgebraTableError("product vector has wrong length")
        self.validate()

    @classmethod
    def from_products(cls, name, dim, products: Mapping[Tuple[int, int], Sequence], basis=None):
        """Table from the listed products (1-based indices).

        e1 acts as the identity; products not listed are zero.
        """
        zero = (0,) * dim
        table = [[zero] * dim for _ in range(dim)]
        for i in range(dim):
            table[0][i] = table[i][0] = unit_vector(dim, i)
        for (i, j), v in products.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise AlgebraTableError(f"basis index out of range in e{i}*e{j}")
            if 1 in (i, j) and tuple(Fraction(c) for c in v) != unit_vector(dim, max(i, j) - 1):
                raise AlgebraTableError("e1 must act as the identity")
            table[i - 1][j - 1] = tuple(v)
            if (j, i) not in products:
                table[j - 1][i - 1] = tuple(v)
        return cls(name, dim, table, basis)

    # presets
    @classmethod
    def rational(cls, name="QQ"):
        return cls.from_products(name, 1, {})

    @classmethod
    def dual_numbers(cls, name="D"):
        return cls.from_products(name, 2, {(2, 2): (0, 0)})

    @classmethod
    def split(cls, name="QxQ"):
        # e2 is the idempotent (0, 1)
        return cls.from_products(name, 2, {(2, 2): (0, 1)})

    def validate(self):
        n = self.dim
        for i in range(n):
            if self.table[0][i] != unit_vector(n, i) or self.table[i][0] != unit_vector(n, i):
                raise AlgebraTableError("e1 must act as the identity")
        for i in range(n):
            for j in range(i):
                if self.table[i][j] != self.table[j][i]:
                    raise AlgebraTableError(f"table not commutative at e{j + 1}*e{i + 1}")
        for i, j, k in itertools.product(range(n), repeat=3):
            a = self.mul(self.table[i][j], unit_vector(n, k))
            b = self.mul(unit_vector(n, i), self.table[j][k])
            if a != b:
                raise AlgebraTableError(
                    f"table not associative at (e{i + 1}*e{j + 1})*e{k + 1}"
                )

    def mul(self, a: Sequence, b: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in enumerate(self.table[i][j]):
                    if c:
                        out[k] += xy * c
        return tuple(out)

    def one(self) -> Vec:
        return unit_vector(self.dim, 0)

    def element(self, coords) -> Vec:
        v = tuple(Fraction(c) for c in coords)
        if len(v) != self.dim:
            raise ValueError("wrong number of coordinates")
        return v

    @property
    def extra_basis(self):
        """Basis names other than the unit, used as ring variables for X_B."""
        return self.basis[1:]

    def relations(self, ring: Ring) -> Ideal:
        """Presentation of B as QQ[e2..en] modulo these, read inside ``ring``."""
        gens = []
        n = self.dim
        for i in range(1, n):
            for j in range(i, n):
                lhs = ring.var(self.basis[i]) * ring.var(self.basis[j])
                gens.append(lhs - self.vector_to_poly(self.table[i][j], ring))
        return Ideal(ring, gens)

    def vector_to_poly(self, v, ring: Ring) -> Poly:
        p = ring.const(v[0])
        for k in range(1, self.dim):
            if v[k]:
                p = p + ring.var(self.basis[k]).scale(v[k])
        return p

    def ring(self, order=GREVLEX) -> Ring:
        return Ring(self.extra_basis, order)

    def tensor(self, other: "FiniteAlgebra", name=None) -> "FiniteAlgebra":
        """B (x) C with basis e_i (x) f_j in row-major order, unit first."""
        n, m = self.dim, other.dim
        basis = [f"{a}_{b}" for a in self.basis for b in other.basis]
        table = [[None] * (n * m) for _ in range(n * m)]
        for (i, j), (k, l) in itertools.product(itertools.product(range(n), range(m)), repeat=2):
            a = self.table[i][k]
            b = other.table[j][l]
            table[i * m + j][k * m + l] = tuple(x * y for x in a for y in b)
        return FiniteAlgebra(name or f"{self.name}(x){other.name}", n * m, table, basis)

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, dim={self.dim})"

    def to_json(self):
        prods = {}
        for i in range(1, self.dim):
            for j in range(i, self.dim):
                prods[f"{self.basis[i]}*{self.basis[j]}"] = [str(c) for c in self.table[i][j]]
        return {"name": self.name, "dim": self.dim, "basis": list(self.basis), "products": prods}


def unit_vector(n, i) -> Vec:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


# --- expansion ------------------------------------------------------------------

PolyVec = List[Poly]


def vec_mul(B: FiniteAlgebra, a: PolyVec, b: PolyVec) -> PolyVec:
    ring = a[0].ring
    out = [ring.zero] * B.dim
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            xy = x * y
            for k, c in enumerate(B.table[i][j]):
                if c:
                    out[k] = out[k] + xy.scale(c)
    return out


def expand(f: Poly, B: FiniteAlgebra, var_images: Mapping[str, PolyVec], ring: Ring) -> PolyVec:
    """Coordinates of f after x -> sum_i x_i e_i.

    Basis names of B occurring in f are read as algebra constants; every
    other variable of f needs an entry in ``var_images``.
    """
    n = B.dim
    consts = {name: unit_vector(n, k) for k, name in enumerate(B.basis) if k}
    slots = []
    for v in f.ring.variables:
        if v in consts:
            slots.append(("const", consts[v]))
        elif v in var_images:
            slots.append(("var", var_images[v]))
        else:
            slots.append(None)
    cache: Dict[Tuple[int, int], PolyVec] = {}
    one = [ring.one] + [ring.zero] * (n - 1)

    def power(i, k):
        key = (i, k)
        if key not in cache:
            kind, val = slots[i]
            if kind == "const":
                base = [ring.const(c) for c in val]
            else:
                base = list(val)
            acc = one
            for _ in range(k):
                acc = vec_mul(B, acc, base)
            cache[key] = acc
        return cache[key]

    out = [ring.zero] * n
    for m, c in f.terms.items():
        term = [ring.const(c)] + [ring.zero] * (n - 1)
        for i, k in enumerate(m):
            if k:
                if slots[i] is None:
                    raise ValueError(f"no expansion for variable {f.ring.variables[i]}")
                term = vec_mul(B, term, power(i, k))
        out = [a + b for a, b in zip(out, term)]
    return out


def restricted_names(variables: Sequence[str], B: FiniteAlgebra, taken=()) -> Dict[str, List[str]]:
    used = set(taken)
    out = {}
    for v in variables:
        names = []
        for i in range(B.dim):
            w = fresh_name(f"{v}_{i}", used)
            used.add(w)
            names.append(w)
        out[v] = names
    return out


def base_change(X: AffineChart, B: FiniteAlgebra, name=None) -> AffineChart:
    """X x Spec B: adjoin the basis names of B with its relations."""
    for e in B.extra_basis:
        if e in X.variables:
            raise ValueError(f"basis name {e} clashes with a coordinate of {X.name}")
    ring = Ring(tuple(X.variables) + tuple(B.extra_basis), GREVLEX)
    mod = X.modulus.extend(ring) + B.relations(ring)
    return AffineChart(name or f"{X.name}_{B.name}", QuotientRing(ring, mod))


@dataclass
class Restriction:
    original: AffineChart
    algebra: FiniteAlgebra
    restricted: AffineChart
    names: Dict[str, List[str]]
    counit: SchemeMap  # restricted x B -> original
    equations: List[Poly] = field(default_factory=list)

    def point_to_B(self, point: Mapping[str, Fraction]) -> Dict[str, Vec]:
        return {v: tuple(Fraction(point[w]) for w in ws) for v, ws in self.names.items()}

    def to_json(self):
        return {
            "algebra": self.algebra.to_json(),
            "variables": list(self.restricted.variables),
            "ideal": [str(g) for g in self.restricted.modulus.gb()],
        }


def restrict_scheme(X: AffineChart, B: FiniteAlgebra, name=None) -> Restriction:
    """Weil restriction of X (a chart whose ring contains the basis names of B).

    The coordinates of X other than the basis names are the B-variables.
    """
    basis = set(B.extra_basis)
    xvars = [v for v in X.variables if v not in basis]
    names = restricted_names(xvars, B)
    ring = Ring([w for v in xvars for w in names[v]], GREVLEX)
    images = {v: [ring.var(w) for w in names[v]] for v in xvars}
    eqs = []
    for g in X.modulus.gens:
        for c in expand(g, B, images, ring):
            if c and c not in eqs:
                eqs.append(c)
    R = AffineChart(name or f"R_{B.name}({X.name})", QuotientRing(ring, Ideal(ring, eqs)))
    RB = base_change(R, B)
    cu = {}
    for v in xvars:
        p = RB.ring.zero
        for k, w in enumerate(names[v]):
            p = p + RB.ring.var(w) * (RB.ring.one if k == 0 else RB.ring.var(B.basis[k]))
        cu[v] = p
    for e in B.extra_basis:
        if e in X.variables:
            cu[e] = RB.ring.var(e)
    counit = SchemeMap(RB, X, cu, check=False)
    return Restriction(X, B, R, names, counit, eqs)


def restrict_affine(variables: Sequence[str], equations: Sequence[str], B: FiniteAlgebra, name="X") -> Restriction:
    """Convenience: X = V(equations) in affine space over B."""
    ring = Ring(tuple(variables) + tuple(B.extra_basis), GREVLEX)
    X = AffineChart(name, QuotientRing(ring, Ideal.parse(ring, equations) + B.relations(ring)))
    return restrict_scheme(X, B)


def restrict_map(g: SchemeMap, B: FiniteAlgebra, source: Restriction, target: Restriction) -> SchemeMap:
    """Coordinatewise expansion of a B-morphism between charts over B."""
    ring = source.restricted.ring
    images_in = {v: [ring.var(w) for w in ws] for v, ws in source.names.items()}
    out = {}
    for v, ws in target.names.items():
        coords = expand(g.images[v], B, images_in, ring)
        for w, c in zip(ws, coords):
            out[w] = c
    return SchemeMap(source.restricted, target.restricted, out, check=False)


# --- rational points -------------------------------------------------------------

class EnumerationBudgetExceeded(RuntimeError):
    pass


def rational_roots(p: Poly) -> List[Fraction]:
    """Rational roots of a univariate polynomial (rational root theorem)."""
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    if p.is_constant():
        return []
    i = next(k for k, _ in enumerate(p.ring.variables) if any(m[k] for m in p.terms))
    coeffs = {m[i]: c for m, c in p.terms.items()}
    low = min(coeffs)
    roots = [Fraction(0)] if low > 0 else []
    coeffs = {d - low: c for d, c in coeffs.items()}
    deg = max(coeffs)
    if deg == 0:
        return roots
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = {d: int(c * den) for d, c in coeffs.items()}
    a0, an = abs(ints[0]), abs(ints[deg])
    for num in _divisors(a0):
        for q in _divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, q)
                if r not in roots and sum(c * r**d for d, c in ints.items()) == 0:
                    roots.append(r)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n, limit=10**6):
    if n > limit**2:
        raise EnumerationBudgetExceeded(f"coefficient {n} too large to factor by trial division")
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            if k * k != n:
                out.append(n // k)
        k += 1
    return sorted(out)


def rational_points(I: Ideal) -> Optional[List[Dict[str, Fraction]]]:
    """All QQ-points of V(I), or None when V(I) is not zero-dimensional."""
    ring = I.ring.with_order(LEX)
    return _points(ring, [g.to_ring(ring) for g in I.gens], {})


def _points(ring, gens, fixed):
    gb = groebner(gens) if gens else []
    if any(g.is_constant() and g for g in gb):
        return []
    free = [v for v in ring.variables if v not in fixed]
    if not free:
        return [dict(fixed)]
    last = free[-1]
    li = ring.index(last)
    uni = [g for g in gb if all(m[k] == 0 for m in g.terms for k in range(ring.nvars) if k != li)]
    if not uni:
        return None
    out = []
    for r in rational_roots(uni[0]):
        sub = {last: ring.const(r)}
        new = [g.substitute(sub, ring) for g in gb]
        pts = _points(ring, [g for g in new if g], {**fixed, last: r})
        if pts is None:
            return None
        out.extend(pts)
    return out


# --- adjunction on point functors -----------------------------------------------

@dataclass
class AdjunctionReport:
    holds: Optional[bool]  # None: inconclusive
    restricted_points: list = field(default_factory=list)
    B_points: list = field(default_factory=list)
    note: str = ""

    def __bool__(self):
        return bool(self.holds)

    def to_json(self):
        def val(v):
            return [val(c) for c in v] if isinstance(v, (tuple, list)) else str(v)

        def pt(p):
            return {k: val(v) for k, v in sorted(p.items())} if isinstance(p, dict) else val(p)

        return {
            "holds": self.holds,
            "restricted_points": sorted((pt(p) for p in self.restricted_points), key=repr),
            "B_points": sorted((pt(p) for p in self.B_points), key=repr),
            "note": self.note,
        }


def eval_over_B(f: Poly, B: FiniteAlgebra, point: Mapping[str, Vec]) -> Vec:
    """Evaluate f at B-valued coordinates by table arithmetic."""
    n = B.dim
    consts = {name: unit_vector(n, k) for k, name in enumerate(B.basis) if k}
    total = [Fraction(0)] * n
    for m, c in f.terms.items():
        term = tuple(Fraction(c) if k == 0 else Fraction(0) for k in range(n))
        for v, e in zip(f.ring.variables, m):
            val = consts[v] if v in consts else point[v]
            for _ in range(e):
                term = B.mul(term, val)
        total = [a + b for a, b in zip(total, term)]
    return tuple(total)


def adjunction_check(R: Restriction, T="point", box=2, budget=200000) -> AdjunctionReport:
    """Compare Hom(T, R(X)) with Hom_B(T x B, X) for T a point or empty.

    The restricted side is solved exactly; the B side is searched in the box
    of B-vectors with integer and half-integer coordinates of size <= ``box``,
    evaluated through the multiplication table only. Every restricted point
    must be a B-point under the counit and every B-point found in the box
    must come from a restricted point.
    """
    if T == "empty":
        return AdjunctionReport(True, note="both sides are the singleton of the empty map")
    if T != "point":
        raise ValueError("only T = Spec QQ and T = empty are supported")
    B = R.algebra
    pts = rational_points(R.restricted.modulus)
    if pts is None:
        return AdjunctionReport(None, note="restriction is not zero-dimensional")
    xvars = list(R.names)
    gens = [g for g in R.original.modulus.gens]
    rest_B = []
    for p in pts:
        bp = R.point_to_B(p)
        if any(any(eval_over_B(g, B, bp)) for g in gens):
            return AdjunctionReport(False, pts, note="restricted point is not a B-point under the counit")
        rest_B.append(tuple(bp[v] for v in xvars))
    grid = sorted({Fraction(a, 2) for a in range(-2 * box, 2 * box + 1)})
    total = len(grid) ** (B.dim * len(xvars))
    if total > budget:
        return AdjunctionReport(None, pts, note=f"B-point search needs {total} candidates")
    found = []
    for flat in itertools.product(grid, repeat=B.dim * len(xvars)):
        bp = {v: tuple(flat[k * B.dim:(k + 1) * B.dim]) for k, v in enumerate(xvars)}
        if all(not any(eval_over_B(g, B, bp)) for g in gens):
            found.append(tuple(bp[v] for v in xvars))
    in_box = {p for p in rest_B if all(c in grid for vec in p for c in vec)}
    ok = set(found) == in_box and len(set(rest_B)) == len(rest_B)
    return AdjunctionReport(ok, pts, found)
