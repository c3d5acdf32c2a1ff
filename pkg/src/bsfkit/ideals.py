"""Ideals of QQ[x1..xn] and the algorithms built on Groebner bases.

Ideals of a quotient ring A = QQ[x]/M are always carried by their full
preimage upstairs (so they contain M).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

from .algebra import (
    GREVLEX,
    Poly,
    Ring,
    RingMismatch,
    TermOrder,
    groebner,
    mono_div,
    mono_lcm,
    normal_form,
)


class ZeroElement(ValueError):
    """The element is zero in the quotient ring (not merely a zerodivisor)."""


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def default_order_for(ring: Ring) -> TermOrder:
    return ring.order if ring.order.kind != "block" else GREVLEX


class Ideal:
    """Generators in a ring plus a lazily computed reduced Groebner basis.

    Concurrent callers of ``gb()`` may both compute it; the results agree
    because the reduced basis is unique, so whichever is stored wins.
    """

    def __init__(self, ring: Ring, gens: Iterable[Poly] = ()):
        gens = list(gens)
        for g in gens:
            if not isinstance(g, Poly):
                raise TypeError(f"ideal generators must be Poly, got {g!r}")
            if g.ring != ring:
                raise RingMismatch(f"generator {g} not in {ring}")
        self.ring = ring
        self.gens = tuple(g for g in gens if g)
        self._gb: Optional[List[Poly]] = None

    @classmethod
    def parse(cls, ring: Ring, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    @classmethod
    def unit(cls, ring):
        return cls(ring, [ring.one])

    def gb(self) -> List[Poly]:
        if self._gb is None:
            self._gb = groebner(self.gens)
        return self._gb

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self.gb())

    def __contains__(self, f):
        return member(f, self)

    def contains(self, other: "Ideal") -> bool:
        _same(self, other)
        return all(member(g, self) for g in other.gens)

    def is_unit(self):
        gb = self.gb()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self):
        return not self.gens

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    def __hash__(self):
        return hash((self.ring, tuple(self.gb())))

    def __add__(self, other):
        if isinstance(other, Poly):
            other = Ideal(self.ring, [other])
        _same(self, other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        _same(self, other)
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def extend(self, ring: Ring) -> "Ideal":
        """Same generators read in ``ring`` (by variable name)."""
        return Ideal(ring, [g.to_ring(ring) for g in self.gens])

    def map(self, images: Dict[str, Poly], ring: Ring) -> "Ideal":
        return Ideal(ring, [g.substitute(images, ring) for g in self.gens])

    def __repr__(self):
        return f"Ideal<{', '.join(str(g) for g in self.gens)}>"

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gb()) + ")"


def _same(I, J):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


@dataclass(frozen=True, eq=False)
class QuotientRing:
    ring: Ring
    modulus: Ideal

    def __post_init__(self):
        if self.modulus.ring != self.ring:
            raise RingMismatch("modulus lives in a different ring")

    @classmethod
    def free(cls, ring: Ring):
        return cls(ring, Ideal(ring))

    def reduce(self, f: Poly) -> Poly:
        return self.modulus.reduce(f)

    def equal(self, f, g) -> bool:
        return self.reduce(f - g).is_zero()

    def is_zero_ring(self):
        return self.modulus.is_unit()

    def ideal(self, gens: Iterable[Poly]) -> Ideal:
        """Preimage upstairs of the ideal generated by ``gens``."""
        return self.modulus + Ideal(self.ring, gens)

    def __str__(self):
        if self.modulus.is_zero():
            return f"QQ[{','.join(self.ring.variables)}]"
        return f"QQ[{','.join(self.ring.variables)}]/{self.modulus}"


# --- basic verbs ------------------------------------------------------------

def member(f: Poly, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if f.is_zero():
        return True
    return normal_form(f, I.gb()).is_zero()


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same(I, J)
    return I.gb() == J.gb()


def eliminate(I: Ideal, keep: Sequence[str]) -> Ideal:
    """I intersected with QQ[keep], presented in the smaller ring."""
    keep_set = set(keep)
    for v in keep_set:
        I.ring.index(v)
    kept = [v for v in I.ring.variables if v in keep_set]
    dropped = [v for v in I.ring.variables if v not in keep_set]
    small = Ring(kept, default_order_for(I.ring))
    if not dropped:
        return Ideal(small, [g.to_ring(small) for g in I.gens])
    big = Ring(dropped + kept, TermOrder("block", len(dropped)))
    gb = groebner([g.to_ring(big) for g in I.gens])
    n = len(dropped)
    out = [g for g in gb if all(not any(m[:n]) for m in g.terms)]
    return Ideal(small, [g.to_ring(small) for g in out])


def intersect(*ideals: Ideal) -> Ideal:
    """Intersection (schematic union of the closed subschemes)."""
    if not ideals:
        raise ValueError("intersect needs at least one ideal")
    acc = ideals[0]
    for J in ideals[1:]:
        acc = _intersect2(acc, J)
    return acc


def _intersect2(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    t = fresh_name("t", ring.variables)
    big = Ring((t,) + ring.variables, TermOrder("block", 1))
    tv = big.var(t)
    gens = [tv * g.to_ring(big) for g in I.gens]
    gens += [(big.one - tv) * g.to_ring(big) for g in J.gens]
    res = eliminate(Ideal(big, gens), ring.variables)
    return Ideal(ring, [g.to_ring(ring) for g in res.gens])


def quotient(I: Ideal, f: Poly) -> Ideal:
    """The colon ideal (I : f)."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    if f.is_constant():
        return Ideal(I.ring, I.gb())
    inter = _intersect2(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [g.exact_div(f) for g in inter.gb()])


def saturate(I: Ideal, f: Poly) -> Ideal:
    """(I : f^oo) via one extra variable t with t*f - 1, eliminating t."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring} vs {I.ring}")
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    ring = I.ring
    if f.is_constant():
        return Ideal(ring, I.gb())
    t = fresh_name("t", ring.variables)
    big = Ring((t,) + ring.variables, TermOrder("block", 1))
    gens = [g.to_ring(big) for g in I.gens] + [big.var(t) * f.to_ring(big) - big.one]
    res = eliminate(Ideal(big, gens), ring.variables)
    return Ideal(ring, [g.to_ring(ring) for g in res.gens])


def saturate_iterated(I: Ideal, f: Poly, max_rounds=64) -> Ideal:
    """Saturation by repeated colons; an independent cross-check."""
    cur = Ideal(I.ring, I.gb())
    for _ in range(max_rounds):
        nxt = quotient(cur, f)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt
    raise RuntimeError("colon chain did not stabilise")


def ideal_power(I: Ideal, n: int) -> Ideal:
    acc = Ideal.unit(I.ring)
    for _ in range(n):
        acc = acc * I
    return acc


# --- ring maps ----------------------------------------------------------------

class RingMap:
    """phi: QQ[source] -> target, given by the image of each source variable."""

    def __init__(self, source: Ring, target: QuotientRing, images: Sequence[Poly]):
        images = list(images)
        if len(images) != source.nvars:
            raise ValueError(
                f"map needs {source.nvars} images, got {len(images)}"
            )
        for p in images:
            if not isinstance(p, Poly) or p.ring != target.ring:
                raise ValueError(f"malformed image {p!r}")
        self.source = source
        self.target = target
        self.images = tuple(images)

    def image_dict(self):
        return dict(zip(self.source.variables, self.images))

    def __call__(self, f: Poly) -> Poly:
        return f.substitute(self.image_dict(), self.target.ring)


def ring_map_kernel(phi: RingMap) -> Ideal:
    """Kernel via the graph ideal: eliminate the target variables."""
    tgt = phi.target.ring
    taken = set(tgt.variables)
    renamed = []
    for v in phi.source.variables:
        w = fresh_name(v, taken) if v in tgt.variables else v
        taken.add(w)
        renamed.append(w)
    joint = Ring(tuple(tgt.variables) + tuple(renamed), GREVLEX)
    gens = [g.to_ring(joint) for g in phi.target.modulus.gens]
    for w, img in zip(renamed, phi.images):
        gens.append(joint.var(w) - img.to_ring(joint))
    res = eliminate(Ideal(joint, gens), renamed)
    back = {w: phi.source.var(v) for w, v in zip(renamed, phi.source.variables)}
    return Ideal(
        phi.source,
        [g.substitute(back, phi.source) for g in res.gens],
    )


# --- coefficient ideals ------------------------------------------------------

def base_ring_for(ring: Ring, fiber_vars: Sequence[str]) -> Ring:
    fiber = set(fiber_vars)
    for v in fiber:
        ring.index(v)
    return Ring([v for v in ring.variables if v not in fiber], default_order_for(ring))


def coefficient_ideal(I: Ideal, fiber_vars: Sequence[str]) -> Ideal:
    """Base ideal generated by the coefficients of I's basis w.r.t. the fiber monomials.

    This is the smallest base ideal b with I contained in b*QQ[base][fiber],
    which holds because the fiber monomials form a free basis.
    """
    base = base_ring_for(I.ring, fiber_vars)
    coeffs = []
    for g in I.gb():
        coeffs.extend(g.coefficients_in(list(fiber_vars), base).values())
    return Ideal(base, coeffs)


# --- regularity and principality ------------------------------------------------

def is_regular(f: Poly, A: QuotientRing) -> bool:
    """True iff f is a nonzerodivisor of A; raises ZeroElement if f = 0 in A."""
    if member(f, A.modulus):
        raise ZeroElement(f"{f} is zero in {A}")
    return ideal_equal(quotient(A.modulus, f), Ideal(A.ring, A.modulus.gb()))


@dataclass(frozen=True)
class CartierStatus:
    kind: str  # cartier | locally_principal | principal_not_cartier | not_cartier | full | unknown
    generator: Optional[Poly] = None

    @property
    def is_cartier(self):
        return self.kind in ("cartier", "full", "locally_principal")

    def to_json(self):
        return {
            "kind": self.kind,
            "generator": None if self.generator is None else str(self.generator),
        }


def is_principal_cartier(I: Ideal, A: QuotientRing, hints: Sequence[Poly] = ()) -> CartierStatus:
    """Look for a single generator of I in A among I's basis (and ``hints``).

    ``full`` means I is the unit ideal (empty divisor). ``unknown`` means no
    candidate generates I alone; this test is sound but not complete.
    """
    I = A.modulus + I
    if I.is_unit():
        return CartierStatus("full", A.ring.one)
    if ideal_equal(I, A.modulus):
        return CartierStatus("principal_not_cartier", A.ring.zero)
    seen = set()
    cands = []
    for g in list(hints) + list(I.gens) + list(I.gb()):
        r = A.reduce(g)
        if r and r not in seen:
            seen.add(r)
            cands.append(r)
    cands.sort(key=lambda p: (len(p.terms), p.total_degree()))
    for g in cands:
        if ideal_equal(A.modulus + Ideal(A.ring, [g]), I):
            g = g.monic()
            if is_regular(g, A):
                return CartierStatus("cartier", g)
            return CartierStatus("principal_not_cartier", g)
    return CartierStatus("unknown")


def is_effective_cartier(I: Ideal, A: QuotientRing, tries=8) -> CartierStatus:
    """Decide whether I defines an effective Cartier divisor of Spec A.

    I is invertible iff I * (rA : I) = rA for a nonzerodivisor r in I. Such
    an r is looked for among the generators and then among seeded random
    combinations of them (prime avoidance makes a generic combination
    regular whenever I contains a nonzerodivisor at all).
    """
    st = is_principal_cartier(I, A)
    if st.kind in ("cartier", "full"):
        return st
    I = A.modulus + I
    if st.kind == "principal_not_cartier":
        return CartierStatus("not_cartier", st.generator)
    gens = [A.reduce(g) for g in I.gens]
    gens = [g for g in gens if g]
    rng = random.Random(0)
    cands = list(gens)
    for _ in range(tries):
        c = A.ring.zero
        for g in gens:
            c = c + g.scale(rng.randint(-9, 9) or 1)
        cands.append(c)
    for r in cands:
        if not r or member(r, A.modulus) or not is_regular(r, A):
            continue
        rA = A.modulus + Ideal(A.ring, [r])
        J = intersect(*[quotient(rA, g) for g in gens])
        if ideal_equal(A.modulus + I * J, rA):
            return CartierStatus("locally_principal", None)
        return CartierStatus("not_cartier", None)
    # no candidate was regular: decide whether I has any nonzerodivisor at all
    ann = intersect(*[quotient(A.modulus, g) for g in gens]) if gens else Ideal.unit(A.ring)
    if not ideal_equal(ann, A.modulus):
        return CartierStatus("not_cartier", None)
    return CartierStatus("unknown", None)


# --- lifting with cofactors ----------------------------------------------------

def lift(f: Poly, gens: Sequence[Poly]) -> Optional[List[Poly]]:
    """Cofactors c with f == sum(c_i * gens_i), or None if f is not in the ideal."""
    ring = f.ring
    gens = list(gens)
    k = len(gens)
    zero = ring.zero
    basis = []
    for i, g in enumerate(gens):
        if g:
            cof = [zero] * k
            cof[i] = ring.one
            basis.append((g, cof))

    def reduce(p, pc):
        # invariant: rem + p_terms - sum(pc_i * gens_i) is unchanged
        p_terms = p
        rem = zero
        while p_terms:
            m = p_terms.lm()
            c = p_terms.lc()
            for g, gc in basis:
                glm = g.lm()
                if all(a <= b for a, b in zip(glm, m)):
                    q = mono_div(m, glm)
                    coef = c / g.lc()
                    p_terms = p_terms - g.mul_term(q, coef)
                    pc = [a - b.mul_term(q, coef) for a, b in zip(pc, gc)]
                    break
            else:
                lead = Poly(ring, {m: c})
                rem = rem + lead
                p_terms = p_terms - lead
        return rem, pc

    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        (a, ac), (b, bc) = basis[i], basis[j]
        L = mono_lcm(a.lm(), b.lm())
        qa, qb = mono_div(L, a.lm()), mono_div(L, b.lm())
        s = a.mul_term(qa, 1 / a.lc()) - b.mul_term(qb, 1 / b.lc())
        sc = [x.mul_term(qa, 1 / a.lc()) - y.mul_term(qb, 1 / b.lc()) for x, y in zip(ac, bc)]
        r, rc = reduce(s, sc)
        if r:
            n = len(basis)
            basis.append((r, rc))
            pairs.extend((n, t) for t in range(n))
    r, rc = reduce(f, [zero] * k)
    if r:
        return None
    return [-c for c in rc]
