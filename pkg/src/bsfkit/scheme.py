"""Affine charts, morphisms between them, fibre products and images."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from .algebra import GREVLEX, Poly, Ring, TermOrder, normal_form, groebner
from .ideals import (
    Ideal,
    QuotientRing,
    RingMap,
    fresh_name,
    ideal_equal,
    member,
    ring_map_kernel,
)


class SchemeError(ValueError):
    pass


class AffineChart:
    """Spec of QQ[vars]/modulus, with a name for diagnostics and renaming."""

    def __init__(self, name: str, coords: QuotientRing):
        self.name = name
        self.coords = coords

    @classmethod
    def affine(cls, name, variables, order=GREVLEX):
        return cls(name, QuotientRing.free(Ring(variables, order)))

    @classmethod
    def presented(cls, name, variables, relations: Sequence[str] = (), order=GREVLEX):
        ring = Ring(variables, order)
        return cls(name, QuotientRing(ring, Ideal.parse(ring, relations)))

    @property
    def ring(self) -> Ring:
        return self.coords.ring

    @property
    def modulus(self) -> Ideal:
        return self.coords.modulus

    @property
    def variables(self):
        return self.ring.variables

    def is_empty(self):
        return self.modulus.is_unit()

    def __call__(self, text) -> Poly:
        return self.ring(text)

    def ideal(self, gens) -> Ideal:
        gens = [self.ring(g) for g in gens]
        return self.modulus + Ideal(self.ring, gens)

    def same_presentation(self, other: "AffineChart") -> bool:
        return self.ring == other.ring and ideal_equal(self.modulus, other.modulus)

    def identity(self) -> "SchemeMap":
        return SchemeMap(self, self, {v: self.ring.var(v) for v in self.variables})

    def __repr__(self):
        return f"AffineChart({self.name!r}, {self.coords})"

    def to_json(self):
        return {
            "name": self.name,
            "variables": list(self.variables),
            "ideal": [str(g) for g in self.modulus.gb()],
        }


class SchemeMap:
    """Morphism source -> target given by the pullback of each target coordinate."""

    def __init__(self, source: AffineChart, target: AffineChart, images: Mapping[str, object], check=True):
        imgs = {}
        for v in target.variables:
            if v not in images:
                raise SchemeError(f"no image for target coordinate {v}")
            p = images[v]
            imgs[v] = source.ring(p) if not isinstance(p, Poly) else p.to_ring(source.ring)
        extra = set(images) - set(target.variables)
        if extra:
            raise SchemeError(f"images for unknown coordinates {sorted(extra)}")
        self.source = source
        self.target = target
        self.images = imgs
        if check:
            for h in target.modulus.gens:
                if not member(self.pullback(h), source.modulus):
                    raise SchemeError(
                        f"map does not respect the target relation {h}"
                    )

    def pullback(self, f: Poly) -> Poly:
        return f.substitute(self.images, self.source.ring)

    def pull_ideal(self, I: Ideal) -> Ideal:
        """Preimage ideal in the source (source modulus included)."""
        return self.source.modulus + Ideal(
            self.source.ring, [self.pullback(g) for g in I.gens]
        )

    def ring_map(self) -> RingMap:
        return RingMap(
            self.target.ring,
            self.source.coords,
            [self.images[v] for v in self.target.variables],
        )

    def compose(self, after: "SchemeMap") -> "SchemeMap":
        """``after`` o ``self``."""
        return SchemeMap(
            self.source,
            after.target,
            {v: self.pullback(after.images[v]) for v in after.target.variables},
            check=False,
        )

    def __repr__(self):
        body = ", ".join(f"{v} -> {p}" for v, p in self.images.items())
        return f"SchemeMap({self.source.name} -> {self.target.name}: {body})"

    def to_json(self):
        return {v: str(self.source.coords.reduce(p)) for v, p in self.images.items()}


class ClosedSub:
    """Closed subscheme of an affine chart; the ideal always contains the modulus."""

    def __init__(self, ambient: AffineChart, ideal: Ideal):
        if ideal.ring != ambient.ring:
            raise SchemeError("ideal lives in a different ring")
        self.ambient = ambient
        self.ideal = ambient.modulus + ideal

    def is_empty(self):
        return self.ideal.is_unit()

    def is_everything(self):
        return ideal_equal(self.ideal, self.ambient.modulus)

    def as_chart(self, name=None) -> AffineChart:
        return AffineChart(name or f"{self.ambient.name}_sub", QuotientRing(self.ambient.ring, self.ideal))

    def inclusion(self, name=None) -> SchemeMap:
        sub = self.as_chart(name)
        return SchemeMap(sub, self.ambient, {v: sub.ring.var(v) for v in self.ambient.variables}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ClosedSub):
            return NotImplemented
        return self.ambient.ring == other.ambient.ring and ideal_equal(self.ideal, other.ideal)

    def __repr__(self):
        return f"ClosedSub(V{self.ideal} in {self.ambient.name})"

    def to_json(self):
        return {"ambient": self.ambient.name, "ideal": [str(g) for g in self.ideal.gb()]}


@dataclass
class Product:
    chart: AffineChart
    first: SchemeMap
    second: SchemeMap
    renaming: Dict[str, str] = field(default_factory=dict)


def product(X: AffineChart, Y: AffineChart, over: Optional[tuple] = None, name=None) -> Product:
    """X x Y, or X x_S Y when ``over = (f, g)`` with f: X -> S, g: Y -> S.

    Clashing coordinates of Y get a deterministic suffix derived from Y's name.
    """
    taken = set(X.variables)
    renaming = {}
    for v in Y.variables:
        w = v
        if w in taken:
            w = fresh_name(f"{v}_{Y.name}", taken)
        renaming[v] = w
        taken.add(w)
    ring = Ring(tuple(X.variables) + tuple(renaming[v] for v in Y.variables), GREVLEX)
    ysub = {v: ring.var(renaming[v]) for v in Y.variables}
    gens = [g.to_ring(ring) for g in X.modulus.gens]
    gens += [g.substitute(ysub, ring) for g in Y.modulus.gens]
    if over is not None:
        f, g = over
        if f.source is not X and not f.source.same_presentation(X):
            raise SchemeError("first structure map must start at X")
        if g.source is not Y and not g.source.same_presentation(Y):
            raise SchemeError("second structure map must start at Y")
        if f.target.ring != g.target.ring:
            raise SchemeError("structure maps have different targets")
        for s in f.target.variables:
            gens.append(f.images[s].to_ring(ring) - g.images[s].substitute(ysub, ring))
    chart = AffineChart(name or f"{X.name}x{Y.name}", QuotientRing(ring, Ideal(ring, gens)))
    p1 = SchemeMap(chart, X, {v: ring.var(v) for v in X.variables}, check=False)
    p2 = SchemeMap(chart, Y, {v: ring.var(renaming[v]) for v in Y.variables}, check=False)
    return Product(chart, p1, p2, renaming)


def schematic_image(f: SchemeMap) -> ClosedSub:
    """Closed subscheme of the target cut out by the kernel of the ring map."""
    K = ring_map_kernel(f.ring_map())
    image = ClosedSub(f.target, K)
    for g in image.ideal.gens:
        if not member(f.pullback(g), f.source.modulus):
            raise AssertionError("map does not factor through its schematic image")
    return image


def adjoin_free(X: AffineChart, names: Sequence[str], tag="bc") -> tuple:
    """X x A^k with fresh coordinates; returns (chart, list of the new names)."""
    taken = set(X.variables)
    new = []
    for v in names:
        w = fresh_name(v, taken)
        taken.add(w)
        new.append(w)
    ring = Ring(tuple(X.variables) + tuple(new), GREVLEX)
    chart = AffineChart(f"{X.name}_{tag}", QuotientRing(ring, X.modulus.extend(ring)))
    return chart, new


def flat_base_change_image_check(f: SchemeMap, free_vars: Sequence[str]) -> bool:
    """Image of f x id over a free extension equals the extension of the image."""
    src, new_s = adjoin_free(f.source, free_vars)
    tgt_names = []
    for v in new_s:
        if v in f.target.variables:
            raise SchemeError(f"fresh coordinate {v} clashes with the target")
        tgt_names.append(v)
    ring = Ring(tuple(f.target.variables) + tuple(tgt_names), GREVLEX)
    tgt = AffineChart(f"{f.target.name}_bc", QuotientRing(ring, f.target.modulus.extend(ring)))
    images = {v: f.images[v].to_ring(src.ring) for v in f.target.variables}
    images.update({v: src.ring.var(v) for v in tgt_names})
    fb = SchemeMap(src, tgt, images, check=False)
    lhs = schematic_image(fb).ideal
    rhs = tgt.modulus + schematic_image(f).ideal.extend(ring)
    return ideal_equal(lhs, rhs)


@dataclass
class FibreConstancy:
    holds: bool
    witness: Optional[SchemeMap] = None
    status: str = ""
    note: str = ""

    def __bool__(self):
        return self.holds


def descend(f_images: Mapping[str, Poly], p: SchemeMap, W: AffineChart):
    """Try to write each f#(w) as g(p#(y)) modulo the source ideal.

    Returns a map Y -> W or None. Uses a block order with the source
    coordinates first: the normal form is free of them iff such g exists.
    """
    X, Y = p.source, p.target
    taken = set(X.variables)
    ren = {}
    for v in Y.variables:
        w = fresh_name(v, taken) if v in taken else v
        taken.add(w)
        ren[v] = w
    big = Ring(tuple(X.variables) + tuple(ren[v] for v in Y.variables), TermOrder("block", len(X.variables)))
    gens = [g.to_ring(big) for g in X.modulus.gens]
    for v in Y.variables:
        gens.append(big.var(ren[v]) - p.images[v].to_ring(big))
    gb = groebner(gens)
    nx = len(X.variables)
    back = {ren[v]: Y.ring.var(v) for v in Y.variables}
    out = {}
    for w, img in f_images.items():
        r = normal_form(img.to_ring(big), gb)
        if any(any(m[:nx]) for m in r.terms):
            return None
        out[w] = r.substitute(back, Y.ring)
    try:
        return SchemeMap(Y, W, out)
    except SchemeError:
        return None


def constant_along_fibres(f: SchemeMap, p: SchemeMap, want_witness=True) -> FibreConstancy:
    """Equaliser test on X x_Y X, plus the descended map Y -> W when it exists."""
    if f.source.ring != p.source.ring:
        raise SchemeError("f and p must share their source")
    X = p.source
    prod = product(X, X, over=(p, p), name=f"{X.name}x{X.name}")
    A = prod.chart
    for w in f.target.variables:
        a = prod.first.pullback(f.images[w])
        b = prod.second.pullback(f.images[w])
        if not member(a - b, A.modulus):
            return FibreConstancy(False, status="not constant")
    if not want_witness:
        return FibreConstancy(True, status="constant")
    g = descend(f.images, p, f.target)
    note = "descent is presentation-level; fpqc-ness of p is not certified"
    if g is None:
        return FibreConstancy(True, None, "not descendable in presentation", note)
    return FibreConstancy(True, g, "descended", note)
