"""Blow ups: along a locally principal center (by saturation) and Rees charts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from .algebra import GREVLEX, Poly, Ring
from .ideals import (
    Ideal,
    QuotientRing,
    eliminate,
    fresh_name,
    ideal_equal,
    is_regular,
    member,
    saturate,
)
from .scheme import AffineChart, ClosedSub, SchemeMap

log = logging.getLogger(__name__)


class ProductFormViolated(ValueError):
    """The shaved ideal of a product is not extended from the first factor."""


@dataclass
class LocallyPrincipalBlowup:
    ambient: AffineChart
    center_generator: Poly
    result: ClosedSub
    shaved_ideal: Ideal
    warning: str = ""

    @property
    def empty(self):
        return self.result.is_empty()

    def to_json(self):
        return {
            "center_generator": str(self.center_generator),
            "result": [str(g) for g in self.result.ideal.gb()],
            "empty": self.empty,
            "warning": self.warning,
        }


def blowup_locally_principal(X: AffineChart, f) -> LocallyPrincipalBlowup:
    """Blow up of X along V(f): the closed subscheme cut out by (modulus : f^oo)."""
    f = X.ring(f) if not isinstance(f, Poly) else f
    if member(f, X.modulus):
        unit = Ideal.unit(X.ring)
        msg = "center is the whole ambient; blow up is empty"
        log.warning(msg)
        return LocallyPrincipalBlowup(X, f, ClosedSub(X, unit), unit, msg)
    shaved = saturate(X.modulus, f)
    result = ClosedSub(X, shaved)
    if not result.is_empty():
        # f becomes a nonzerodivisor on the result
        assert is_regular(f, QuotientRing(X.ring, result.ideal))
    return LocallyPrincipalBlowup(X, f, result, shaved)


def factors_through(h: SchemeMap, sub: ClosedSub) -> bool:
    """Whether h: T -> X factors through the closed subscheme ``sub`` of X."""
    return all(member(h.pullback(g), h.source.modulus) for g in sub.ideal.gens)


@dataclass
class ReesChart:
    index: int
    chart: AffineChart
    generator: Poly  # g_i read in the chart ring
    exceptional: Ideal  # <g_i> plus the chart ideal
    transitions: Dict[str, str]  # t_j -> "g_j/g_i"
    to_ambient: SchemeMap

    @property
    def empty(self):
        return self.chart.is_empty()


@dataclass
class ReesBlowup:
    ambient: AffineChart
    center: Ideal
    generators: List[Poly]
    t_names: List[str]
    charts: List[ReesChart] = field(default_factory=list)

    def nonempty_charts(self):
        return [c for c in self.charts if not c.empty]

    def to_json(self):
        return {
            "center": [str(g) for g in self.generators],
            "charts": [
                {
                    "index": c.index,
                    "variables": list(c.chart.variables),
                    "ideal": [str(g) for g in c.chart.modulus.gb()],
                    "exceptional": str(c.generator),
                    "transitions": c.transitions,
                    "empty": c.empty,
                }
                for c in self.charts
            ],
        }


def blowup_rees(X: AffineChart, I: Ideal, t_prefix="t") -> ReesBlowup:
    """Chartwise blow up of X along I, one chart per generator g_i.

    Chart i is QQ[X, t_j (j != i)] modulo (modulus + t_j*g_i - g_j)
    saturated by g_i; there the center becomes <g_i> with g_i regular.
    """
    if I.ring != X.ring:
        raise ValueError("center lives in a different ring")
    gens = []
    for g in I.gens:
        r = X.coords.reduce(g)
        if r and r not in gens:
            gens.append(r)
    if not gens:
        raise ValueError("blow up along the zero ideal is not defined")
    taken = set(X.variables)
    t_names = []
    for j in range(len(gens)):
        t = fresh_name(f"{t_prefix}{j}", taken)
        taken.add(t)
        t_names.append(t)
    rees = ReesBlowup(X, X.modulus + I, gens, t_names)
    for i, gi in enumerate(gens):
        tvars = [t_names[j] for j in range(len(gens)) if j != i]
        ring = Ring(tuple(X.variables) + tuple(tvars), GREVLEX)
        gi_r = gi.to_ring(ring)
        rels = [g.to_ring(ring) for g in X.modulus.gens]
        for j, gj in enumerate(gens):
            if j != i:
                rels.append(ring.var(t_names[j]) * gi_r - gj.to_ring(ring))
        chart_ideal = saturate(Ideal(ring, rels), gi_r)
        chart = AffineChart(f"{X.name}_rees{i}", QuotientRing(ring, chart_ideal))
        to_amb = SchemeMap(chart, X, {v: ring.var(v) for v in X.variables}, check=False)
        rees.charts.append(
            ReesChart(
                index=i,
                chart=chart,
                generator=gi_r,
                exceptional=chart_ideal + Ideal(ring, [gi_r]),
                transitions={t_names[j]: f"({gens[j]})/({gi})" for j in range(len(gens)) if j != i},
                to_ambient=to_amb,
            )
        )
    return rees


def rees_center_is_cartier(rees: ReesBlowup, rc: ReesChart) -> bool:
    """Pulled back center equals <g_i> and g_i is regular in the chart."""
    if rc.empty:
        return True
    pulled = rc.to_ambient.pull_ideal(Ideal(rees.ambient.ring, rees.generators))
    return ideal_equal(pulled, rc.exceptional) and is_regular(rc.generator, rc.chart.coords)


def rees_overlap_consistent(rees: ReesBlowup, i: int, j: int) -> bool:
    """Chart j's ideal pulls back into chart i localised at t_j, and conversely.

    On that overlap t^(j)_k = t^(i)_k / t^(i)_j and t^(j)_i = 1 / t^(i)_j.
    """
    return _overlap_into(rees, i, j) and _overlap_into(rees, j, i)


def _overlap_into(rees: ReesBlowup, i: int, j: int) -> bool:
    ci, cj = rees.charts[i], rees.charts[j]
    tj = rees.t_names[j]
    ring_i = ci.chart.ring
    s = fresh_name("s", ring_i.variables)
    loc = Ring(tuple(ring_i.variables) + (s,), GREVLEX)
    sv = loc.var(s)
    local_ideal = ci.chart.modulus.extend(loc) + Ideal(loc, [sv * loc.var(tj) - loc.one])
    images = {v: loc.var(v) for v in rees.ambient.variables}
    for k, tk in enumerate(rees.t_names):
        if k == j:
            continue
        images[tk] = sv if k == i else loc.var(tk) * sv
    for g in cj.chart.modulus.gens:
        if not member(g.substitute(images, loc), local_ideal):
            return False
    return True


@dataclass
class ProductFormResult:
    ambient: AffineChart
    base: AffineChart
    W: ClosedSub
    shaved: Ideal
    descended: Ideal

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "W": [str(g) for g in self.W.ideal.gb()],
            "shaved": [str(g) for g in self.shaved.gb()],
        }


def base_of(ambient: AffineChart, fiber_vars: Sequence[str], name=None) -> AffineChart:
    base_vars = [v for v in ambient.variables if v not in set(fiber_vars)]
    base_mod = eliminate(ambient.modulus, base_vars)
    return AffineChart(name or f"{ambient.name}_base", QuotientRing(base_mod.ring, base_mod))


def product_form_blowup(X: AffineChart, fiber_vars: Sequence[str], Z_gen) -> ProductFormResult:
    """Blow up of X = X0 x Y along a locally principal V(Z_gen), descended to X0.

    ``fiber_vars`` are the coordinates of the factor Y (free variables, or
    the basis coordinates of a finite free algebra whose relations sit in
    the modulus). Raises ProductFormViolated if the saturation is not
    extended from X0.
    """
    Z_gen = X.ring(Z_gen) if not isinstance(Z_gen, Poly) else Z_gen
    for v in fiber_vars:
        X.ring.index(v)
    base = base_of(X, fiber_vars)
    bl = blowup_locally_principal(X, Z_gen)
    shaved = bl.shaved_ideal
    if bl.empty:
        return ProductFormResult(X, base, ClosedSub(base, Ideal.unit(base.ring)), shaved, Ideal.unit(base.ring))
    descended = eliminate(shaved, base.variables)
    extended = X.modulus + Ideal(X.ring, [g.to_ring(X.ring) for g in descended.gens])
    if not ideal_equal(extended, shaved):
        raise ProductFormViolated(
            "product form violated: the blow up is not of the form W x Y "
            f"(saturation {shaved} vs extension {extended})"
        )
    W = ClosedSub(base, Ideal(base.ring, [g.to_ring(base.ring) for g in descended.gens]))
    return ProductFormResult(X, base, W, shaved, W.ideal)
