"""Exact sparse polynomials over QQ and the Buchberger engine.

Monomials are plain tuples of exponents; coefficients are ``Fraction``.
A ``Ring`` fixes the variable names and the term order, and every ``Poly``
carries the ring it lives in.
"""

from __future__ import annotations

import heapq
import os
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]

DEFAULT_STEP_LIMIT = 10**6
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class RingMismatch(ValueError):
    pass


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when Buchberger processes more pairs than allowed."""


class PolySyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at column {pos + 1}")
        self.message = message
        self.pos = pos


def step_limit():
    raw = os.environ.get("BSFKIT_GB_STEP_LIMIT")
    if not raw:
        return DEFAULT_STEP_LIMIT
    return int(float(raw))


# --- monomials -------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


# --- term orders -----------------------------------------------------------

class TermOrder:
    """A monomial order: ``lex``, ``grevlex`` or ``block`` with split index.

    ``block`` orders compare the first ``split`` variables by grevlex and
    break ties by grevlex on the rest, which makes them elimination orders.
    """

    __slots__ = ("kind", "split")

    def __init__(self, kind="grevlex", split=0):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown term order {kind!r}")
        if kind != "block":
            split = 0
        self.kind = kind
        self.split = int(split)

    def __eq__(self, other):
        return isinstance(other, TermOrder) and (self.kind, self.split) == (other.kind, other.split)

    def __hash__(self):
        return hash((self.kind, self.split))

    def __repr__(self):
        if self.kind == "block":
            return f"TermOrder('block', {self.split})"
        return f"TermOrder({self.kind!r})"

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind

    def keyfunc(self):
        if self.kind == "lex":
            return _lex_key
        if self.kind == "grevlex":
            return _grevlex_key
        split = self.split

        def block_key(m):
            return _grevlex_key(m[:split]) + _grevlex_key(m[split:])

        return lru_cache(maxsize=None)(block_key)


def _lex_key(m):
    return m


@lru_cache(maxsize=None)
def _grevlex_key(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


# --- rings -----------------------------------------------------------------

class Ring:
    """QQ[variables] with a fixed term order."""

    def __init__(self, variables: Sequence[str], order: TermOrder = GREVLEX):
        variables = tuple(variables)
        for v in variables:
            if not isinstance(v, str) or not _NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        if order.kind == "block" and not 0 <= order.split <= len(variables):
            raise ValueError("block split index out of range")
        self.variables = variables
        self.order = order
        self.nvars = len(variables)
        self.key = order.keyfunc()
        self._index = {v: i for i, v in enumerate(variables)}
        self.zero_mono = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.variables, self.order))

    def __repr__(self):
        return f"Ring({list(self.variables)!r}, {self.order!r})"

    def __str__(self):
        return f"QQ[{','.join(self.variables)}] {self.order}"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None

    def __contains__(self, name):
        return name in self._index

    def var(self, name) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> List["Poly"]:
        return [self.var(v) for v in self.variables]

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {self.zero_mono: c} if c else {})

    @property
    def zero(self):
        return Poly(self, {})

    @property
    def one(self):
        return self.const(1)

    def with_order(self, order: TermOrder) -> "Ring":
        return Ring(self.variables, order)

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def __call__(self, x) -> "Poly":
        if isinstance(x, Poly):
            return x.to_ring(self)
        if isinstance(x, str):
            return parse_poly(x, self)
        return self.const(x)


# --- polynomials -----------------------------------------------------------

def _coerce_coeff(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_lm", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Monomial, Fraction]):
        self.ring = ring
        self.terms = terms
        self._lm = None
        self._hash = None

    @classmethod
    def from_terms(cls, ring, items: Iterable[Tuple[Monomial, object]]):
        acc: Dict[Monomial, Fraction] = {}
        n = ring.nvars
        for m, c in items:
            m = tuple(m)
            if len(m) != n:
                raise ValueError("monomial length does not match ring")
            if any(e < 0 for e in m):
                raise ValueError("negative exponent")
            acc[m] = acc.get(m, 0) + _coerce_coeff(c)
        return cls(ring, {m: c for m, c in acc.items() if c})

    # structure
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_mono in self.terms)

    def constant_coeff(self) -> Fraction:
        return self.terms.get(self.ring.zero_mono, Fraction(0))

    def lm(self) -> Monomial:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def lc(self) -> Fraction:
        return self.terms[self.lm()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, name):
        i = self.ring.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def support(self):
        """Names of the variables that occur."""
        used = [False] * self.ring.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return {v for v, u in zip(self.ring.variables, used) if u}

    def monic(self):
        if not self.terms:
            return self
        c = self.lc()
        if c == 1:
            return self
        return Poly(self.ring, {m: v / c for m, v in self.terms.items()})

    def primitive(self):
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd

        den = 1
        for c in self.terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = gcd(num, int(c * den))
        s = Fraction(den, num)
        if self.lc() < 0:
            s = -s
        return self.scale(s)

    # arithmetic
    def _check(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c):
        c = _coerce_coeff(c)
        if not c:
            return self.ring.zero
        return Poly(self.ring, {m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c):
        if not c:
            return self.ring.zero
        return Poly(self.ring, {mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        t: Dict[Monomial, Fraction] = {}
        for m1, c1 in b.items():
            for m2, c2 in a.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(self.ring, {m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        other = self._check(other)
        q, r = divmod_poly(self, [other])
        if r:
            raise ValueError(f"{other} does not divide {self}")
        return q[0]

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # evaluation and change of rings
    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in ``ring`` by variable name (missing names must not occur)."""
        if ring == self.ring:
            return self
        if ring.variables == self.ring.variables:
            return Poly(ring, dict(self.terms))
        pos = []
        for i, v in enumerate(self.ring.variables):
            pos.append(ring._index.get(v))
        t = {}
        n = ring.nvars
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    j = pos[i]
                    if j is None:
                        raise RingMismatch(
                            f"variable {self.ring.variables[i]} of {self} not in {ring}"
                        )
                    e[j] = k
            t[tuple(e)] = c
        return Poly(ring, t)

    def substitute(self, images: Dict[str, "Poly"], ring: Optional[Ring] = None) -> "Poly":
        """Replace variables by polynomials of ``ring``; unlisted variables map to themselves."""
        if ring is None:
            ring = next(iter(images.values())).ring if images else self.ring
        imgs = []
        for v in self.ring.variables:
            if v in images:
                p = images[v]
                imgs.append(p if isinstance(p, Poly) else ring.const(p))
            else:
                imgs.append(ring.var(v) if v in ring else None)
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(i, k):
            if (i, k) not in cache:
                if imgs[i] is None:
                    raise RingMismatch(f"no image for {self.ring.variables[i]}")
                cache[(i, k)] = imgs[i] ** k
            return cache[(i, k)]

        acc: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            term = ring.const(c)
            for i, k in enumerate(m):
                if k:
                    term = term * power(i, k)
            for mm, cc in term.terms.items():
                acc[mm] = acc.get(mm, 0) + cc
        return Poly(ring, {m: c for m, c in acc.items() if c})

    def evaluate(self, point: Dict[str, object]) -> Fraction:
        missing = [v for v in self.support() if v not in point]
        if missing:
            raise KeyError(f"no value for {sorted(missing)}")
        vals = [Fraction(point.get(v, 0)) for v in self.ring.variables]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t *= v**e
            total += t
        return total

    def coefficients_in(self, names: Sequence[str], base: Ring) -> Dict[Monomial, "Poly"]:
        """Split as sum of (monomial in ``names``) * (coefficient in ``base``)."""
        idx = [self.ring.index(v) for v in names]
        bidx = [self.ring.index(v) for v in base.variables]
        out: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        covered = set(idx) | set(bidx)
        for m, c in self.terms.items():
            for i, e in enumerate(m):
                if e and i not in covered:
                    raise RingMismatch(f"variable {self.ring.variables[i]} is neither base nor fiber")
            fm = tuple(m[i] for i in idx)
            bm = tuple(m[i] for i in bidx)
            out.setdefault(fm, {})[bm] = c
        return {fm: Poly(base, t) for fm, t in out.items()}

    # printing
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.ring.variables, m)
                if e
            )
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r})"


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            out.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``3/2*x^2*y - z + 1``; implicit multiplication is rejected."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = take()[1]
            acc = term()
            if sign == "-":
                acc = -acc
        else:
            acc = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while peek()[0] == "op" and peek()[1] in "*/":
            _, op, p = take()
            rhs = factor()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise PolySyntaxError("division only by nonzero constants", p)
                acc = acc.scale(1 / rhs.constant_coeff())
        nxt = peek()
        if nxt[0] in ("num", "name") or (nxt[0] == "op" and nxt[1] == "("):
            raise PolySyntaxError("implicit multiplication is not allowed", nxt[2])
        return acc

    def factor():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, val, p = take()
            if kind != "num":
                raise PolySyntaxError("exponent must be a non-negative integer", p)
            base = base**val
        return base

    def atom():
        kind, val, p = take()
        if kind == "num":
            return ring.const(val)
        if kind == "name":
            if val not in ring:
                raise PolySyntaxError(f"unknown variable {val!r}", p)
            return ring.var(val)
        if kind == "op" and val == "(":
            e = expr()
            k2, v2, p2 = take()
            if v2 != ")":
                raise PolySyntaxError("expected ')'", p2)
            return e
        if kind == "op" and val == "-":
            return -factor()
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", p)
        raise PolySyntaxError(f"unexpected {val!r}", p)

    result = expr()
    kind, val, p = peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected {val!r}", p)
    return result


# --- division --------------------------------------------------------------

def _reduce(f: Poly, G: Sequence[Poly], full=True, record=False):
    """Core multivariate division. Returns (remainder, quotients or None)."""
    ring = f.ring
    key = ring.key
    p = dict(f.terms)
    r: Dict[Monomial, Fraction] = {}
    leads = [(g.lm(), g.lc(), g.terms) for g in G]
    quot = [dict() for _ in G] if record else None
    heap = [(tuple(-k for k in key(m)), m) for m in p]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        for gi, (glm, glc, gterms) in enumerate(leads):
            if all(a <= b for a, b in zip(glm, m)):
                q = tuple(a - b for a, b in zip(m, glm))
                coef = c / glc
                if record:
                    quot[gi][q] = quot[gi].get(q, 0) + coef
                for gm, gc in gterms.items():
                    mm = tuple(a + b for a, b in zip(gm, q))
                    v = p.get(mm, 0) - coef * gc
                    if v:
                        if mm not in p:
                            heapq.heappush(heap, (tuple(-k for k in key(mm)), mm))
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            r[m] = c
            del p[m]
            if not full:
                r.update(p)
                break
    rem = Poly(ring, r)
    if record:
        return rem, [Poly(ring, {m: c for m, c in q.items() if c}) for q in quot]
    return rem, None


def normal_form(f: Poly, G: Sequence[Poly]) -> Poly:
    """Fully reduced remainder of ``f`` on division by ``G``."""
    G = [g for g in G if g]
    for g in G:
        if g.ring != f.ring:
            raise RingMismatch(f"{f.ring} vs {g.ring}")
    if not G:
        return f
    return _reduce(f, G)[0]


def divmod_poly(f: Poly, G: Sequence[Poly]):
    """Division with recorded quotients: ``f == sum(q*g) + r``."""
    for g in G:
        if g.ring != f.ring:
            raise RingMismatch(f"{f.ring} vs {g.ring}")
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
    r, q = _reduce(f, list(G), record=True)
    return q, r


def s_polynomial(f: Poly, g: Poly) -> Poly:
    L = mono_lcm(f.lm(), g.lm())
    a = f.mul_term(mono_div(L, f.lm()), 1 / f.lc())
    b = g.mul_term(mono_div(L, g.lm()), 1 / g.lc())
    return a - b


# --- Buchberger ------------------------------------------------------------

def _check_ring(polys):
    ring = None
    for p in polys:
        if ring is None:
            ring = p.ring
        elif p.ring != ring:
            raise RingMismatch(f"{ring} vs {p.ring}")
    return ring


def groebner(gens: Sequence[Poly], limit: Optional[int] = None) -> List[Poly]:
    """Reduced Groebner basis, sorted by leading monomial (descending).

    Buchberger with the Gebauer-Moeller installation of the product and
    chain criteria; pairs are selected by smallest lcm (normal strategy).
    """
    _check_ring(gens)
    polys = [g.monic() for g in gens if g]
    if not polys:
        return []
    ring = polys[0].ring
    key = ring.key
    if limit is None:
        limit = step_limit()

    basis: List[Poly] = []
    active: List[bool] = []
    pairs: list = []  # heap of (key(lcm), i, j, lcm)
    steps = 0

    def update(h: Poly):
        hi = len(basis)
        hlm = h.lm()
        cand = []
        for gi, g in enumerate(basis):
            if active[gi]:
                cand.append((gi, mono_lcm(hlm, g.lm())))
        # Gebauer-Moeller: chain criterion among the new pairs, then product criterion
        kept = []
        while cand:
            gi, L = cand.pop(0)
            if mono_coprime(hlm, basis[gi].lm()) or not any(
                mono_divides(L2, L) for _, L2 in cand
            ) and not any(mono_divides(L2, L) for _, L2 in kept):
                kept.append((gi, L))
        new_pairs = [(gi, L) for gi, L in kept if not mono_coprime(hlm, basis[gi].lm())]
        # chain criterion against old pairs
        survivors = []
        for entry in pairs:
            _, i, j, L = entry
            if (
                mono_divides(hlm, L)
                and mono_lcm(basis[i].lm(), hlm) != L
                and mono_lcm(basis[j].lm(), hlm) != L
            ):
                continue
            survivors.append(entry)
        pairs[:] = survivors
        heapq.heapify(pairs)
        for gi, L in new_pairs:
            heapq.heappush(pairs, (key(L), gi, hi, L))
        for gi, g in enumerate(basis):
            if active[gi] and mono_divides(hlm, g.lm()):
                active[gi] = False
        basis.append(h)
        active.append(True)

    polys.sort(key=lambda p: key(p.lm()))
    for p in polys:
        cur = [b for b, a in zip(basis, active) if a]
        h = normal_form(p, cur) if cur else p
        if h:
            update(h.monic())

    while pairs:
        steps += 1
        if steps > limit:
            raise GroebnerBudgetExceeded(f"Buchberger exceeded {limit} pairs")
        _, i, j, _ = heapq.heappop(pairs)
        s = s_polynomial(basis[i], basis[j])
        cur = [b for b, a in zip(basis, active) if a]
        h = normal_form(s, cur)
        if h:
            update(h.monic())

    return reduce_basis([b for b, a in zip(basis, active) if a])


def reduce_basis(G: Sequence[Poly]) -> List[Poly]:
    """Interreduce a Groebner basis into the reduced one, sorted descending."""
    G = [g.monic() for g in G if g]
    if not G:
        return []
    ring = G[0].ring
    key = ring.key
    G.sort(key=lambda g: key(g.lm()))
    minimal: List[Poly] = []
    for g in G:
        if not any(mono_divides(h.lm(), g.lm()) for h in minimal):
            minimal = [h for h in minimal if not mono_divides(g.lm(), h.lm())]
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lead = Poly(ring, {g.lm(): g.lc()})
        tail = g - lead
        out.append((lead + normal_form(tail, others)).monic() if others else g)
    out.sort(key=lambda g: key(g.lm()), reverse=True)
    return out


def is_groebner(G: Sequence[Poly]) -> bool:
    """Buchberger criterion: all S-polynomials reduce to zero."""
    G = [g for g in G if g]
    for a in range(len(G)):
        for b in range(a + 1, len(G)):
            if normal_form(s_polynomial(G[a], G[b]), G):
                return False
    return True
