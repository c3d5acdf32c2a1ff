"""Line-oriented job files: declarations followed by one ``run`` command.

    ring R = QQ[x,y] grevlex;
    ideal I = (x*y, y^2) in R;
    algebra B dim 2; e2*e2 = 0;
    scheme X = R / I;
    map f : R -> S = (t^2, t^3);
    run saturate I by x;

Every statement ends with ``;``. ``#`` starts a comment. Polynomials use
explicit ``*`` (no implicit multiplication).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .algebra import PolySyntaxError, Ring, TermOrder, parse_poly


class JobError(ValueError):
    """Diagnostic with a distinct code and a 1-based line/column."""

    def __init__(self, code, message, line=0, col=0):
        self.code = code
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{code} at {line}:{col}: {message}")

    def to_json(self):
        return {"code": self.code, "message": self.message, "line": self.line, "column": self.col}


E_SYNTAX = "E-SYNTAX"
E_UNDECLARED = "E-UNDECLARED"
E_ARITY = "E-ARITY"
E_TYPE = "E-TYPE"

ORDERS = ("grevlex", "lex")

# command name -> slots; "kind:Name" slots are arguments, bare words are keywords
COMMANDS: Dict[str, Tuple[str, ...]] = {
    "groebner": ("ideal",),
    "member": ("poly", "in", "ideal"),
    "equal": ("ideal", ",", "ideal"),
    "saturate": ("ideal", "by", "poly"),
    "quotient": ("ideal", "by", "poly"),
    "intersect": ("ideal", ",", "ideal"),
    "eliminate": ("ideal", "keep", "names"),
    "kernel": ("map",),
    "image": ("map",),
    "regular": ("poly", "on", "scheme"),
    "cartier": ("ideal", "on", "scheme"),
    "blowup": ("scheme", "along", "poly"),
    "rees": ("scheme", "along", "ideal"),
    "productform": ("scheme", "fiber", "names", "along", "poly"),
    "restrict": ("scheme", "over", "algebra"),
    "adjunction": ("scheme", "over", "algebra"),
    "iso": ("ideal", "on", "scheme", "fiber", "names"),
    "constfy": ("map", "fiber", "names"),
    "strata": ("ideal", "on", "scheme", "fiber", "names"),
    "structure": ("ideal", "on", "scheme", "fiber", "names"),
    "bsf": ("scheme", "over", "algebra", "center", "ideal"),
    "fixture": ("word",),
}
ARG_KINDS = ("ideal", "poly", "scheme", "algebra", "map", "names", "word")
STOP_WORDS = {w for slots in COMMANDS.values() for w in slots if w not in ARG_KINDS and w != ","}


@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: Tuple[str, ...]
    order: str = "grevlex"

    def to_text(self):
        return f"ring {self.name} = QQ[{','.join(self.variables)}] {self.order};"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    gens: Tuple[str, ...]
    ring: str

    def to_text(self):
        return f"ideal {self.name} = ({', '.join(self.gens)}) in {self.ring};"


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    dim: int
    products: Tuple[Tuple[int, int, str], ...] = ()

    def to_text(self):
        parts = [f"algebra {self.name} dim {self.dim};"]
        parts += [f"e{i}*e{j} = {rhs};" for i, j, rhs in self.products]
        return " ".join(parts)


@dataclass(frozen=True)
class SchemeDecl:
    name: str
    ring: str
    ideal: Optional[str] = None

    def to_text(self):
        if self.ideal is None:
            return f"scheme {self.name} = {self.ring};"
        return f"scheme {self.name} = {self.ring} / {self.ideal};"


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: Tuple[str, ...]

    def to_text(self):
        return f"map {self.name} : {self.source} -> {self.target} = ({', '.join(self.images)});"


@dataclass(frozen=True)
class Command:
    name: str
    args: Tuple  # one entry per argument slot; names slots are tuples

    def to_text(self):
        out = ["run", self.name]
        it = iter(self.args)
        for slot in COMMANDS[self.name]:
            if slot in ARG_KINDS:
                a = next(it)
                out.append("(" + ", ".join(a) + ")" if slot == "names" else a)
            elif slot == ",":
                out[-1] += ","
            else:
                out.append(slot)
        return " ".join(out) + ";"


@dataclass(frozen=True)
class JobFile:
    declarations: Tuple = ()
    command: Optional[Command] = None

    def to_text(self):
        lines = [d.to_text() for d in self.declarations]
        if self.command is not None:
            lines.append(self.command.to_text())
        return "\n".join(lines) + "\n"

    def lookup(self, name):
        for d in self.declarations:
            if d.name == name:
                return d
        return None


def print_job(job: JobFile) -> str:
    return job.to_text()


# --- scanning ------------------------------------------------------------------------------

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
INT = re.compile(r"[0-9]+")


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.last_end = 0  # just after the last consumed token

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, code, msg, pos=None):
        return JobError(code, msg, *self.where(pos))

    def skip(self):
        t = self.text
        while self.pos < len(t):
            c = t[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "#":
                nl = t.find("\n", self.pos)
                self.pos = len(t) if nl < 0 else nl
            else:
                break

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek_word(self):
        self.skip()
        m = IDENT.match(self.text, self.pos)
        return m.group(0) if m else None

    def ident(self, what="a name"):
        self.skip()
        m = IDENT.match(self.text, self.pos)
        if not m:
            raise self.error(E_SYNTAX, f"expected {what}, found {self._found()}")
        self.pos = self.last_end = m.end()
        return m.group(0)

    def integer(self):
        self.skip()
        m = INT.match(self.text, self.pos)
        if not m:
            raise self.error(E_SYNTAX, f"expected an integer, found {self._found()}")
        self.pos = self.last_end = m.end()
        return int(m.group(0))

    def lit(self, s):
        self.skip()
        if not self.text.startswith(s, self.pos):
            raise self.error(E_SYNTAX, f"expected '{s}', found {self._found()}")
        self.pos += len(s)
        self.last_end = self.pos

    def accept(self, s):
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            self.last_end = self.pos
            return True
        return False

    def keyword(self, w):
        pos = self.pos
        if self.peek_word() != w:
            raise self.error(E_SYNTAX, f"expected '{w}', found {self._found()}")
        self.pos += len(w)
        self.last_end = self.pos
        return pos

    def _found(self):
        self.skip()
        if self.pos >= len(self.text):
            return "end of input"
        m = IDENT.match(self.text, self.pos)
        tok = m.group(0) if m else self.text[self.pos]
        return repr(tok)

    def expr(self, stop_words=()):
        """Raw polynomial text up to a top-level ',' ')' ';' or a stop word."""
        self.skip()
        start = self.pos
        depth = 0
        t = self.text
        i = self.pos
        while i < len(t):
            c = t[i]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0:
                    break
                depth -= 1
            elif c in ",;" and depth == 0:
                break
            elif c == "#":
                break
            elif c.isalpha() or c == "_":
                m = IDENT.match(t, i)
                if depth == 0 and m.group(0) in stop_words and (i == 0 or not t[i - 1].isalnum()):
                    break
                i = m.end()
                continue
            i += 1
        raw = t[start:i]
        self.pos = i
        self.last_end = start + len(raw.rstrip())
        text = " ".join(raw.split())
        if not text:
            raise self.error(E_SYNTAX, f"expected a polynomial, found {self._found()}", start)
        return text, start + (len(raw) - len(raw.lstrip()))


# --- parsing -------------------------------------------------------------------------------

@dataclass
class _State:
    decls: List = field(default_factory=list)
    kinds: Dict[str, str] = field(default_factory=dict)
    rings: Dict[str, Ring] = field(default_factory=dict)


def parse_job(text: str) -> JobFile:
    """Parse and check a job file; raises JobError with code and position."""
    sc = _Scanner(text)
    st = _State()
    command = None
    current_algebra = None
    while not sc.at_end():
        start = sc.pos
        word = sc.peek_word()
        if command is not None:
            raise sc.error(E_SYNTAX, "only one run command per file, and it must come last")
        if word == "ring":
            _ring(sc, st)
        elif word == "ideal":
            _ideal(sc, st)
        elif word == "algebra":
            current_algebra = _algebra(sc, st)
            continue
        elif word == "scheme":
            _scheme(sc, st)
        elif word == "map":
            _map(sc, st)
        elif word == "run":
            command = _command(sc, st)
        elif current_algebra is not None and re.match(r"e[0-9]+\s*\*", text[sc.pos:]):
            _product(sc, st, current_algebra)
            continue
        else:
            raise sc.error(E_SYNTAX, f"expected a declaration or 'run', found {sc._found()}", start)
        current_algebra = None
    if command is None:
        raise sc.error(E_SYNTAX, "missing run command")
    return JobFile(tuple(st.decls), command)


def _end(sc):
    # a missing terminator is reported just after the previous token
    pos = sc.last_end
    sc.skip()
    if not sc.text.startswith(";", sc.pos):
        raise sc.error(E_SYNTAX, f"expected ';', found {sc._found()}", pos)
    sc.pos += 1


def _declare(sc, st, name, kind, pos):
    if name in st.kinds:
        raise sc.error(E_SYNTAX, f"{name} is already declared", pos)
    st.kinds[name] = kind


def _ring(sc, st):
    sc.keyword("ring")
    pos = sc.pos
    name = sc.ident("a ring name")
    sc.lit("=")
    sc.keyword("QQ")
    sc.lit("[")
    variables = []
    if not sc.accept("]"):
        while True:
            vpos = sc.pos
            v = sc.ident("a variable")
            if v in variables:
                raise sc.error(E_SYNTAX, f"variable {v} repeated", vpos)
            variables.append(v)
            if sc.accept("]"):
                break
            sc.lit(",")
    order = "grevlex"
    if sc.peek_word() in ORDERS:
        order = sc.ident()
    _end(sc)
    _declare(sc, st, name, "ring", pos)
    st.rings[name] = Ring(variables, TermOrder(order))
    st.decls.append(RingDecl(name, tuple(variables), order))


def _ref(sc, st, kinds, what):
    sc.skip()
    pos = sc.pos
    name = sc.ident(what)
    kind = st.kinds.get(name)
    if kind is None:
        raise sc.error(E_UNDECLARED, f"{name} is not declared", pos)
    if kind not in kinds:
        raise sc.error(E_TYPE, f"{name} is a {kind}, expected {' or '.join(kinds)}", pos)
    return name, pos


def _check_poly(sc, ring: Ring, text, pos):
    try:
        parse_poly(text, ring)
    except PolySyntaxError as e:
        code = E_UNDECLARED if "unknown variable" in e.args[0] else E_SYNTAX
        raise sc.error(code, e.args[0], pos + e.pos)


def _poly_list(sc, ring: Ring):
    sc.lit("(")
    out = []
    if sc.accept(")"):
        return out
    while True:
        text, pos = sc.expr()
        _check_poly(sc, ring, text, pos)
        out.append(text)
        if sc.accept(")"):
            return out
        sc.lit(",")


def ring_of(job_or_state, name):
    """Ring of a ring, ideal or scheme name."""
    decls = job_or_state.decls if isinstance(job_or_state, _State) else job_or_state.declarations
    by = {d.name: d for d in decls}
    d = by[name]
    if isinstance(d, RingDecl):
        return d.name
    if isinstance(d, IdealDecl):
        return d.ring
    if isinstance(d, SchemeDecl):
        return d.ring
    raise KeyError(name)


def _ideal(sc, st):
    sc.keyword("ideal")
    sc.skip()
    pos = sc.pos
    name = sc.ident("an ideal name")
    sc.lit("=")
    sc.skip()
    list_pos = sc.pos
    save = sc.pos
    # the ring comes after the generators; find it first to check them
    depth_end = _matching_paren(sc, list_pos)
    sc.pos = depth_end
    sc.keyword("in")
    ring_name, _ = _ref(sc, st, ("ring",), "a ring name")
    end = sc.pos
    sc.pos = save
    gens = _poly_list(sc, st.rings[ring_name])
    sc.pos = end
    _end(sc)
    _declare(sc, st, name, "ideal", pos)
    st.decls.append(IdealDecl(name, tuple(gens), ring_name))


def _matching_paren(sc, pos):
    t = sc.text
    if not t.startswith("(", pos):
        raise sc.error(E_SYNTAX, f"expected '(', found {sc._found()}", pos)
    depth = 0
    for i in range(pos, len(t)):
        if t[i] == "(":
            depth += 1
        elif t[i] == ")":
            depth -= 1
            if depth == 0:
                return i + 1
        elif t[i] == ";":
            break
    raise sc.error(E_SYNTAX, "unbalanced parentheses", pos)


def _algebra(sc, st):
    sc.keyword("algebra")
    sc.skip()
    pos = sc.pos
    name = sc.ident("an algebra name")
    sc.keyword("dim")
    dpos = sc.pos
    dim = sc.integer()
    if dim < 1:
        raise sc.error(E_ARITY, "dimension must be positive", dpos)
    _end(sc)
    _declare(sc, st, name, "algebra", pos)
    st.decls.append(AlgebraDecl(name, dim, ()))
    return name


def _product(sc, st, alg_name):
    idx = [i for i, d in enumerate(st.decls) if isinstance(d, AlgebraDecl) and d.name == alg_name][0]
    d = st.decls[idx]
    sc.skip()
    pos = sc.pos
    m = re.match(r"e([0-9]+)\s*\*\s*e([0-9]+)", sc.text[sc.pos:])
    if not m:
        raise sc.error(E_SYNTAX, "expected a product eI*eJ")
    i, j = int(m.group(1)), int(m.group(2))
    if not (1 <= i <= d.dim and 1 <= j <= d.dim):
        raise sc.error(E_ARITY, f"e{i}*e{j} is outside an algebra of dimension {d.dim}", pos)
    sc.pos += m.end()
    sc.lit("=")
    text, tpos = sc.expr()
    ring = Ring([f"e{k + 1}" for k in range(d.dim)])
    _check_poly(sc, ring, text, tpos)
    p = parse_poly(text, ring)
    if p.total_degree() > 1 or p.terms.get((0,) * d.dim):
        raise sc.error(E_SYNTAX, "a product must be a linear combination of basis elements", tpos)
    _end(sc)
    if any((a, b) == (i, j) for a, b, _ in d.products):
        raise sc.error(E_SYNTAX, f"e{i}*e{j} given twice", pos)
    st.decls[idx] = AlgebraDecl(d.name, d.dim, d.products + ((i, j, text),))


def _scheme(sc, st):
    sc.keyword("scheme")
    sc.skip()
    pos = sc.pos
    name = sc.ident("a scheme name")
    sc.lit("=")
    ring_name, _ = _ref(sc, st, ("ring",), "a ring name")
    ideal = None
    if sc.accept("/"):
        ideal, ipos = _ref(sc, st, ("ideal",), "an ideal name")
        if ring_of(st, ideal) != ring_name:
            raise sc.error(E_TYPE, f"{ideal} does not live in {ring_name}", ipos)
    _end(sc)
    _declare(sc, st, name, "scheme", pos)
    st.decls.append(SchemeDecl(name, ring_name, ideal))


def _map(sc, st):
    sc.keyword("map")
    sc.skip()
    pos = sc.pos
    name = sc.ident("a map name")
    sc.lit(":")
    src, _ = _ref(sc, st, ("ring", "scheme"), "a ring or scheme name")
    sc.lit("->")
    tgt, _ = _ref(sc, st, ("ring", "scheme"), "a ring or scheme name")
    sc.lit("=")
    sc.skip()
    lpos = sc.pos
    images = _poly_list(sc, st.rings[ring_of(st, tgt)])
    n = st.rings[ring_of(st, src)].nvars
    if len(images) != n:
        raise sc.error(E_ARITY, f"{name} needs {n} images (one per variable of {src}), got {len(images)}", lpos)
    _end(sc)
    _declare(sc, st, name, "map", pos)
    st.decls.append(MapDecl(name, src, tgt, tuple(images)))


def _command(sc, st):
    sc.keyword("run")
    sc.skip()
    cpos = sc.pos
    name = sc.ident("a command")
    if name not in COMMANDS:
        raise sc.error(E_SYNTAX, f"unknown command {name!r}", cpos)
    slots = COMMANDS[name]
    nargs = sum(1 for s in slots if s in ARG_KINDS)
    args = []
    context_ring = None
    for k, slot in enumerate(slots):
        sc.skip()
        if sc.text.startswith(";", sc.pos) or sc.pos >= len(sc.text):
            raise sc.error(E_ARITY, f"{name} takes {nargs} arguments, got {len(args)}")
        if slot == ",":
            sc.lit(",")
        elif slot not in ARG_KINDS:
            sc.keyword(slot)
        elif slot == "poly":
            text, ppos = sc.expr(STOP_WORDS)
            args.append((text, ppos))
        elif slot == "names":
            sc.lit("(")
            names = []
            if not sc.accept(")"):
                while True:
                    names.append(sc.ident("a variable"))
                    if sc.accept(")"):
                        break
                    sc.lit(",")
            args.append(tuple(names))
        elif slot == "word":
            args.append(sc.ident("a name"))
        else:
            nm, npos = _ref(sc, st, (slot,), f"a {slot} name")
            args.append(nm)
    sc.skip()
    if sc.text.startswith(",", sc.pos):
        raise sc.error(E_ARITY, f"{name} takes {nargs} arguments")
    _end(sc)
    if name != "bsf":
        rings = {ring_of(st, a) for slot, a in zip(_arg_slots(name), args) if slot in ("ideal", "scheme")}
        if len(rings) > 1:
            raise sc.error(E_TYPE, f"arguments of {name} live in different rings", cpos)
    # polynomials are read in the ring of the first ideal or scheme argument
    for slot, a in zip(_arg_slots(name), args):
        if slot in ("ideal", "scheme"):
            context_ring = st.rings[ring_of(st, a)]
            break
    out = []
    for slot, a in zip(_arg_slots(name), args):
        if slot == "poly":
            text, ppos = a
            _check_poly(sc, context_ring, text, ppos)
            out.append(text)
        else:
            out.append(a)
    return Command(name, tuple(out))


def _arg_slots(name):
    return [s for s in COMMANDS[name] if s in ARG_KINDS]
