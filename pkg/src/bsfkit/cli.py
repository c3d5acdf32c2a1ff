"""bsf-kit: run job files and the example corpus.

Exit codes: 0 success, 1 usage error, 2 mathematical failure, 3 budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Dict

from .algebra import GroebnerBudgetExceeded, Ring, TermOrder, parse_poly
from .blowup import ProductFormViolated, blowup_locally_principal, blowup_rees, product_form_blowup
from .bsf import BsfStageError, bsf_pipeline, bsf_structure
from .family import NotFiberFinite, SplitViolated, constfy, flattening_strata, iso_locus, make_split
from .ideals import (
    Ideal,
    QuotientRing,
    RingMap,
    eliminate,
    ideal_equal,
    intersect,
    is_effective_cartier,
    is_principal_cartier,
    is_regular,
    member,
    quotient,
    ring_map_kernel,
    saturate,
)
from .jobfile import AlgebraDecl, IdealDecl, JobError, JobFile, MapDecl, RingDecl, SchemeDecl, parse_job
from .scheme import AffineChart, ClosedSub, SchemeError, SchemeMap
from .weil import AlgebraTableError, EnumerationBudgetExceeded, FiniteAlgebra, adjunction_check, restrict_scheme

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_BUDGET = 0, 1, 2, 3

MATH_ERRORS = (ProductFormViolated, BsfStageError, NotFiberFinite, SplitViolated, AlgebraTableError, SchemeError)
BUDGET_ERRORS = (GroebnerBudgetExceeded, EnumerationBudgetExceeded)


class Env:
    """Objects built from the declarations of a job."""

    def __init__(self, job: JobFile):
        self.rings: Dict[str, Ring] = {}
        self.ideals: Dict[str, Ideal] = {}
        self.algebras: Dict[str, FiniteAlgebra] = {}
        self.schemes: Dict[str, AffineChart] = {}
        self.maps: Dict[str, tuple] = {}
        for d in job.declarations:
            if isinstance(d, RingDecl):
                self.rings[d.name] = Ring(d.variables, TermOrder(d.order))
            elif isinstance(d, IdealDecl):
                R = self.rings[d.ring]
                self.ideals[d.name] = Ideal(R, [parse_poly(g, R) for g in d.gens])
            elif isinstance(d, AlgebraDecl):
                basis = Ring([f"e{k + 1}" for k in range(d.dim)])
                prods = {}
                for i, j, rhs in d.products:
                    p = parse_poly(rhs, basis)
                    prods[(i, j)] = tuple(p.terms.get(tuple(1 if k == m else 0 for k in range(d.dim)), 0)
                                          for m in range(d.dim))
                self.algebras[d.name] = FiniteAlgebra.from_products(d.name, d.dim, prods)
            elif isinstance(d, SchemeDecl):
                R = self.rings[d.ring]
                mod = self.ideals[d.ideal] if d.ideal else Ideal(R)
                self.schemes[d.name] = AffineChart(d.name, QuotientRing(R, mod))
            elif isinstance(d, MapDecl):
                self.maps[d.name] = d

    def chart(self, name) -> AffineChart:
        """A ring or scheme name as an affine chart."""
        if name in self.schemes:
            return self.schemes[name]
        return AffineChart(name, QuotientRing.free(self.rings[name]))

    def ring_map(self, name):
        """(RingMap source -> target, the scheme map Spec target -> Spec source)."""
        d = self.maps[name]
        src, tgt = self.chart(d.source), self.chart(d.target)
        images = [parse_poly(t, tgt.ring) for t in d.images]
        phi = RingMap(src.ring, tgt.coords, images)
        return phi, SchemeMap(tgt, src, dict(zip(src.variables, images)))


def _gb(I: Ideal):
    return [str(g) for g in I.gb()]


def run_job(job: JobFile) -> dict:
    """Evaluate the command; returns the result payload (no envelope)."""
    env = Env(job)
    c = job.command
    a = c.args
    n = c.name
    if n == "groebner":
        return {"gb": _gb(env.ideals[a[0]])}
    if n == "member":
        I = env.ideals[a[1]]
        return {"member": member(parse_poly(a[0], I.ring), I)}
    if n == "equal":
        return {"equal": ideal_equal(env.ideals[a[0]], env.ideals[a[1]])}
    if n in ("saturate", "quotient"):
        I = env.ideals[a[0]]
        f = parse_poly(a[1], I.ring)
        J = saturate(I, f) if n == "saturate" else quotient(I, f)
        return {"gb": _gb(J)}
    if n == "intersect":
        return {"gb": _gb(intersect(env.ideals[a[0]], env.ideals[a[1]]))}
    if n == "eliminate":
        J = eliminate(env.ideals[a[0]], list(a[1]))
        return {"variables": list(J.ring.variables), "gb": _gb(J)}
    if n in ("kernel", "image"):
        phi, g = env.ring_map(a[0])
        K = ring_map_kernel(phi)
        return {"ambient": g.target.name, "gb": _gb(K)}
    if n == "regular":
        X = env.schemes[a[1]]
        return {"regular": is_regular(parse_poly(a[0], X.ring), X.coords)}
    if n == "cartier":
        X = env.schemes[a[1]]
        I = env.ideals[a[0]]
        st = is_principal_cartier(I, X.coords)
        if st.kind == "unknown":
            st = is_effective_cartier(I, X.coords)
        return st.to_json()
    if n == "blowup":
        X = env.schemes[a[0]]
        return blowup_locally_principal(X, parse_poly(a[1], X.ring)).to_json()
    if n == "rees":
        return blowup_rees(env.schemes[a[0]], env.ideals[a[1]]).to_json()
    if n == "productform":
        X = env.schemes[a[0]]
        return product_form_blowup(X, list(a[1]), parse_poly(a[2], X.ring)).to_json()
    if n == "restrict":
        return restrict_scheme(env.schemes[a[0]], env.algebras[a[1]]).to_json()
    if n == "adjunction":
        R = restrict_scheme(env.schemes[a[0]], env.algebras[a[1]])
        return adjunction_check(R, "point").to_json()
    if n == "iso":
        X = env.schemes[a[1]]
        return iso_locus(ClosedSub(X, env.ideals[a[0]]), make_split(X, a[2])).to_json()
    if n == "constfy":
        _, g = env.ring_map(a[0])
        return constfy(g, make_split(g.source, a[1])).to_json()
    if n == "strata":
        X = env.schemes[a[1]]
        return flattening_strata(ClosedSub(X, env.ideals[a[0]]), tuple(a[2])).to_json()
    if n == "structure":
        X = env.schemes[a[1]]
        return bsf_structure({X.name: ClosedSub(X, env.ideals[a[0]])}, tuple(a[2])).to_json()
    if n == "bsf":
        X = env.schemes[a[0]]
        Z = env.ideals[a[2]]
        return bsf_pipeline(X, env.algebras[a[1]], [str(g) for g in Z.gens]).to_json()
    if n == "fixture":
        return run_fixture(a[0])
    raise JobError("E-SYNTAX", f"unknown command {n}")


# --- fixtures reachable from job files --------------------------------------------------------

def _fixture_table():
    from . import fixtures as fx
    from .bsf import cluster_fixtures, verify_small_resolution_fixture

    def bank_doc():
        out = fx.factorization_suite()
        return {"maps": [o.to_json() for o in out], "misclassified": sum(o.misclassified for o in out)}

    def agreement_doc():
        return {"cases": [fx.pipeline_structure_agreement(k) for k in sorted(fx.AGREEMENT_CASES)]}

    return {
        "cluster": lambda: cluster_fixtures().to_json(),
        "small_resolution": lambda: verify_small_resolution_fixture().to_json(),
        "p1xp2": lambda: bsf_structure(fx.p1_p2_atlas()).to_json(),
        "determinantal": lambda: bsf_structure(fx.determinantal_atlas()).to_json(),
        "zero_section": lambda: bsf_structure(fx.zero_section_atlas(), ("a",)).to_json(),
        "factorization": bank_doc,
        "agreement": agreement_doc,
    }


FIXTURES = ("agreement", "cluster", "determinantal", "factorization", "p1xp2", "small_resolution", "zero_section")


def run_fixture(name):
    table = _fixture_table()
    if name not in table:
        raise JobError("E-UNDECLARED", f"no fixture named {name}")
    return table[name]()


# --- documents and rendering ----------------------------------------------------------------

def envelope(status, command=None, result=None, error=None):
    doc = {"schema": SCHEMA, "status": status}
    if command is not None:
        doc["command"] = command
    if result is not None:
        doc["result"] = result
    if error is not None:
        doc["error"] = error
    return doc


def execute_text(text: str):
    """(exit code, document) for the job in ``text``."""
    try:
        job = parse_job(text)
    except JobError as e:
        return EXIT_USAGE, envelope("usage_error", error=e.to_json())
    return execute(job)


def execute(job: JobFile):
    cmd = job.command.name
    try:
        return EXIT_OK, envelope("ok", cmd, run_job(job))
    except JobError as e:
        return EXIT_USAGE, envelope("usage_error", cmd, error=e.to_json())
    except BUDGET_ERRORS as e:
        return EXIT_BUDGET, envelope("budget", cmd, error={"code": "E-BUDGET", "message": str(e)})
    except MATH_ERRORS as e:
        return EXIT_MATH, envelope("math_failure", cmd, error={"code": "E-MATH", "message": str(e)})
    except ValueError as e:
        # inputs the grammar accepts but the operation cannot take, e.g. a basis name clash
        return EXIT_USAGE, envelope("usage_error", cmd, error={"code": "E-INPUT", "message": str(e)})


def render_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(doc, indent=0) -> str:
    lines = []
    pad = "  " * indent
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            elif isinstance(v, str) and "\n" in v.strip():
                lines.append(f"{pad}{k}: |")
                lines += [f"{pad}  {ln}" for ln in v.strip().splitlines()]
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(doc)}")
    return "\n".join(lines)


def _scalar(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def render(doc, fmt):
    return render_json(doc) if fmt == "json" else render_text(doc) + "\n"


# --- entry point ----------------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="bsf-kit", description="Blow ups, Weil restrictions and section families over QQ.")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run a job file")
    r.add_argument("file")
    r.add_argument("--format", choices=("json", "text"), default="text")
    c = sub.add_parser("corpus", help="the example corpus")
    csub = c.add_subparsers(dest="corpus_cmd", required=True)
    cr = csub.add_parser("run", help="run one entry or all")
    cr.add_argument("name")
    cr.add_argument("--format", choices=("json", "text"), default="json")
    cr.add_argument("--jobs", type=int, default=1, help="worker processes")
    csub.add_parser("list", help="list entry names")
    return p


def main(argv=None):
    logging.basicConfig(level=logging.ERROR)
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.cmd == "run":
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except (OSError, UnicodeDecodeError) as e:
            sys.stderr.write(f"bsf-kit: cannot read {args.file}: {e}\n")
            return EXIT_USAGE
        code, doc = execute_text(text)
        sys.stdout.write(render(doc, args.format))
        return code
    from .corpus import corpus_names, run_corpus

    if args.corpus_cmd == "list":
        for name in corpus_names():
            sys.stdout.write(name + "\n")
        return EXIT_OK
    try:
        code, doc = run_corpus(args.name, jobs=args.jobs)
    except KeyError:
        sys.stderr.write(f"bsf-kit: no corpus entry named {args.name}\n")
        return EXIT_USAGE
    sys.stdout.write(render(doc, args.format))
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
