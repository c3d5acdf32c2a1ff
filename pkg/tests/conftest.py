from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bsfkit.algebra import GREVLEX, Poly, Ring

# fixed seeds: every run draws the same examples
settings.register_profile(
    "bsfkit",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("bsfkit")


def coeffs(nonzero=False):
    num = st.integers(1, 5).flatmap(lambda k: st.sampled_from([k, -k])) if nonzero else st.integers(-5, 5)
    return st.tuples(num, st.sampled_from([1, 1, 1, 2, 3, 4])).map(lambda t: Fraction(*t))


@st.composite
def monomials(draw, n, max_deg):
    left, exps = draw(st.integers(0, max_deg)), []
    for _ in range(n):
        e = draw(st.integers(0, left))
        exps.append(e)
        left -= e
    order = draw(st.permutations(range(n)))
    return tuple(exps[i] for i in order)


def polys(ring: Ring, max_terms=4, max_deg=3, min_terms=0):
    term = st.tuples(monomials(ring.nvars, max_deg), coeffs(nonzero=True))
    return st.lists(term, min_size=min_terms, max_size=max_terms, unique_by=lambda t: t[0]).map(
        lambda items: Poly.from_terms(ring, items)
    )


def nonzero_polys(ring: Ring, **kw):
    return polys(ring, min_terms=1, **kw)


R2 = Ring(("x", "y"), GREVLEX)
R3 = Ring(("x", "y", "z"), GREVLEX)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance")
        for line in mod.LINES:
            terminalreporter.write_line(line)
