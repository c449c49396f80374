import random
import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from retractlab import QQ, GF, EndoMap, Polynomial, parse_images, parse_polynomial
from retractlab.expmap import ExpMap

FIELDS = [QQ, GF(2), GF(3), GF(5), GF(7)]


def P(text, names="xyz", field=QQ):
    return parse_polynomial(text, field, list(names), allow_reserved="U" in names)


def endo(text, names="xyz", field=QQ):
    return EndoMap(tuple(parse_images(text, field, list(names))))


def expmap(text, names="xyz", field=QQ):
    return ExpMap(tuple(parse_images(text, field, list(names) + ["U"], allow_reserved=True)))


def to_sympy(f, names):
    syms = sympy.symbols(list(names))
    expr = sympy.Integer(0)
    for e, c in f.terms():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, a in zip(syms, e):
            term *= s ** a
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, names, field=QQ):
    syms = sympy.symbols(list(names))
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Polynomial(field, len(names), {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def random_poly(rng: random.Random, field, nvars, terms=4, max_exp=3):
    t = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        if field.p:
            c = rng.randint(0, field.p - 1)
        else:
            c = Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 3]))
        t[e] = t.get(e, 0) + c
    return Polynomial(field, nvars, t)


@st.composite
def polys(draw, field, nvars, max_terms=4, max_exp=3):
    n_terms = draw(st.integers(0, max_terms))
    t = {}
    for _ in range(n_terms):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(nvars))
        if field.p:
            c = draw(st.integers(0, field.p - 1))
        else:
            c = Fraction(draw(st.integers(-6, 6)), draw(st.sampled_from([1, 2, 3, 5])))
        t[e] = t.get(e, 0) + c
    return Polynomial(field, nvars, t)


@st.composite
def ring_and_polys(draw, count=2, max_terms=4, max_exp=3):
    field = draw(st.sampled_from(FIELDS))
    n = draw(st.integers(1, 3))
    return field, n, [draw(polys(field, n, max_terms, max_exp)) for _ in range(count)]


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, elapsed, limit in sorted(mod.RESULTS):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}  [{elapsed:.2f}s / {limit:g}s]")
