import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, polys, ring_and_polys
from retractlab import QQ, Polynomial
from retractlab.grading import (
    InhomogeneousGenerator,
    grading_effective,
    homogeneous_components,
    is_homogeneous,
)

weights = st.lists(st.integers(-3, 3), min_size=1, max_size=3)


class TestComponents:
    def test_examples(self):
        assert homogeneous_components(P("x^2 + y", "xy"), (1, 2)) == {2: P("x^2 + y", "xy")}
        assert homogeneous_components(P("x + y", "xy"), (1, 1)) == {1: P("x + y", "xy")}
        assert homogeneous_components(P("x + y^2", "xy"), (2, 1)) == {2: P("x + y^2", "xy")}
        assert homogeneous_components(P("x + y^2", "xy"), (1, 1)) == {1: P("x", "xy"), 2: P("y^2", "xy")}

    def test_keys_ascending(self):
        comps = homogeneous_components(P("y^3 + x - 1", "xy"), (-1, 1))
        assert list(comps) == sorted(comps)

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            homogeneous_components(P("x", "xy"), (1,))


class TestHomogeneous:
    def test_examples(self):
        assert is_homogeneous(P("x*y", "xy"), (1, -1)) == (True, 0)
        assert is_homogeneous(P("x + 1", "xy"), (1, 1)) == (False, None)
        assert is_homogeneous(P("x^3*y^5", "xy"), (7, -2)) == (True, 11)

    def test_zero_special(self):
        assert is_homogeneous(Polynomial.zero(QQ, 2), (1, 1)) == (True, None)


class TestEffective:
    def test_examples(self):
        rep = grading_effective([P("x", "xy"), P("y^2", "xy")], (1, 1))
        assert rep.effective and rep.degrees == (1, 2)
        rep = grading_effective([P("x*y", "xy")], (1, -1))
        assert not rep and rep.degrees == (0,)

    def test_inhomogeneous(self):
        with pytest.raises(InhomogeneousGenerator) as exc:
            grading_effective([P("x + y", "xy")], (1, 2))
        assert exc.value.degrees == [1, 2]
        assert exc.value.generator == P("x + y", "xy")


def _fit(w, n):
    return (list(w) * n)[:n]


@settings(max_examples=500, deadline=None)
@given(ring_and_polys(count=1), weights)
def test_reassembly(rp, w):
    field, n, (f,) = rp
    w = _fit(w, n)
    comps = homogeneous_components(f, w)
    total = Polynomial.zero(field, n)
    for d, c in comps.items():
        assert is_homogeneous(c, w) == (True, d)
        total = total + c
    assert total == f


@settings(max_examples=500, deadline=None)
@given(ring_and_polys(count=2), weights)
def test_multiplicative(rp, w):
    field, n, (f, g) = rp
    w = _fit(w, n)
    cf, cg = homogeneous_components(f, w), homogeneous_components(g, w)
    want: dict = {}
    for a, fa in cf.items():
        for b, gb in cg.items():
            want[a + b] = want.get(a + b, Polynomial.zero(field, n)) + fa * gb
    want = {d: p for d, p in want.items() if p}
    assert homogeneous_components(f * g, w) == want


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4), weights, st.integers(1, 5))
def test_effective_scaling(exps, w, k):
    w = _fit(w, 2)
    gens = [Polynomial.monomial(e, 1, QQ) for e in exps]
    a = grading_effective(gens, w)
    b = grading_effective(gens, [k * x for x in w])
    assert a.effective == b.effective
    assert b.degrees == tuple(None if d is None else k * d for d in a.degrees)
