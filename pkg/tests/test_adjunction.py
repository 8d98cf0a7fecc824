from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriclab.adjunction import (adjoint_polytope, adjunction_report,
                                 codegree_via_adjoint, is_q_normal,
                                 lambda_value, nef_value, q_codegree,
                                 sigma_value, spectral_value)
from toriclab.catalog import gen_contra
from toriclab.divisors import divisor_of_polytope, polytope_of_divisor
from toriclab.latticepoints import codegree
from toriclab.polyhedral import Polytope, RationalPolytope, normal_fan


def simplex(n, d=1):
    vs = [tuple(0 for _ in range(n))]
    vs += [tuple(d if i == j else 0 for i in range(n)) for j in range(n)]
    return Polytope.from_vertices(vs)


def cube(n):
    vs = [tuple((m >> i) & 1 for i in range(n)) for m in range(2 ** n)]
    return Polytope.from_vertices(vs)


def test_adjoint_polytope():
    P = simplex(2, 3)
    Q = adjoint_polytope(P, 1)
    assert isinstance(Q, RationalPolytope) or isinstance(Q, Polytope)
    assert sorted(Q.vertices)[0] == (1, 1)
    E = adjoint_polytope(P, 2)
    assert getattr(E, "is_empty", False)
    with pytest.raises(ValueError):
        adjoint_polytope(P, -1)


def test_sigma_and_q_codegree():
    for n in (1, 2, 3, 4):
        assert sigma_value(simplex(n)) == Fraction(1, n + 1)
        assert q_codegree(simplex(n)) == n + 1
    for s in (1, 2, 3, 4):
        assert q_codegree(simplex(1, s)) == Fraction(2, s)
    assert sigma_value(cube(2)) == Fraction(1, 2)
    assert q_codegree(cube(3)) == 2


def test_nef_value():
    assert nef_value(simplex(2)) == 3
    assert nef_value(simplex(3)) == 4
    assert nef_value(simplex(2, 2)) == Fraction(3, 2)
    assert nef_value(cube(2)) == 2
    assert lambda_value(simplex(2)) == Fraction(1, 3)


def test_q_normal_examples():
    assert is_q_normal(simplex(3))
    assert is_q_normal(simplex(2, 2))
    assert is_q_normal(cube(3))


def test_contra_example_not_q_normal():
    X, L = gen_contra(2)
    P = polytope_of_divisor(L)
    assert q_codegree(P) == Fraction(3, 2)
    assert nef_value(P) == 2
    assert not is_q_normal(P)
    assert codegree(P) == 2        # == ceil(mu), not ceil(q_codegree)+0


def test_spectral_value():
    P = simplex(3)
    D = divisor_of_polytope(P, normal_fan(P))
    assert spectral_value(D) == 4
    X, L = gen_contra(2)
    assert spectral_value(L) == Fraction(3, 2)
    X3, L3 = gen_contra(3)
    assert spectral_value(L3) == 2


def test_spectral_at_most_nef():
    for P in (simplex(2), simplex(2, 2), cube(2), cube(3),
              polytope_of_divisor(gen_contra(2)[1])):
        D = divisor_of_polytope(P, normal_fan(P))
        assert spectral_value(D) <= nef_value(P)


def test_codegree_via_adjoint():
    for P in (simplex(2), simplex(2, 2), simplex(3), cube(3),
              simplex(1, 3)):
        assert codegree_via_adjoint(P) == codegree(P)


def test_adjunction_report():
    rep = adjunction_report(simplex(2, 2))
    assert rep.sigma == Fraction(2, 3)
    assert rep.q_codegree == Fraction(3, 2)
    assert rep.nef_value == Fraction(3, 2)
    assert rep.is_q_normal
    assert rep.codegree == 2
    assert rep.ceil_check
    assert rep.lambda_ == Fraction(2, 3)


coord = st.integers(min_value=-3, max_value=3)


@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=6))
@settings(max_examples=50, deadline=None)
def test_thresholds_ordered(pts):
    try:
        P = Polytope.from_vertices(pts)
    except ValueError:
        return
    qc = q_codegree(P)
    assert ceil(qc) <= codegree(P)
    try:
        tau = nef_value(P)
    except ValueError:
        return  # normal fan not simplicial
    assert qc <= tau
    D = divisor_of_polytope(P, normal_fan(P))
    assert spectral_value(D) <= tau


@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=6),
       st.integers(min_value=1, max_value=3))
@settings(max_examples=50, deadline=None)
def test_sigma_scales_with_dilation(pts, k):
    try:
        P = Polytope.from_vertices(pts)
    except ValueError:
        return
    assert sigma_value(P.dilate(k)) == k * sigma_value(P)
