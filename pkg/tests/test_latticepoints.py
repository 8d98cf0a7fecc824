from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriclab.latticepoints import (HStarPolynomial, codegree, degree,
                                    ehrhart_count, h_star,
                                    interior_lattice_points, lattice_points,
                                    normalized_volume, triangulation_volume)
from toriclab.polyhedral import Polytope


def simplex(n, d=1):
    vs = [tuple(0 for _ in range(n))]
    vs += [tuple(d if i == j else 0 for i in range(n)) for j in range(n)]
    return Polytope.from_vertices(vs)


def cube(n):
    vs = [tuple((m >> i) & 1 for i in range(n)) for m in range(2 ** n)]
    return Polytope.from_vertices(vs)


def test_counts():
    assert len(lattice_points(simplex(2))) == 3
    assert len(lattice_points(simplex(2, 2))) == 6
    assert len(lattice_points(cube(3))) == 8
    assert interior_lattice_points(simplex(2, 2)) == []
    assert interior_lattice_points(simplex(2, 3)) == [(1, 1)]


def test_ehrhart_simplex():
    for k in range(5):
        assert ehrhart_count(simplex(2), k) == comb(k + 2, 2)
        assert ehrhart_count(simplex(3), k) == comb(k + 3, 3)


def test_codegree_degree():
    for n in (1, 2, 3, 4):
        assert codegree(simplex(n)) == n + 1
        assert degree(simplex(n)) == 0
    assert codegree(simplex(2, 2)) == 2
    assert codegree(cube(2)) == 2 and codegree(cube(3)) == 2
    assert degree(cube(3)) == 2


def test_h_star_values():
    assert h_star(simplex(3)).coefficients == (1,)
    assert h_star(simplex(2, 2)).coefficients == (1, 3)
    assert h_star(cube(2)).coefficients == (1, 1)
    assert h_star(cube(3)).coefficients == (1, 4, 1)
    # Reeve simplex: volume grows but no new lattice points
    for q in (2, 3, 5):
        R = Polytope.from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0),
                                    (1, 1, q)])
        assert h_star(R).coefficients == (1, 0, q - 1)


def test_h_star_validation():
    with pytest.raises(ValueError):
        HStarPolynomial((2, 1))
    with pytest.raises(ValueError):
        HStarPolynomial((1, -1))
    with pytest.raises(ValueError):
        HStarPolynomial((1, 1, 0))


def test_volumes():
    assert normalized_volume(simplex(4)) == 1
    assert normalized_volume(cube(3)) == 6
    assert triangulation_volume(cube(3)) == 6
    assert normalized_volume(simplex(2, 3)) == 9


coord = st.integers(min_value=-3, max_value=3)


def hull(pts):
    try:
        return Polytope.from_vertices(pts)
    except ValueError:
        return None


@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=6))
@settings(max_examples=60, deadline=None)
def test_two_routes_to_volume(pts):
    P = hull(pts)
    if P is None:
        return
    assert normalized_volume(P) == triangulation_volume(P)


@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=6),
       st.integers(min_value=1, max_value=3))
@settings(max_examples=60, deadline=None)
def test_volume_scales(pts, k):
    P = hull(pts)
    if P is None:
        return
    assert normalized_volume(P.dilate(k)) == k ** 2 * normalized_volume(P)


@given(st.lists(st.tuples(coord, coord, coord), min_size=4, max_size=6),
       st.integers(min_value=1, max_value=3))
@settings(max_examples=40, deadline=None)
def test_ehrhart_reciprocity(pts, k):
    """#int(kP) = sum_i h*_i C(k+i-1, n): checks the strict scan against the
    h* data obtained from non-strict counts."""
    P = hull(pts)
    if P is None:
        return
    hs = h_star(P).coefficients
    n = P.dim
    expected = sum(c * comb(k + i - 1, n) for i, c in enumerate(hs))
    verts = [tuple(k * x for x in v) for v in P.vertices]
    facets = [(eta, k * a) for eta, a in P.facets]
    from toriclab.latticepoints import points_in_system
    assert len(points_in_system(facets, verts, strict=True)) == expected


@given(st.lists(st.tuples(coord, coord, coord), min_size=4, max_size=6))
@settings(max_examples=40, deadline=None)
def test_h_star_predicts_beyond_interpolation(pts):
    """f(n+1) and f(n+2) are not used to build h*; they must still match."""
    P = hull(pts)
    if P is None:
        return
    hs = h_star(P).coefficients
    n = P.dim
    for k in (n + 1, n + 2):
        assert ehrhart_count(P, k) == \
            sum(c * comb(k + n - i, n) for i, c in enumerate(hs))
