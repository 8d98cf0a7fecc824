from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from toriclab.catalog import gen_contra
from toriclab.cayley import (BundleSpec, CayleySpec, HypothesisViolation,
                             ample_on_bundle, build_cayley, bundle_fan,
                             cayley_smooth_check, classify,
                             closed_form_invariants, simplex)
from toriclab.divisors import polytope_of_divisor
from toriclab.polyhedral import (Fan, Polytope, fan_isomorphic,
                                 polytope_is_smooth)


def hirzebruch(a):
    return Fan.from_cones(2, [(1, 0), (0, 1), (-1, a), (0, -1)],
                          [(0, 1), (1, 2), (2, 3), (3, 0)])


def unit_cube(n):
    return Polytope.from_vertices(
        [tuple((m >> i) & 1 for i in range(n)) for m in range(2 ** n)])


# ---------------------------------------------------------------------------
# construction

def test_build_cayley_shape():
    P = build_cayley(CayleySpec(1, (simplex(1), simplex(1))))
    assert P.dim == 2 and len(P.vertices) == 4      # unit square
    Q = build_cayley(CayleySpec(2, (simplex(2, 1), simplex(2, 3))))
    assert Q.dim == 3
    assert (0, 0, 0) in Q.vertices and (3, 0, 2) in Q.vertices


def test_cayley_spec_validation():
    with pytest.raises(ValueError, match="positive"):
        CayleySpec(0, (simplex(1), simplex(1)))
    with pytest.raises(ValueError, match="two factors"):
        CayleySpec(1, (simplex(1),))
    with pytest.raises(ValueError, match="dimension"):
        CayleySpec(1, (simplex(1), simplex(2)))
    sheared = Polytope.from_vertices([(0, 0), (1, 0), (1, 1)])
    with pytest.raises(ValueError, match="normal fans"):
        CayleySpec(1, (simplex(2), sheared), strict=True)


def test_simplex_helper():
    assert simplex(0).dim == 0
    assert simplex(3, 2).dim == 3
    with pytest.raises(ValueError):
        simplex(2, 0)


# ---------------------------------------------------------------------------
# smoothness criterion

def test_smooth_check_divisibility():
    ok, wit = cayley_smooth_check(
        CayleySpec(2, (simplex(1, 1), simplex(1, 3)), strict=True))
    assert ok
    assert wit["l_twist"] == (-1, 0)
    bad, info = cayley_smooth_check(
        CayleySpec(2, (simplex(1, 1), simplex(1, 2)), strict=True))
    assert not bad
    assert info["base_smooth"]
    assert info["bad_differences"]


def test_smooth_check_needs_strict():
    with pytest.raises(ValueError, match="strict"):
        cayley_smooth_check(CayleySpec(1, (simplex(1), simplex(1))))


def test_smooth_check_matches_polytope():
    for s in (1, 2, 3):
        for degs in combinations_with_replacement((1, 2, 3), 2):
            spec = CayleySpec(
                s, tuple(simplex(1, d) for d in degs), strict=True)
            ok, _ = cayley_smooth_check(spec)
            assert ok == polytope_is_smooth(build_cayley(spec))
    spec = CayleySpec(2, (simplex(2, 2), simplex(2, 4)), strict=True)
    ok, _ = cayley_smooth_check(spec)
    assert ok == polytope_is_smooth(build_cayley(spec))


# ---------------------------------------------------------------------------
# closed forms

def test_closed_form_spot_values():
    assert closed_form_invariants(1, 1, 1, (3, 3)) == (2, 2, True)
    assert closed_form_invariants(2, 1, 2, (1, 1, 3)) == (
        Fraction(3, 2), Fraction(3, 2), True)
    assert closed_form_invariants(1, 2, 1, (1, 2)) == (2, 2, True)
    tau, mu, qn = closed_form_invariants(1, 3, 1, (1, 2))
    assert (tau, mu, qn) == (3, Fraction(5, 2), False)


def test_closed_form_validation():
    with pytest.raises(ValueError, match="k\\+1"):
        closed_form_invariants(1, 1, 1, (1,))
    with pytest.raises(ValueError, match="degrees must"):
        closed_form_invariants(1, 1, 1, (2, 1))
    with pytest.raises(ValueError, match="divide"):
        closed_form_invariants(2, 1, 1, (1, 2))


def test_ample_on_bundle_matches_cayley():
    P = ample_on_bundle(1, 1, (0, 1), 1)
    model = build_cayley(CayleySpec(1, (simplex(1, 1), simplex(1, 2))))
    assert P == model
    P2 = ample_on_bundle(2, 3, (1, 1, 2), 2)
    assert P2.dim == 4


def test_ample_on_bundle_validation():
    with pytest.raises(ValueError, match="two bundle degrees"):
        ample_on_bundle(1, 1, (2,), 1)
    with pytest.raises(ValueError, match="nondecreasing"):
        ample_on_bundle(1, 1, (2, 1), 1)
    with pytest.raises(ValueError, match="non-ample"):
        ample_on_bundle(1, -1, (1, 2), 1)


def test_bundle_fan_hirzebruch():
    for a in (0, 1, 2, 3):
        F = bundle_fan(BundleSpec(
            Fan.from_cones(1, [(1,), (-1,)], [(0,), (1,)]),
            ((0, 0), (0, a))))
        assert fan_isomorphic(F, hirzebruch(a))


# ---------------------------------------------------------------------------
# the classifier

def test_classify_dilated_simplices():
    r = classify(simplex(2, 2))
    assert (r.label, r.n, r.s, r.k) == ("2Delta_n", 2, 2, 2)
    assert r.tau == Fraction(3, 2)
    r4 = classify(simplex(4, 2))
    assert (r4.label, r4.s) == ("2Delta_n", 2)
    r33 = classify(simplex(3, 3))
    assert (r33.label, r33.s, r33.tau) == ("3Delta_3", 3, Fraction(4, 3))


def test_classify_unit_simplices():
    for n in (2, 3, 4):
        r = classify(simplex(n))
        assert (r.label, r.k, r.s) == ("Cayley^1", n, 1)
        assert r.tau == n + 1
        assert all(F.dim == 0 for F in r.factors)


def test_classify_segments():
    for s in (1, 2, 5):
        r = classify(simplex(1, s))
        assert (r.label, r.s, r.tau) == ("sDelta_1", s, Fraction(2, s))


def test_classify_cayley_one():
    P = build_cayley(CayleySpec(1, (simplex(1, 1), simplex(1, 2))))
    r = classify(P)
    assert (r.label, r.k, r.s) == ("Cayley^1", 1, 1)
    lens = sorted(max(F.vertices)[0] for F in r.factors)
    assert lens == [1, 2]


def test_classify_cube_as_cayley():
    r = classify(unit_cube(3))
    assert (r.label, r.k, r.s) == ("Cayley^1", 1, 1)
    assert sorted(len(F.vertices) for F in r.factors) == [4, 4]


def test_classify_cayley_two_odd():
    P = build_cayley(CayleySpec(
        2, (simplex(1, 1), simplex(1, 1), simplex(1, 3))))
    r = classify(P)
    assert (r.label, r.n, r.k, r.s) == ("Cayley^2-odd", 3, 2, 2)
    assert r.degrees == (1, 1, 3)
    assert r.tau == Fraction(3, 2)


def test_classify_round_trip_rebuild():
    P = build_cayley(CayleySpec(1, (simplex(2, 1), simplex(2, 2))))
    r = classify(P)
    assert r.label == "Cayley^1"
    Q = build_cayley(CayleySpec(r.s, r.factors))
    r2 = classify(Q)
    assert (r2.label, r2.k, r2.s, r2.tau) == (r.label, r.k, r.s, r.tau)


def test_classify_rejects_non_smooth():
    P = Polytope.from_vertices([(0, 0), (1, 0), (0, 2)])
    with pytest.raises(HypothesisViolation) as e:
        classify(P)
    assert e.value.which == "smoothness"
    assert "unimodular" in e.value.detail


def test_classify_rejects_low_codegree():
    with pytest.raises(HypothesisViolation) as e:
        classify(simplex(2, 3))
    assert e.value.which == "codegree"


def test_classify_rejects_non_q_normal():
    _, L = gen_contra(2)
    Q = polytope_of_divisor(L)
    P = Polytope.from_vertices([tuple(int(x) for x in v) for v in Q.vertices])
    with pytest.raises(HypothesisViolation) as e:
        classify(P)
    assert e.value.which == "Q-normality"
