from fractions import Fraction

import pytest

from toriclab.catalog import gen_contra, gen_projective_space
from toriclab.divisors import canonical_divisor, picard_rank
from toriclab.intersection import RelationClass, intersect, mori_cone
from toriclab.mmp import (all_mmp_runs, contract, eff_extremal_flags,
                          fiber_fan_on_support, flip, minimal_relations,
                          mov_extremal_rays, run_mmp)
from toriclab.polyhedral import (Cone, Fan, fan_isomorphic, is_complete,
                                 is_simplicial, product_fan)


def hirzebruch(a):
    return Fan.from_cones(2, [(1, 0), (0, 1), (-1, a), (0, -1)],
                          [(0, 1), (1, 2), (2, 3), (3, 0)])


def p1xp1():
    return product_fan(gen_projective_space(1), gen_projective_space(1))


def flip_fan():
    # two K-negative rays; the relation 3a + 3b = 2c + 2d across the
    # {c,d} wall has two negative coefficients, forcing a flip
    rays = [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 2), (0, 0, -1)]
    cones = [(0, 2, 3), (1, 2, 3), (0, 2, 4), (1, 2, 4), (1, 3, 4), (0, 3, 4)]
    return Fan.from_cones(3, rays, cones)


def test_pn_immediate_fiber_end():
    tr = run_mmp(gen_projective_space(2))
    assert [s.kind for s in tr.steps] == ["fiber-end"]
    assert tr.end_kind == "fiber-end"
    step = tr.steps[0]
    assert tuple(step.relation) == (1, 1, 1)
    assert step.after.rank == 0
    assert fan_isomorphic(step.detail.fiber_fan, gen_projective_space(2))


def test_f1_divisorial_then_fiber():
    tr = run_mmp(hirzebruch(1))
    assert [s.kind for s in tr.steps] == ["divisorial", "fiber-end"]
    first = tr.steps[0]
    assert first.detail.alpha == 1 and first.detail.beta == 1
    assert sum(1 for c in first.relation if c < 0) == 1
    assert len(first.after.rays) == 3
    assert fan_isomorphic(first.after, gen_projective_space(2))
    assert tr.steps[1].after.rank == 0


def test_f0_fiber_end():
    F = p1xp1()
    tr = run_mmp(F)
    assert tr.end_kind == "fiber-end"
    last = tr.steps[-1]
    assert last.detail.kind == "fiber"
    # contracts one ruling onto the other P^1
    assert last.after.rank == 1 and len(last.after.rays) == 2
    assert fan_isomorphic(last.detail.fiber_fan, gen_projective_space(1))
    runs = all_mmp_runs(F)
    assert len(runs) == 2
    assert all(t.end_kind == "fiber-end" for t in runs)


def test_f2_ends_nef_free():
    # F_2 still has K non-nef; its program contracts a ruling
    tr = run_mmp(hirzebruch(2))
    assert tr.end_kind == "fiber-end"


def test_flip_step():
    F = flip_fan()
    mc = mori_cone(F)
    K = canonical_divisor(F)
    assert all(intersect(K, RelationClass(F, r)) < 0 for r in mc.extremal_rays)
    small = next(r for r in mc.extremal_rays if any(c < 0 for c in r))
    res = contract(F, small)
    assert res.kind == "small"
    assert res.alpha == 2 and res.beta == 2
    # the small target keeps every ray but is no longer simplicial
    assert res.target.rays == F.rays
    assert not is_simplicial(res.target)

    G = flip(F, small)
    assert set(G.rays) == set(F.rays)
    assert is_complete(G) and is_simplicial(G)
    assert len(G.max_index_sets) == len(F.max_index_sets)
    assert set(map(frozenset, G.max_index_sets)) != \
        set(map(frozenset, F.max_index_sets))
    # the flipped wall class turns K-positive
    KG = canonical_divisor(G)
    back = tuple(-c for c in small)
    assert back in mori_cone(G).extremal_rays
    assert intersect(KG, RelationClass(G, back)) > 0


def test_flip_run_terminates():
    tr = run_mmp(flip_fan())
    assert [s.kind for s in tr.steps] == ["flip", "fiber-end"]
    runs = all_mmp_runs(flip_fan())
    assert len(runs) == 2
    assert all(t.end_kind == "fiber-end" for t in runs)


def test_flip_requires_small():
    F = hirzebruch(1)
    div = next(r for r in mori_cone(F).extremal_rays if any(c < 0 for c in r))
    with pytest.raises(ValueError, match="small"):
        flip(F, div)


def test_contract_rejects_non_extremal():
    F = gen_projective_space(2)
    with pytest.raises(ValueError, match="extremal"):
        contract(F, (1, 0, 1))


def test_policy_validation():
    F = p1xp1()

    def bad_policy(fan, cands):
        return RelationClass(fan, (1, 1, 1, 1))

    with pytest.raises(ValueError, match="policy"):
        run_mmp(F, policy=bad_policy)


def test_contra_census():
    X, _ = gen_contra(2)
    runs = all_mmp_runs(X)
    assert len(runs) == 6
    kinds = sorted(t.end_kind for t in runs)
    assert set(kinds) == {"fiber-end"}
    fibers = {len(t.steps[-1].detail.fiber_fan.rays) for t in runs}
    assert fibers  # at least one fiber geometry observed


def test_minimal_relations_counts():
    assert len(minimal_relations(gen_projective_space(2))) == 1
    m = minimal_relations(gen_projective_space(2))[0]
    assert m.support == (0, 1, 2) and m.coeffs == (1, 1, 1)
    assert len(minimal_relations(p1xp1())) == 2
    assert len(minimal_relations(hirzebruch(1))) == 2
    F = flip_fan()
    rels = {(m.support, m.coeffs) for m in minimal_relations(F)}
    assert rels == {((0, 1, 4), (1, 1, 2)), ((2, 3, 4), (1, 1, 3))}


def test_minimal_relation_full_vector():
    F = hirzebruch(1)
    for m in minimal_relations(F):
        v = m.full_vector(F)
        assert len(v) == len(F.rays)
        s = [Fraction(0)] * F.rank
        for c, ray in zip(v, F.rays):
            for j in range(F.rank):
                s[j] += c * ray[j]
        assert all(x == 0 for x in s)


def test_mov_extremal_rays_fibers():
    F = hirzebruch(1)
    pairs = mov_extremal_rays(F)
    assert len(pairs) == 2
    for m, fib in pairs:
        assert is_complete(fib)
        assert fib.rank == len(m.support) - 1
        assert len(fib.rays) == len(m.support)


def test_fiber_fan_on_support():
    F = gen_projective_space(3)
    fib = fiber_fan_on_support(F, (0, 1, 2, 3))
    assert fan_isomorphic(fib, gen_projective_space(3))


def test_eff_extremal_flags_f1():
    flags = eff_extremal_flags(hirzebruch(1))
    assert flags == {0: True, 1: True, 2: True, 3: False}
    assert picard_rank(hirzebruch(1)) == 2


def test_eff_extremal_flags_pn():
    for n in (1, 2, 3):
        flags = eff_extremal_flags(gen_projective_space(n))
        assert all(flags.values())
