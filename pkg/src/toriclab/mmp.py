"""Toric minimal model program: extremal contractions as fan surgery.

A wall relation sum(a_i v_i) = 0 over the fused cone sigma(omega), with
coefficients ordered (negative | zero | positive), drives the trichotomy:
no negatives -> fiber contraction, one -> divisorial, more -> small (flip).
Also: minimal relations (positive circuits), the moving-cone description
they generate, and the effective-cone extremality criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import dot, kernel_basis, primitive, rank, rat_solve, transpose_rows
from .polyhedral import Cone, Fan, is_complete, is_simplicial, quotient_map, walls
from .divisors import canonical_divisor, picard_rank
from .intersection import RelationClass, curve_class, intersect, is_nef, mori_cone


@dataclass(frozen=True)
class ContractionResult:
    kind: str                      # 'fiber' | 'divisorial' | 'small'
    alpha: int
    beta: int
    target: Fan
    U_cone: Cone
    contracted_relation: RelationClass
    fiber_fan: Fan = None          # general fiber, fiber kind only


@dataclass(frozen=True)
class MMPStep:
    before: Fan
    relation: tuple
    kind: str                      # 'divisorial' | 'flip' | 'fiber-end' | 'nef-end'
    after: Fan
    detail: ContractionResult = None


@dataclass(frozen=True)
class MMPTrace:
    steps: tuple

    @property
    def end_kind(self):
        return self.steps[-1].kind


@dataclass(frozen=True)
class MinimalRelation:
    support: tuple                 # ray indices, increasing
    coeffs: tuple                  # positive rationals, first = 1

    def full_vector(self, fan):
        out = [Fraction(0)] * len(fan.rays)
        for i, c in zip(self.support, self.coeffs):
            out[i] = c
        return tuple(out)


def _saturated_span_basis(vectors):
    """Lattice basis of the saturation of span(vectors)."""
    ker = kernel_basis([list(v) for v in vectors])
    if not ker:
        n = len(vectors[0])
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return [list(v) for v in kernel_basis([list(v) for v in ker])]


def _coords_in(basis, v):
    A = transpose_rows(basis)
    x = rat_solve(A, list(v))
    if x is None or any(c.denominator != 1 for c in x):
        raise RuntimeError("vector outside saturated span")
    return tuple(int(c) for c in x)


def fiber_fan_on_support(fan, support):
    """The complete fan spanned by the support rays of a positive relation:
    maximal cones drop one ray at a time; expressed in a lattice basis of
    the saturated span."""
    vecs = [fan.rays[i] for i in support]
    basis = _saturated_span_basis(vecs)
    coords = [_coords_in(basis, v) for v in vecs]
    k = len(basis)
    sets = [tuple(j for j in range(len(support)) if j != drop)
            for drop in range(len(support))]
    return Fan.from_cones(k, coords, sets)


def _project_fan(fan, support):
    """Image fan under the quotient by the span of the support rays."""
    proj = quotient_map([list(fan.rays[i]) for i in support], fan.rank)
    new_rank = len(proj)
    if new_rank == 0:
        return Fan.from_cones(0, (), [()])
    images = []
    ray_of = {}
    for v in fan.rays:
        w = tuple(dot(r, v) for r in proj)
        if any(w):
            w = primitive(w)
            if w not in images:
                images.append(w)
            ray_of[v] = images.index(w)
    sets = set()
    for s in fan.max_index_sets:
        img = frozenset(ray_of[fan.rays[i]] for i in s if fan.rays[i] in ray_of)
        sets.add(img)
    sets = [s for s in sets if not any(s < t for t in sets)]
    return Fan.from_cones(new_rank, images, [tuple(sorted(s)) for s in sets])


def _r_walls(fan, R):
    """All walls whose curve class lies on the ray R (a relation vector)."""
    target = primitive(R)
    out = []
    for w in walls(fan):
        c = curve_class(fan, w)
        if primitive(c.coeffs) == target:
            out.append((w, c))
    return out


def contract(fan, R):
    """Contract the extremal ray R per the wall-relation sign pattern."""
    if not is_simplicial(fan):
        raise ValueError("contraction needs a simplicial fan")
    coeffs = R.coeffs if isinstance(R, RelationClass) else tuple(R)
    mc = mori_cone(fan)
    if primitive(coeffs) not in mc.extremal_rays:
        raise ValueError("ray is not extremal")
    rws = _r_walls(fan, primitive(coeffs))
    if not rws:
        raise ValueError("no wall realizes this ray")
    rel = rws[0][1]
    neg = tuple(i for i, c in enumerate(rel.coeffs) if c < 0)
    pos = tuple(i for i, c in enumerate(rel.coeffs) if c > 0)
    alpha = len(neg)
    # zeros counted within the fused cones only: rays of some sigma(omega)
    fused_sets = []
    replaced = set()
    for w, c in rws:
        a, b = (frozenset(s.ray_indices) for s in (w[1], w[2]))
        fused_sets.append(a | b)
        replaced.add(a)
        replaced.add(b)
        if (tuple(i for i, x in enumerate(c.coeffs) if x < 0),
                tuple(i for i, x in enumerate(c.coeffs) if x > 0)) != (neg, pos):
            raise RuntimeError("wall-dependent sign pattern")
    zero = sorted(set().union(*fused_sets) - set(neg) - set(pos))
    beta = alpha + len(zero)
    U = Cone.from_generators([fan.rays[i] for i in neg + pos])
    untouched = [frozenset(s) for s in fan.max_index_sets
                 if frozenset(s) not in replaced]

    if alpha == 0:
        target = _project_fan(fan, pos)
        return ContractionResult("fiber", 0, beta, target, U, rel,
                                 fiber_fan_on_support(fan, pos))

    if alpha == 1:
        v1 = neg[0]
        if any(v1 in s for s in untouched):
            raise RuntimeError("contraction star not covered by walls")
        keep = [i for i in range(len(fan.rays)) if i != v1]
        renum = {old: new for new, old in enumerate(keep)}
        sets = {frozenset(renum[i] for i in f - {v1}) for f in fused_sets}
        sets |= {frozenset(renum[i] for i in s) for s in untouched}
        target = Fan.from_cones(fan.rank, [fan.rays[i] for i in keep],
                                [tuple(sorted(s)) for s in sets])
        if not is_complete(target):
            raise RuntimeError("divisorial target is not complete")
        return ContractionResult("divisorial", 1, beta, target, U, rel)

    sets = {frozenset(f) for f in fused_sets} | set(untouched)
    target = Fan.from_cones(fan.rank, fan.rays,
                            [tuple(sorted(s)) for s in sets])
    return ContractionResult("small", alpha, beta, target, U, rel)


def flip(fan, R):
    """The opposite small modification: re-triangulate each fused cone by
    dropping negative-coefficient rays instead of positive ones."""
    coeffs = R.coeffs if isinstance(R, RelationClass) else tuple(R)
    res = contract(fan, coeffs)
    if res.kind != "small":
        raise ValueError("flip needs a small contraction")
    rel = res.contracted_relation
    neg = [i for i, c in enumerate(rel.coeffs) if c < 0]
    rws = _r_walls(fan, primitive(coeffs))
    replaced = set()
    fused = []
    for w, _ in rws:
        a, b = (frozenset(s.ray_indices) for s in (w[1], w[2]))
        replaced |= {a, b}
        fused.append(a | b)
    sets = {frozenset(s) for s in fan.max_index_sets} - replaced
    for f in set(fused):
        for i in neg:
            sets.add(f - {i})
    out = Fan.from_cones(fan.rank, fan.rays, [tuple(sorted(s)) for s in sets])
    if not (is_complete(out) and is_simplicial(out)):
        raise RuntimeError("flip produced an invalid fan")
    return out


def default_policy(fan, candidates):
    """Prefer birational contractions (keep the program running), then the
    most K-negative ray, then lexicographic order."""
    K = canonical_divisor(fan)

    def key(c):
        fiber = all(x >= 0 for x in c.coeffs)
        return (fiber, intersect(K, c), c.coeffs)

    return min(candidates, key=key)


def _k_negative_rays(fan):
    K = canonical_divisor(fan)
    out = []
    for r in mori_cone(fan).extremal_rays:
        c = RelationClass(fan, r)
        if intersect(K, c) < 0:
            out.append(c)
    return out


def run_mmp(fan, policy=default_policy, _audit=False):
    steps = []
    current = fan
    for _ in range(10000):
        K = canonical_divisor(current)
        if is_nef(K):
            steps.append(MMPStep(current, (), "nef-end", current))
            return MMPTrace(tuple(steps))
        cands = _k_negative_rays(current)
        chosen = policy(current, cands)
        if chosen.coeffs not in {c.coeffs for c in cands}:
            raise ValueError("policy returned a non-extremal choice")
        res = contract(current, chosen)
        if _audit and res.kind != "small":
            assert is_complete(res.target)
        if res.kind == "fiber":
            steps.append(MMPStep(current, chosen.coeffs, "fiber-end",
                                 res.target, res))
            return MMPTrace(tuple(steps))
        if res.kind == "divisorial":
            steps.append(MMPStep(current, chosen.coeffs, "divisorial",
                                 res.target, res))
            current = res.target
        else:
            flipped = flip(current, chosen)
            steps.append(MMPStep(current, chosen.coeffs, "flip", flipped, res))
            current = flipped
    raise RuntimeError("MMP failed to terminate")


def all_mmp_runs(fan):
    """Every K-MMP run, branching over all K-negative extremal choices."""
    out = []

    def explore(current, steps):
        if len(steps) > 100:
            raise RuntimeError("MMP branch too deep")
        K = canonical_divisor(current)
        if is_nef(K):
            out.append(MMPTrace(tuple(steps)
                                + (MMPStep(current, (), "nef-end", current),)))
            return
        for chosen in sorted(_k_negative_rays(current),
                             key=lambda c: c.coeffs):
            res = contract(current, chosen)
            if res.kind == "fiber":
                out.append(MMPTrace(tuple(steps) + (MMPStep(
                    current, chosen.coeffs, "fiber-end", res.target, res),)))
            elif res.kind == "divisorial":
                explore(res.target, steps + [MMPStep(
                    current, chosen.coeffs, "divisorial", res.target, res)])
            else:
                flipped = flip(current, chosen)
                explore(flipped, steps + [MMPStep(
                    current, chosen.coeffs, "flip", flipped, res)])

    explore(fan, [])
    return out


def minimal_relations(fan):
    """All positive circuits of the ray configuration, normalized."""
    from itertools import combinations
    n = fan.rank
    r = len(fan.rays)
    out = []
    for size in range(2, n + 2):
        for S in combinations(range(r), size):
            vecs = [list(fan.rays[i]) for i in S]
            if rank(vecs) != size - 1:
                continue
            ker = kernel_basis([[v[i] for v in vecs] for i in range(n)])
            if len(ker) != 1:
                continue
            c = ker[0]
            if all(x > 0 for x in c) or all(x < 0 for x in c):
                c = [abs(Fraction(x)) for x in c]
                c = [x / c[0] for x in c]
                out.append(MinimalRelation(tuple(S), tuple(c)))
    return out


def mov_extremal_rays(fan):
    """Minimal relations paired with their general-fiber fans."""
    return [(m, fiber_fan_on_support(fan, m.support))
            for m in minimal_relations(fan)]


def eff_extremal_flags(fan):
    """Ray divisor [D_rho] extremal in Eff iff rho(X)-1 independent minimal
    relations avoid rho."""
    rho = picard_rank(fan)
    rels = minimal_relations(fan)
    flags = {}
    for i in range(len(fan.rays)):
        avoiding = [list(m.full_vector(fan)) for m in rels
                    if i not in m.support]
        flags[i] = (rank(avoiding) if avoiding else 0) == rho - 1
    return flags
