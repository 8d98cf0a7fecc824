"""Curve classes, intersection numbers, and the cone quartet Nef/Mori/Eff/Mov.

Curve-class space N_1 is coordinatized by a fixed kernel basis of the ray
matrix; relation vectors are stored in full length (one entry per ray), so
intersecting a divisor with a relation is a plain dot product.  Divisor-class
space uses the coordinates from the divisors module.  All four cones carry
explicit generators plus an extremal-ray list, both exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import dot, kernel_basis, primitive, rank, rat_solve
from .polyhedral import dual_generators, walls
from .divisors import TDivisor, _class_setup, class_of, ray_divisor


@dataclass(frozen=True)
class RelationClass:
    """A curve class, recorded as a relation sum(coeffs[rho] * v_rho) = 0.

    The coefficient at rho equals D_rho . C for the class C.
    """

    fan: object
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(Fraction(c) for c in self.coeffs))
        n = self.fan.rank
        for i in range(n):
            if sum(c * v[i] for c, v in zip(self.coeffs, self.fan.rays)) != 0:
                raise ValueError("coefficients are not a relation among rays")


@dataclass(frozen=True)
class ConeInClassSpace:
    dim: int
    generators: tuple
    extremal_rays: tuple = None


def _n1_basis(fan):
    """Fixed basis of relations among the rays (rows, full length).

    Keyed on the ray tuple, not the fan: fan equality ignores ray order,
    but these coordinates do not."""
    return _n1_basis_for(fan.rank, fan.rays)


@lru_cache(maxsize=None)
def _n1_basis_for(rank_, rays):
    rows = [[v[i] for v in rays] for i in range(rank_)]
    return kernel_basis(rows)


def _to_n1_coords(fan, vec):
    basis = _n1_basis(fan)
    A = [[b[i] for b in basis] for i in range(len(vec))]
    y = rat_solve(A, list(vec))
    if y is None:
        raise ValueError("vector is not a relation among the rays")
    return tuple(y)


def _from_n1_coords(fan, y):
    basis = _n1_basis(fan)
    r = len(fan.rays)
    return tuple(sum(Fraction(yi) * b[j] for yi, b in zip(y, basis))
                 for j in range(r))


def _quotient_index(fan, wall_rays, v):
    """Index of the image of v in the rank-one quotient by the wall span."""
    sub = [list(fan.rays[i]) for i in wall_rays]
    if not sub:
        sub = [[0] * fan.rank]
    funcs = kernel_basis(sub)
    if len(funcs) != 1:
        raise ValueError("wall span does not have corank one")
    return abs(dot(funcs[0], v))


def curve_class(fan, wall):
    """The class of V(omega) for a wall omega, normalized so that the
    coefficient at each of the two off-wall rays is 1/multiplicity index.

    `wall` may be a frozenset of ray indices or the triple from walls().
    """
    if isinstance(wall, tuple):
        wcone, s1, s2 = wall
        widx = frozenset(wcone.ray_indices)
        c1, c2 = frozenset(s1.ray_indices), frozenset(s2.ray_indices)
    else:
        widx = frozenset(wall)
        incident = [frozenset(c) for c in fan.max_index_sets
                    if widx < frozenset(c)]
        if len(incident) != 2:
            raise ValueError("not a wall of the fan")
        c1, c2 = incident
    extra = sorted(c1 - widx) + sorted(c2 - widx)
    if len(extra) != 2:
        raise ValueError("wall must have exactly one extra ray on each side")
    order = sorted(widx) + extra
    cols = [fan.rays[i] for i in order]
    ker = kernel_basis([[v[i] for v in cols] for i in range(fan.rank)])
    if len(ker) != 1:
        raise ValueError("wall relation is not one-dimensional")
    rel = ker[0]
    na, nb = extra
    sa = _quotient_index(fan, sorted(widx), fan.rays[na])
    sb = _quotient_index(fan, sorted(widx), fan.rays[nb])
    pos_a = order.index(na)
    scale = Fraction(1, sa) / Fraction(rel[pos_a])
    rel = [Fraction(x) * scale for x in rel]
    if rel[order.index(nb)] != Fraction(1, sb):
        raise RuntimeError("inconsistent wall normalization")
    full = [Fraction(0)] * len(fan.rays)
    for pos, i in enumerate(order):
        full[i] = rel[pos]
    return RelationClass(fan, tuple(full))


def intersect(D, c):
    """D . C as an exact rational for a divisor and a relation class."""
    if D.fan != c.fan:
        raise ValueError("fan mismatch")
    return sum(a * b for a, b in zip(D.coeffs, c.coeffs))


def _prim_gens(gens):
    prim = []
    for g in gens:
        if any(g):
            p = primitive(g)
            if p not in prim:
                prim.append(p)
    return prim


def _extremal_rays(gens, n):
    """Extremal rays of a pointed cone given (possibly redundant) generators.

    A generator is extremal iff its active dual generators cut a
    one-dimensional face, i.e. have rank n - 1.
    """
    prim = _prim_gens(gens)
    if not prim:
        return ()
    normals = dual_generators(prim, n)
    out = []
    for g in prim:
        active = [list(u) for u in normals if dot(u, g) == 0]
        if (rank(active) if active else 0) == n - 1:
            out.append(g)
    return tuple(sorted(out))


def mori_cone(fan):
    """Cone of curves, generated by the wall classes; coords are full
    relation vectors."""
    gens = []
    for w in walls(fan):
        c = curve_class(fan, w)
        if c.coeffs not in gens:
            gens.append(c.coeffs)
    rho = len(fan.rays) - fan.rank
    ys = [_to_n1_coords(fan, g) for g in gens]
    ext_y = _extremal_rays(ys, rho)
    ext = tuple(sorted(primitive(_from_n1_coords(fan, y)) for y in ext_y))
    return ConeInClassSpace(len(fan.rays), tuple(gens), ext)


def is_nef(D):
    return all(intersect(D, curve_class(D.fan, w)) >= 0 for w in walls(D.fan))


def is_ample(D):
    fan = D.fan
    from .polyhedral import is_simplicial, is_complete
    if not (is_complete(fan) and is_simplicial(fan)):
        raise ValueError("ampleness test needs a complete simplicial fan")
    return all(intersect(D, curve_class(fan, w)) > 0 for w in walls(fan))


def nef_cone(fan):
    """Nef cone in divisor-class coordinates."""
    _, _, free = _class_setup(fan)
    rho = len(free)
    halfspaces = _prim_gens(tuple(curve_class(fan, w).coeffs[j] for j in free)
                            for w in walls(fan))
    gens = dual_generators(halfspaces, rho)
    return ConeInClassSpace(rho, tuple(gens), _extremal_rays(gens, rho))


def eff_cone(fan):
    """Pseudo-effective cone: spanned by the ray-divisor classes."""
    _, _, free = _class_setup(fan)
    rho = len(free)
    gens = tuple(class_of(ray_divisor(fan, i)).coords
                 for i in range(len(fan.rays)))
    return ConeInClassSpace(rho, gens, _extremal_rays(gens, rho))


def mov_cone(fan):
    """Moving cone of curves = dual of Eff; coords are full relation vectors."""
    return dual_in_n1(fan, eff_cone(fan))


def dual_in_n1(fan, cone):
    """Dual of a divisor-class cone, expressed as full relation vectors.

    A class alpha pairs with a relation c as sum(alpha_j * c_j) over the
    non-pivot columns, so on N_1 coordinates y (with c = sum y_i b_i) the
    class acts through the functional (sum_j alpha_j b_i[j])_i.
    """
    basis = _n1_basis(fan)
    _, _, free = _class_setup(fan)
    funcs = [tuple(sum(Fraction(g[t]) * b[j] for t, j in enumerate(free))
                   for b in basis)
             for g in cone.generators]
    ys = dual_generators(_prim_gens(funcs), len(basis))
    gens = tuple(sorted(primitive(_from_n1_coords(fan, y)) for y in ys))
    return ConeInClassSpace(len(fan.rays), gens, gens)


def dual_in_class_space(fan, cone):
    """Dual of a curve cone (full relation vectors) in class coordinates."""
    _, _, free = _class_setup(fan)
    rho = len(free)
    hs = _prim_gens(tuple(Fraction(g[j]) for j in free)
                    for g in cone.generators)
    gens = dual_generators(hs, rho)
    return ConeInClassSpace(rho, tuple(gens), _extremal_rays(gens, rho))


def cone_contains(cone, vec):
    """Exact membership test against the generator description."""
    gens = _prim_gens(cone.generators)
    if not gens:
        return not any(Fraction(x) for x in vec)
    n = len(vec)
    for u in dual_generators(gens, n):
        if dot(u, vec) < 0:
            return False
    return True
