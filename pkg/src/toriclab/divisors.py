"""T-invariant divisors: characters, class group, divisor polytopes, Cartier data.

Class-group coordinates are fixed per fan: reduce a coefficient vector
modulo the row space of the ray matrix (over Q) and read the entries at
the non-pivot columns. Two divisors differing by div(chi^u) then get the
same coordinate vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactmath import dot, rat_solve, rref
from .polyhedral import vertices_from_facets


@dataclass(frozen=True)
class TDivisor:
    """A T-invariant Q-divisor, one coefficient per ray of the fan."""

    fan: object
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.fan.rays):
            raise ValueError("one coefficient per ray required")
        object.__setattr__(self, "coeffs",
                           tuple(Fraction(c) for c in self.coeffs))

    @property
    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __add__(self, other):
        if self.fan != other.fan:
            raise ValueError("fan mismatch")
        return TDivisor(self.fan,
                        tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self.fan != other.fan:
            raise ValueError("fan mismatch")
        return TDivisor(self.fan,
                        tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, t):
        return TDivisor(self.fan, tuple(Fraction(t) * c for c in self.coeffs))

    def __neg__(self):
        return TDivisor(self.fan, tuple(-c for c in self.coeffs))


@dataclass(frozen=True)
class DivisorClass:
    """Coordinates of a divisor class in the fixed basis of Cl(X) x Q."""

    fan: object
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(Fraction(c) for c in self.coords))


def _class_setup(fan):
    """(rref rows, pivot cols, non-pivot cols) of the n x r ray matrix.

    Keyed on the ray tuple, not the fan: fan equality ignores ray order,
    but these column positions do not."""
    return _class_setup_for(fan.rank, fan.rays)


@lru_cache(maxsize=None)
def _class_setup_for(rank_, rays):
    rows = [[v[i] for v in rays] for i in range(rank_)]
    R, pivots = rref(rows)
    free = [j for j in range(len(rays)) if j not in pivots]
    return tuple(tuple(r) for r in R[:len(pivots)]), tuple(pivots), tuple(free)


def picard_rank(fan):
    return len(_class_setup(fan)[2])


def ray_divisor(fan, i):
    return TDivisor(fan, tuple(1 if j == i else 0
                               for j in range(len(fan.rays))))


def divisor_of_character(fan, u):
    return TDivisor(fan, tuple(dot(u, v) for v in fan.rays))


def canonical_divisor(fan):
    return TDivisor(fan, (-1,) * len(fan.rays))


def class_of(D):
    R, pivots, free = _class_setup(D.fan)
    d = list(D.coeffs)
    for row, c in zip(R, pivots):
        f = d[c]
        if f:
            d = [a - f * b for a, b in zip(d, row)]
    return DivisorClass(D.fan, tuple(d[j] for j in free))


def class_coords(D):
    return class_of(D).coords


def pair_class_with_relation(cls, relation_coeffs):
    """Intersection number from class coordinates; relation is a full vector."""
    _, _, free = _class_setup(cls.fan)
    return sum(c * Fraction(relation_coeffs[j]) for c, j in zip(cls.coords, free))


def polytope_of_divisor(D):
    """P_D cut out by <u, v_rho> >= -a_rho; may be empty, low-dim, rational."""
    facets = [(v, a) for v, a in zip(D.fan.rays, D.coeffs)]
    return vertices_from_facets(facets, dim=D.fan.rank)


def divisor_of_polytope(P, fan):
    """The divisor of a polytope whose facet normals all appear among fan rays.

    Rays that support no facet of P get the tightest valid offset
    max(-<v, eta>), so P_D round-trips to P for complete fans.
    """
    by_normal = {tuple(eta): a for eta, a in P.facets}
    coeffs = []
    for v in fan.rays:
        if tuple(v) in by_normal:
            coeffs.append(by_normal[tuple(v)])
        else:
            coeffs.append(max(-dot(v, x) for x in P.vertices))
    return TDivisor(fan, tuple(coeffs))


def cartier_data(D):
    """Per maximal cone the u_sigma with <u_sigma, v_rho> = -a_rho on sigma(1)."""
    fan = D.fan
    data = {}
    integral = True
    for c in fan.max_cones:
        rows = [list(fan.rays[i]) for i in c.ray_indices]
        b = [-D.coeffs[i] for i in c.ray_indices]
        u = rat_solve(rows, b)
        if u is None:
            raise ValueError("not Q-Cartier here")
        data[c.ray_indices] = u
        if any(x.denominator != 1 for x in u):
            integral = False
    return data, integral


def is_cartier(D):
    return cartier_data(D)[1]
