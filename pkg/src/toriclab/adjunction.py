"""Adjoint polytopes and adjunction thresholds.

For a full-dimensional polytope with facet data (eta_i, a_i) the adjoint
at level t moves every facet inward by t: {x : <x, eta_i> >= -a_i + t}.
sigma is the level where the adjoint empties out, lambda the level where
the normal fan first changes; their reciprocals are the Q-codegree and
the nef value of the associated polarized toric variety.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactmath import dot, rank, rat_solve
from .polyhedral import is_simplicial, normal_fan, vertices_from_facets, walls
from .latticepoints import codegree, points_in_system
from .divisors import canonical_divisor, divisor_of_polytope
from .intersection import curve_class, intersect, is_ample, mov_cone


@dataclass(frozen=True)
class AdjunctionReport:
    sigma: Fraction
    lambda_: Fraction
    q_codegree: Fraction
    nef_value: Fraction
    is_q_normal: bool
    codegree: int
    ceil_check: bool


def adjoint_polytope(P, t):
    """The inward-shifted polytope P^(t); may be empty or lower-dimensional."""
    t = Fraction(t)
    if t < 0:
        raise ValueError("adjoint level must be nonnegative")
    return vertices_from_facets([(eta, Fraction(a) - t) for eta, a in P.facets],
                                dim=P.dim)


def sigma_value(P):
    """Largest t with P^(t) nonempty, by exact LP basis enumeration."""
    n = P.dim
    rows = [list(eta) + [-1] for eta, _ in P.facets]
    rhs = [-Fraction(a) for _, a in P.facets]
    best = None
    for idx in combinations(range(len(rows)), n + 1):
        A = [rows[i] for i in idx]
        if rank(A) != n + 1:
            continue
        sol = rat_solve(A, [rhs[i] for i in idx])
        if sol is None:
            continue
        t = sol[n]
        if all(dot(r[:n], sol[:n]) - t >= b for r, b in zip(rows, rhs)):
            if best is None or t > best:
                best = t
    if best is None or best <= 0:
        raise ValueError("polytope is not full-dimensional")
    return best


def q_codegree(P):
    return 1 / sigma_value(P)


def _polarized(P):
    fan = normal_fan(P)
    if not is_simplicial(fan):
        raise ValueError("Q-Gorenstein check unsupported")
    return fan, divisor_of_polytope(P, fan)


def nef_value(P):
    """tau = inf{t : K + tL nef}, via wall ratios, then verified on the
    polytope side: the normal fan is unchanged just below 1/tau and
    changed just above."""
    fan, L = _polarized(P)
    K = canonical_divisor(fan)
    ws = walls(fan)
    tau = None
    for w in ws:
        c = curve_class(fan, w)
        lc = intersect(L, c)
        if lc <= 0:
            raise ValueError("polytope divisor is not ample on its normal fan")
        ratio = intersect(-1 * K, c) / lc
        if tau is None or ratio > tau:
            tau = ratio
    if tau is None or tau <= 0:
        raise RuntimeError("nef value must be positive")
    lam = 1 / tau
    eps = Fraction(1, 2 * lam.denominator * max(1, len(ws)))
    below = adjoint_polytope(P, lam * (1 - eps))
    if getattr(below, "is_empty", False) or normal_fan(below) != fan:
        raise RuntimeError("nef value failed combinatorial verification")
    above = adjoint_polytope(P, lam * (1 + eps))
    still_equal = (not getattr(above, "is_empty", True)
                   and getattr(above, "affine_dim", P.dim) == P.dim
                   and above.facets
                   and normal_fan(above) == fan)
    if still_equal:
        raise RuntimeError("nef value failed combinatorial verification")
    return tau


def lambda_value(P):
    return 1 / nef_value(P)


def spectral_value(D):
    """mu = inf{t : K + tD pseudo-effective}, for ample D."""
    if not is_ample(D):
        raise ValueError("divisor is not ample")
    fan = D.fan
    K = canonical_divisor(fan)
    best = Fraction(0)
    for c in mov_cone(fan).extremal_rays:
        lc = sum(a * b for a, b in zip(D.coeffs, c))
        if lc <= 0:
            raise RuntimeError("ample divisor non-positive on a moving class")
        ratio = -sum(a * b for a, b in zip(K.coeffs, c)) / lc
        if ratio > best:
            best = ratio
    return best


def is_q_normal(P):
    return q_codegree(P) == nef_value(P)


def codegree_via_adjoint(P):
    """min{k : (kP)^(1) contains a lattice point}; agrees with the
    interior-point codegree for lattice polytopes."""
    for k in range(1, P.dim + 2):
        adj = adjoint_polytope(P.dilate(k), 1)
        if getattr(adj, "is_empty", False):
            continue
        # the adjoint may have dropped dimension; rescan the shifted system
        system = [(eta, k * Fraction(a) - 1) for eta, a in P.facets]
        if points_in_system(system, adj.vertices):
            return k
    raise RuntimeError("codegree exceeded dim + 1")


def adjunction_report(P):
    sig = sigma_value(P)
    tau = nef_value(P)
    qc = 1 / sig
    codeg = codegree(P)
    return AdjunctionReport(
        sigma=sig,
        lambda_=1 / tau,
        q_codegree=qc,
        nef_value=tau,
        is_q_normal=qc == tau,
        codegree=codeg,
        ceil_check=codeg >= math.ceil(qc),
    )
