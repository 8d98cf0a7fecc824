"""Deterministic generators for the example families: projective
spaces, decomposable projective bundles over them, the blow-up of
P^m x P^1 along a hyperplane inside a fiber, and the Losev-Manin fans
obtained from P^n by iterated star subdivisions.
"""

from __future__ import annotations

from itertools import combinations

from .cayley import BundleSpec, _pn_fan, bundle_fan
from .divisors import TDivisor
from .polyhedral import Cone, Fan, Polytope, star_subdivision


def gen_projective_space(n):
    """Fan of P^n: rays e_1..e_n and -(e_1+...+e_n), all n-subsets as
    maximal cones."""
    if n < 1:
        raise ValueError("n must be positive")
    return _pn_fan(n)


def gen_bundle_over_projective_space(m, degrees):
    """Fan of P(O(a_0) + ... + O(a_k)) over P^m, degrees nondecreasing."""
    degs = tuple(int(a) for a in degrees)
    if not degs:
        raise ValueError("need at least one degree")
    if degs[0] < 0 or any(degs[i] > degs[i + 1] for i in range(len(degs) - 1)):
        raise ValueError("ordering violated: need 0 <= a_0 <= ... <= a_k")
    base = gen_projective_space(m)
    table = tuple((0,) * m + (a,) for a in degs)
    return bundle_fan(BundleSpec(base, table))


def gen_contra(m):
    """The blow-up of P^m x P^1 along a hyperplane in a fiber, with its
    ample divisor L = 2 D_1 + 2 D_e + 3 E.

    Ray order: e_1..e_m, e_0 = -(e_1+...+e_m), e, -e, then the
    exceptional ray f = e_1 + e appended by the subdivision.
    """
    if m < 1:
        raise ValueError("m must be positive")
    n = m + 1
    e = [tuple(1 if j == i else 0 for j in range(n)) for i in range(m)]
    e0 = tuple(-sum(v[j] for v in e) for j in range(n))
    ez = tuple(0 if j < m else 1 for j in range(n))
    mz = tuple(0 if j < m else -1 for j in range(n))
    rays = e + [e0, ez, mz]
    cones = []
    for drop in range(m + 1):
        base = [i for i in range(m + 1) if i != drop]
        cones.append(tuple(base + [m + 1]))
        cones.append(tuple(base + [m + 2]))
    product = Fan.from_cones(n, rays, cones)
    X = star_subdivision(product, Cone.from_generators([rays[0], rays[m + 1]]))
    r = len(X.rays)
    coeffs = [0] * r
    coeffs[0] = 2        # D_1 = V(e_1)
    coeffs[m + 1] = 2    # D_e = V(e)
    coeffs[r - 1] = 3    # E = V(f)
    return X, TDivisor(X, coeffs)


def gen_losev_manin(n):
    """The Losev-Manin fan: subdivide the fan of P^n at the cones
    Cone(e_k : k not in alpha) for 1 <= |alpha| <= n-1, in order of
    decreasing cone dimension and lexicographically within a level.

    The inserted ray for alpha is sum(e_k : k not in alpha), which
    equals -sum(e_j : j in alpha) because the e_j sum to zero; the ray
    set comes out as {e_0..e_n} plus those 2^{n+1} - n - 3 sums.
    """
    if n < 1:
        raise ValueError("n must be positive")
    f = gen_projective_space(n)
    # paper labels 0..n; label j >= 1 is ray j-1, label 0 is the last ray
    idx = {0: n, **{j: j - 1 for j in range(1, n + 1)}}
    base_rays = f.rays
    for t in range(1, n):
        for alpha in combinations(range(n + 1), t):
            center = [base_rays[idx[k]] for k in range(n + 1)
                      if k not in alpha]
            f = star_subdivision(f, Cone.from_generators(center))
    return f


def product_polytope(P, Q):
    """Cartesian product of two full-dimensional lattice polytopes."""
    return Polytope.from_vertices(
        [p + q for p in P.vertices for q in Q.vertices])


def dilate_polytope(P, k):
    if int(k) < 1:
        raise ValueError("dilation factor must be positive")
    return P.dilate(int(k))
