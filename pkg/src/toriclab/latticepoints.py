"""Lattice-point counts, degree/codegree, and the Ehrhart h* polynomial."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, comb, floor

from .exactmath import dot, kernel_basis, rat_solve, transpose_rows, vec_sub
from .polyhedral import Polytope, RationalPolytope


def _box_range(vertices):
    """Per-axis integer bounds of the vertex hull, rounded inward."""
    axes = list(zip(*vertices))
    lo = [ceil(Fraction(min(a))) for a in axes]
    hi = [floor(Fraction(max(a))) for a in axes]
    return [range(a, b + 1) for a, b in zip(lo, hi)]


def points_in_system(facets, vertices, strict=False):
    """Integer points of {x : <x, eta> >= -a} inside the vertex box.

    Coordinates are fixed one axis at a time; partial facet sums prune
    branches whose best completion already fails, and the last axis is
    emitted as a whole integer interval instead of being scanned.
    """
    if not vertices:
        return []
    n = len(vertices[0])
    if n == 0:
        ok = all((a > 0 if strict else a >= 0) for _, a in facets)
        return [()] if ok else []
    rng = _box_range(vertices)
    if any(len(r) == 0 for r in rng):
        return []
    lo = [r.start for r in rng]
    hi = [r.stop - 1 for r in rng]
    fdata = [(tuple(eta), a) for eta, a in facets]
    # best[f][i]: max of sum(eta[j]*x[j], j >= i) over the box
    best = []
    for eta, _ in fdata:
        suf = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            c = eta[i]
            suf[i] = suf[i + 1] + (c * hi[i] if c >= 0 else c * lo[i])
        best.append(suf)
    out = []
    prefix = [0] * (n - 1)

    def descend(i, partials):
        if i == n - 1:
            xlo, xhi = lo[i], hi[i]
            for (eta, a), p in zip(fdata, partials):
                c = eta[i]
                if c == 0:
                    if p < -a or (strict and p == -a):
                        return
                    continue
                q = Fraction(-a - p, c)
                if c > 0:
                    b = ceil(q)
                    if strict and b == q:
                        b += 1
                    if b > xlo:
                        xlo = b
                else:
                    b = floor(q)
                    if strict and b == q:
                        b -= 1
                    if b < xhi:
                        xhi = b
            if xlo <= xhi:
                base = tuple(prefix)
                out.extend(base + (x,) for x in range(xlo, xhi + 1))
            return
        for x in range(lo[i], hi[i] + 1):
            nxt = []
            for f, ((eta, a), p) in enumerate(zip(fdata, partials)):
                q = p + eta[i] * x
                m = q + best[f][i + 1]
                if m < -a or (strict and m == -a):
                    break
                nxt.append(q)
            else:
                prefix[i] = x
                descend(i + 1, nxt)

    descend(0, [0] * len(fdata))
    return out


def lattice_points(P):
    if isinstance(P, RationalPolytope) and P.is_empty:
        return []
    if not P.facets:
        raise ValueError("polytope carries no facet system")
    return points_in_system(P.facets, P.vertices)


def interior_lattice_points(P):
    return points_in_system(P.facets, P.vertices, strict=True)


def ehrhart_count(P, m):
    """Number of lattice points in the dilate mP."""
    if m == 0:
        return 1
    verts = [tuple(m * x for x in v) for v in P.vertices]
    facets = [(eta, m * a) for eta, a in P.facets]
    return len(points_in_system(facets, verts))


def _dilate_has_interior_point(P, k):
    verts = [tuple(k * x for x in v) for v in P.vertices]
    facets = [(eta, k * a) for eta, a in P.facets]
    return bool(points_in_system(facets, verts, strict=True))


def codegree(P):
    """Least k >= 1 with a lattice point interior to kP; at most n+1."""
    for k in range(1, P.dim + 2):
        if _dilate_has_interior_point(P, k):
            return k
    raise AssertionError("codegree exceeded dim+1")


def degree(P):
    return P.dim + 1 - codegree(P)


@dataclass(frozen=True)
class HStarPolynomial:
    """h*_0 + h*_1 t + ... + h*_d t^d of a full-dimensional lattice polytope."""

    coefficients: tuple

    def __post_init__(self):
        cs = self.coefficients
        if not cs or cs[0] != 1 or any(c < 0 for c in cs) or \
                (len(cs) > 1 and cs[-1] == 0):
            raise ValueError("not a valid h* coefficient vector")

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def volume(self):
        return sum(self.coefficients)


def h_star(P):
    """h* coefficients via the inverse binomial transform of f_P(0..n)."""
    n = P.dim
    f = [ehrhart_count(P, j) for j in range(n + 1)]
    hs = []
    for i in range(n + 1):
        hs.append(sum((-1) ** (i - j) * comb(n + 1, i - j) * f[j]
                      for j in range(i + 1)))
    while len(hs) > 1 and hs[-1] == 0:
        hs.pop()
    return HStarPolynomial(tuple(hs))


def normalized_volume(P):
    return h_star(P).volume


def _facet_in_own_lattice(P, k):
    """Vertices of facet k rewritten in a lattice basis of its hyperplane."""
    eta, _ = P.facets[k]
    fverts = P.facet_vertices(k)
    basis = kernel_basis([list(eta)])
    cols = transpose_rows([list(b) for b in basis])
    w0 = fverts[0]
    coords = []
    for w in fverts:
        c = rat_solve(cols, vec_sub(w, w0))
        coords.append(tuple(int(x) for x in c))
    return coords


def triangulation_volume(P):
    """Normalized volume by pulling-triangulation recursion from a vertex.

    Independent of the Ehrhart route: sums facet volumes times lattice
    heights, recursing into facet coordinates.
    """
    n = P.dim
    if n == 0:
        return 1
    if n == 1:
        xs = [v[0] for v in P.vertices]
        return max(xs) - min(xs)
    v0 = P.vertices[0]
    total = 0
    for k, (eta, a) in enumerate(P.facets):
        height = dot(eta, v0) + a
        if height == 0:
            continue
        F = Polytope.from_vertices(_facet_in_own_lattice(P, k))
        total += triangulation_volume(F) * abs(height)
    return total
