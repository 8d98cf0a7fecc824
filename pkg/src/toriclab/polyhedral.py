"""Cones, fans, lattice polytopes and the surgeries between them.

Cones and fans live in N = Z^rank; polytopes live in the dual side M.
A facet pair (eta, a) always encodes the half-space <x, eta> >= -a, with
eta a primitive inner normal, matching the facet presentation used for
polarized toric varieties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb

from .exactmath import (det, dot, hnf, kernel_basis, primitive, rank,
                        rat_solve, rref, smith_with_transforms,
                        transpose_rows, vec_gcd, vec_sub)


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone given by primitive generators.

    ray_indices is populated for cones owned by a fan and indexes the
    fan's ray table; standalone cones carry only generators.
    """

    generators: tuple
    ray_indices: tuple | None = None

    @classmethod
    def from_generators(cls, gens, ray_indices=None):
        prim = []
        for g in gens:
            p = primitive(g)
            if p not in prim:
                prim.append(p)
        prim.sort()
        return cls(tuple(prim),
                   tuple(sorted(ray_indices)) if ray_indices is not None else None)

    @property
    def dim(self):
        return rank(list(self.generators)) if self.generators else 0

    def dual(self, ambient_rank):
        return dual_cone(self, ambient_rank)

    def contains(self, x, ambient_rank=None):
        n = ambient_rank if ambient_rank is not None else (
            len(self.generators[0]) if self.generators else 0)
        return all(dot(u, x) >= 0
                   for u in dual_generators(self.generators, n))


def _kernel_or_identity(rows, n):
    if not rows:
        return tuple(tuple(1 if i == j else 0 for j in range(n))
                     for i in range(n))
    return kernel_basis(rows)


def _reduce_mod_span(v, span_rref, pivots):
    out = [Fraction(x) for x in v]
    for row, c in zip(span_rref, pivots):
        f = out[c]
        if f:
            out = [a - f * b for a, b in zip(out, row)]
    return out


def dual_generators(gens, n):
    """Generators of {u : <u, g> >= 0 for all g}, lineality given as +/- pairs."""
    gens = [tuple(g) for g in gens]
    if not gens:
        basis = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        return tuple(sorted(basis + [tuple(-x for x in b) for b in basis]))
    r = rank(gens)
    lin = _kernel_or_identity(gens, n)
    lin_rref, lin_piv = rref([list(v) for v in lin]) if lin else ([], [])
    out = set()
    for v in lin:
        out.add(tuple(v))
        out.add(tuple(-x for x in v))
    for S in combinations(gens, r - 1):
        if S and rank(list(S)) != r - 1:
            continue
        for k in _kernel_or_identity(list(S), n):
            red = _reduce_mod_span(k, lin_rref, lin_piv)
            if any(red):
                u = primitive(red)
                vals = [dot(u, g) for g in gens]
                if all(v >= 0 for v in vals):
                    out.add(u)
                elif all(v <= 0 for v in vals):
                    out.add(tuple(-x for x in u))
                break
    return tuple(sorted(out))


def dual_cone(c, ambient_rank):
    """The dual cone in the opposite lattice."""
    return Cone.from_generators(dual_generators(c.generators, ambient_rank))


def cone_facet_sets(gens, n):
    """Facets of Cone(gens) as frozensets of generators."""
    gens = [tuple(g) for g in gens]
    k = len(gens)
    d = rank(gens) if gens else 0
    if d == 0:
        return []
    if k == d:
        # simplicial: facets drop one generator
        return [frozenset(gens) - {g} for g in gens]
    facets = set()
    for u in dual_generators(gens, n):
        F = frozenset(g for g in gens if dot(u, g) == 0)
        if len(F) < k:
            facets.add(F)
    # a lineality direction flags every generator; drop the full set
    return [F for F in facets
            if rank(list(F)) == d - 1 or (not F and d == 1)]


@dataclass(frozen=True)
class Fan:
    """Fan given by its ray table and maximal cones.

    vertex_subspace is a basis of the common lineality space U for
    degenerate fans (every cone contains U); empty for honest fans.
    """

    rank: int
    rays: tuple
    max_cones: tuple
    vertex_subspace: tuple = ()

    def __post_init__(self):
        seen = set()
        for v in self.rays:
            if tuple(v) != primitive(v):
                raise ValueError("fan rays must be primitive")
            if tuple(v) in seen:
                raise ValueError("duplicate ray")
            seen.add(tuple(v))
        for c in self.max_cones:
            if c.ray_indices is None:
                raise ValueError("fan cones need ray indices")
            for i in c.ray_indices:
                if not 0 <= i < len(self.rays):
                    raise ValueError("cone ray index out of range")

    @classmethod
    def from_cones(cls, rank_, rays, index_sets, vertex_subspace=()):
        rays = tuple(tuple(v) for v in rays)
        cones = []
        for s in sorted(tuple(sorted(s)) for s in index_sets):
            gens = tuple(sorted(rays[i] for i in s))
            extra = tuple(tuple(v) for v in vertex_subspace)
            cones.append(Cone(gens if not extra else
                              tuple(sorted(set(gens) | set(extra) |
                                           {tuple(-x for x in v) for v in extra})),
                              tuple(s)))
        return cls(rank_, rays, tuple(cones),
                   tuple(tuple(v) for v in vertex_subspace))

    @property
    def max_index_sets(self):
        return [frozenset(c.ray_indices) for c in self.max_cones]

    def cone_generators(self, indices):
        return tuple(sorted(self.rays[i] for i in indices))

    def _canonical(self):
        return (self.rank, frozenset(self.rays),
                frozenset(frozenset(self.rays[i] for i in c.ray_indices)
                          for c in self.max_cones),
                _span_key(self.vertex_subspace, self.rank))

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())


def _span_key(vectors, n):
    if not vectors:
        return ()
    H, _ = hnf([list(v) for v in vectors])
    return tuple(tuple(r) for r in H if any(r))


# ---------------------------------------------------------------------------
# fan predicates

def multiplicity(c):
    """Index of the generator sublattice inside the saturated span N_sigma."""
    gens = list(c.generators)
    if rank(gens) != len(gens):
        raise ValueError("non-simplicial cone")
    cols = transpose_rows([list(g) for g in gens])
    diag = smith_with_transforms(cols)[0]
    m = 1
    for d in diag:
        if d:
            m *= d
    return m


def is_simplicial(f):
    return all(rank(list(c.generators)) == len(c.generators)
               for c in f.max_cones)


def is_smooth(f):
    for c in f.max_cones:
        gens = list(c.generators)
        if rank(gens) != len(gens) or multiplicity(c) != 1:
            return False
    return True


def _wall_table(f):
    """facet (as frozenset of ray indices) -> list of incident max cone positions."""
    table = {}
    for pos, c in enumerate(f.max_cones):
        idx = list(c.ray_indices)
        gens = [f.rays[i] for i in idx]
        if rank(gens) == len(gens):
            facet_sets = [frozenset(idx) - {i} for i in idx]
        else:
            by_gen = {f.rays[i]: i for i in idx}
            facet_sets = [frozenset(by_gen[g] for g in F)
                          for F in cone_facet_sets(gens, f.rank)]
        for F in facet_sets:
            table.setdefault(F, []).append(pos)
    return table


def is_complete(f):
    if f.rank == 0:
        return True
    if not f.max_cones:
        return False
    if any(rank(list(c.generators)) != f.rank for c in f.max_cones):
        return False
    return all(len(v) == 2 for v in _wall_table(f).values())


def walls(f):
    """All walls with their two incident maximal cones; demands completeness."""
    out = []
    for F, inc in sorted(_wall_table(f).items(), key=lambda kv: sorted(kv[0])):
        if len(inc) != 2:
            raise ValueError("fan not complete")
        wall = Cone.from_generators([f.rays[i] for i in F], F) if F else Cone((), ())
        out.append((wall, f.max_cones[inc[0]], f.max_cones[inc[1]]))
    return out


# ---------------------------------------------------------------------------
# fan surgeries

def star_subdivision(f, tau):
    """Insert the ray v = sum of tau's generators, splitting the star of tau."""
    tau_gens = set(tau.generators)
    tau_idx = frozenset(i for i, r in enumerate(f.rays) if r in tau_gens)
    if len(tau_idx) != len(tau_gens):
        raise ValueError("center is not a cone of the fan")
    touching = [s for s in f.max_index_sets if tau_idx <= s]
    if not touching:
        raise ValueError("center is not a cone of the fan")
    for s in touching:
        if multiplicity(Cone.from_generators(f.cone_generators(s))) != 1:
            raise ValueError("non-smooth star")
    if len(tau_idx) == 1:
        return f
    v = primitive(tuple(sum(x) for x in zip(*tau_gens)))
    new_rays = f.rays + (v,)
    vi = len(f.rays)
    new_cones = []
    for s in f.max_index_sets:
        if tau_idx <= s:
            for w in sorted(tau_idx):
                new_cones.append((s - {w}) | {vi})
        else:
            new_cones.append(s)
    return Fan.from_cones(f.rank, new_rays, new_cones, f.vertex_subspace)


def quotient_map(vectors, n):
    """Rows of the projection N -> N/N_U, U the saturated span of vectors."""
    if not vectors:
        return [list(r) for r in
                [[1 if i == j else 0 for j in range(n)] for i in range(n)]]
    cols = transpose_rows([list(v) for v in vectors])
    diag, U, _ = smith_with_transforms(cols)
    s = sum(1 for d in diag if d)
    return [list(r) for r in U[s:]]


def star_fan(f, tau):
    """Fan of the orbit closure V(tau): images of cones containing tau in N/N_tau."""
    tau_gens = set(tau.generators)
    tau_idx = frozenset(i for i, r in enumerate(f.rays) if r in tau_gens)
    if len(tau_idx) != len(tau_gens):
        raise ValueError("center is not a cone of the fan")
    if not any(tau_idx <= s for s in f.max_index_sets):
        raise ValueError("center is not a cone of the fan")
    proj = quotient_map(list(tau_gens), f.rank)
    new_rank = len(proj)
    images = {}
    for i, r in enumerate(f.rays):
        w = tuple(dot(row, r) for row in proj)
        images[i] = None if not any(w) else primitive(w)
    new_rays = sorted({w for w in images.values() if w is not None})
    ray_pos = {w: j for j, w in enumerate(new_rays)}
    new_cones = {frozenset(ray_pos[images[i]] for i in s
                           if images[i] is not None)
                 for s in f.max_index_sets if tau_idx <= s}
    return Fan.from_cones(new_rank, new_rays, new_cones)


def product_fan(f1, f2):
    n1, n2 = f1.rank, f2.rank
    rays = [tuple(v) + (0,) * n2 for v in f1.rays] + \
           [(0,) * n1 + tuple(v) for v in f2.rays]
    cones = [set(s1) | {len(f1.rays) + i for i in s2}
             for s1 in f1.max_index_sets for s2 in f2.max_index_sets]
    return Fan.from_cones(n1 + n2, rays, cones)


# ---------------------------------------------------------------------------
# polytopes

def _affine_rank(points):
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([list(vec_sub(p, p0)) for p in points[1:]])


def _qhull_facets(pts, n):
    """Facet system proposed by floating-point Qhull, certified exactly.

    Every returned inequality is checked in exact arithmetic to be a
    supporting hyperplane whose contact set spans an (n-1)-simplex, and the
    system as a whole is certified complete: it cuts out a bounded polytope
    all of whose vertices lie among the input points.  Returns None whenever
    any part of the certificate fails, so callers can fall back to the
    exhaustive enumeration.
    """
    if n < 2:
        return None
    try:
        from scipy.spatial import ConvexHull
    except Exception:
        return None
    try:
        hull = ConvexHull([[float(x) for x in p] for p in pts])
    except Exception:
        return None
    facets = set()
    for simp in hull.simplices:
        S = [pts[i] for i in simp]
        diffs = [list(vec_sub(p, S[0])) for p in S[1:]]
        ker = kernel_basis(diffs)
        if len(ker) != 1:
            return None
        u = ker[0]
        c = dot(u, S[0])
        vals = [dot(u, p) for p in pts]
        if all(v >= c for v in vals):
            facets.add((tuple(u), -c))
        elif all(v <= c for v in vals):
            facets.add((tuple(-x for x in u), c))
        else:
            return None
    facets = tuple(sorted(facets))
    try:
        verts = _vertex_enum(facets, n)
    except ValueError:
        return None
    if not set(verts) <= {tuple(Fraction(x) for x in p) for p in pts}:
        return None
    return facets


def _facet_hull(points, n):
    """Irredundant facet presentation of Conv(points), full-dimensional case."""
    pts = [tuple(p) for p in dict.fromkeys(tuple(p) for p in points)]
    if _affine_rank(pts) != n:
        raise ValueError("not full-dimensional")
    if comb(len(pts), n) > 300:
        fast = _qhull_facets(pts, n)
        if fast is not None:
            return fast
    facets = set()
    for S in combinations(pts, n):
        diffs = [list(vec_sub(p, S[0])) for p in S[1:]]
        if rank(diffs) != n - 1:
            continue
        ker = kernel_basis(diffs) if diffs else _kernel_or_identity([], n)
        if len(ker) != 1:
            continue
        u = ker[0]
        c = dot(u, S[0])
        vals = [dot(u, p) for p in pts]
        if all(v >= c for v in vals):
            facets.add((tuple(u), -c))
        elif all(v <= c for v in vals):
            facets.add((tuple(-x for x in u), c))
    return tuple(sorted(facets))


def _vertex_enum(facets, n):
    """All vertices of the (possibly empty) polytope cut out by the facets."""
    normals = [tuple(F[0]) for F in facets]
    offsets = [F[1] for F in facets]
    rec = dual_generators(normals, n)
    if rec:
        raise ValueError("not a polytope")
    verts = set()
    for idx in combinations(range(len(facets)), n):
        A = [list(normals[i]) for i in idx]
        if rank(A) != n:
            continue
        try:
            x = rat_solve(A, [-offsets[i] for i in idx])
        except ValueError:
            continue
        if x is None:
            continue
        if all(dot(normals[i], x) >= -offsets[i] for i in range(len(facets))):
            verts.add(tuple(Fraction(c) for c in x))
    return tuple(sorted(verts))


@dataclass(frozen=True)
class Polytope:
    """Full-dimensional lattice polytope with both presentations."""

    dim: int
    vertices: tuple
    facets: tuple

    @classmethod
    def from_vertices(cls, points):
        pts = [tuple(int(x) for x in p) for p in points]
        n = len(pts[0])
        facets = _facet_hull(pts, n)
        verts = []
        for p in dict.fromkeys(pts):
            active = [f for f, a in facets if dot(f, p) == -a]
            if rank([list(f) for f in active]) == n:
                verts.append(p)
        return cls(n, tuple(sorted(verts)), facets)

    @classmethod
    def from_facets(cls, facets, dim=None):
        facets = tuple((tuple(f), a) for f, a in facets)
        n = dim if dim is not None else len(facets[0][0])
        verts = _vertex_enum(facets, n)
        if not verts:
            raise ValueError("empty polytope")
        if any(v.denominator != 1 for p in verts for v in p):
            raise ValueError("vertices are not lattice points")
        if _affine_rank(verts) != n:
            raise ValueError("not full-dimensional")
        return cls.from_vertices([[int(x) for x in p] for p in verts])

    def facet_vertices(self, k):
        eta, a = self.facets[k]
        return tuple(v for v in self.vertices if dot(eta, v) == -a)

    def translate(self, t):
        # <y, eta> >= -a + <t, eta> for y in P + t
        verts = [tuple(x + d for x, d in zip(v, t)) for v in self.vertices]
        facets = [(eta, a - dot(eta, t)) for eta, a in self.facets]
        return Polytope(self.dim, tuple(sorted(verts)), tuple(sorted(facets)))

    def dilate(self, k):
        verts = [tuple(k * x for x in v) for v in self.vertices]
        facets = [(eta, k * a) for eta, a in self.facets]
        return Polytope(self.dim, tuple(sorted(verts)), tuple(sorted(facets)))


@dataclass(frozen=True)
class RationalPolytope:
    """Bounded rational polytope; may be empty or lower-dimensional.

    facets is populated only in the full-dimensional case.
    """

    dim: int
    vertices: tuple
    facets: tuple = ()

    @property
    def is_empty(self):
        return not self.vertices

    @property
    def affine_dim(self):
        return -1 if self.is_empty else _affine_rank(self.vertices)

    def is_lattice(self):
        return all(Fraction(x).denominator == 1
                   for v in self.vertices for x in v)


def facets_from_vertices(vertices):
    return Polytope.from_vertices(vertices)


def vertices_from_facets(facets, dim=None):
    """Vertex enumeration; lattice full-dimensional input promotes to Polytope."""
    facets = tuple((tuple(f), a) for f, a in facets)
    n = dim if dim is not None else len(facets[0][0])
    verts = _vertex_enum(facets, n)
    if verts and _affine_rank(verts) == n \
            and all(x.denominator == 1 for v in verts for x in v):
        iverts = [tuple(int(x) for x in v) for v in verts]
        if all(all(int(x) == x for x in eta) and
               vec_gcd([int(x) for x in eta]) == 1 for eta, _ in facets):
            # normals already primitive: keep the supported subsystem
            # instead of recomputing the hull
            kept = _rational_facets(facets, iverts, n)
            return Polytope(n, tuple(sorted(iverts)),
                            tuple(sorted((tuple(int(x) for x in eta), int(a))
                                         for eta, a in kept)))
        return Polytope.from_vertices(iverts)
    kept = ()
    if verts and _affine_rank(verts) == n:
        kept = _rational_facets(facets, verts, n)
    return RationalPolytope(n, verts, kept)


def _rational_facets(facets, verts, n):
    out = []
    for eta, a in dict.fromkeys(facets):
        active = [v for v in verts if dot(eta, v) == -a]
        if active and _affine_rank(active) == n - 1:
            out.append((tuple(eta), Fraction(a)))
    return tuple(sorted(out))


def normal_fan(P):
    """Complete fan whose maximal cones are the vertex cones of P."""
    rays = tuple(eta for eta, _ in P.facets)
    cones = []
    for v in P.vertices:
        cones.append({i for i, (eta, a) in enumerate(P.facets)
                      if dot(eta, v) == -a})
    return Fan.from_cones(P.dim, rays, cones)


def polytope_is_smooth(P):
    return is_smooth(normal_fan(P))


def product_fan(f, g):
    """Fan of the product variety; f's rays first, then g's."""
    ra = [tuple(v) + (0,) * g.rank for v in f.rays]
    rb = [(0,) * f.rank + tuple(v) for v in g.rays]
    off = len(ra)
    cones = [tuple(s) + tuple(off + j for j in t)
             for s in f.max_index_sets for t in g.max_index_sets]
    return Fan.from_cones(f.rank + g.rank, ra + rb, cones)


def fan_isomorphic(f, g):
    """Lattice isomorphism test for complete simplicial fans: some
    unimodular map carries rays to rays and maximal cones to maximal cones."""
    if f.rank != g.rank or len(f.rays) != len(g.rays):
        return False
    f_sets = sorted(sorted(s) for s in f.max_index_sets)
    g_sets = {frozenset(s) for s in g.max_index_sets}
    if len(f_sets) != len(g_sets) or \
            sorted(map(len, f_sets)) != sorted(map(len, g_sets)):
        return False
    n = f.rank
    if n == 0:
        return True
    sigma = f_sets[0]
    if len(sigma) != n:
        return False
    src = [list(f.rays[i]) for i in sigma]
    if rank(src) != n:
        return False
    for tau in g_sets:
        for perm in permutations(sorted(tau)):
            tgt = [g.rays[i] for i in perm]
            # T with T*src_j = tgt_j, one row of T per target coordinate
            T = []
            for r in range(n):
                x = rat_solve([list(s) for s in src], [t[r] for t in tgt])
                if x is None or any(c.denominator != 1 for c in x):
                    T = None
                    break
                T.append([int(c) for c in x])
            if T is None:
                continue
            if det([row[:] for row in T]) not in (1, -1):
                continue
            image = {tuple(dot(row, v) for row in T) for v in f.rays}
            if image != set(g.rays):
                continue
            gidx = {g.rays[i]: i for i in range(len(g.rays))}
            mapped = {frozenset(gidx[tuple(dot(row, f.rays[i]) for row in T)]
                               for i in s)
                      for s in f.max_index_sets}
            if mapped == g_sets:
                return True
    return False
