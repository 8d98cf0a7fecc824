"""Numerical classes of invariant k-cycles on a smooth complete toric
variety, and the cones they span.

The cohomology ring is presented as the polynomial algebra on one
variable per ray modulo the Stanley-Reisner relations (a monomial dies
when its support is not a cone of the fan) and the linear relations
sum_rho <u, v_rho> x_rho.  Everything is done degree by degree with
exact sparse elimination; monomials are kept only when their support
spans a cone, which subsumes the Stanley-Reisner ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .exactmath import primitive, rank
from .intersection import _extremal_rays, _prim_gens, ConeInClassSpace
from .polyhedral import is_complete, is_smooth


def _sparse_rref(rows):
    """Reduce dict-rows; returns {pivot column: reduced row}."""
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col not in pivots:
                inv = Fraction(1) / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
            piv = pivots[col]
            fac = row[col]
            for c, v in piv.items():
                val = row.get(c, Fraction(0)) - fac * v
                if val:
                    row[c] = val
                else:
                    row.pop(c, None)
    return pivots


class ChowRing:
    """Rational cohomology of a smooth complete fan, degree by degree."""

    def __init__(self, fan):
        if not (is_smooth(fan) and is_complete(fan)):
            raise ValueError("chow ring needs a smooth complete fan")
        self.fan = fan
        self.n = fan.rank
        self.r = len(fan.rays)
        faces = set()
        for sig in fan.max_index_sets:
            sig = tuple(sorted(sig))
            for size in range(len(sig) + 1):
                faces.update(frozenset(c) for c in combinations(sig, size))
        self.faces = faces
        self._monos = {}
        self._pivots = {}
        self._basis = {}
        self._index = {}
        for d in range(self.n + 1):
            self._build_degree(d)
        self._normalize_point_class()

    # -- presentation ------------------------------------------------------

    def _live(self, mono):
        return frozenset(mono) in self.faces

    def _build_degree(self, d):
        monos = [m for m in combinations_with_replacement(range(self.r), d)
                 if self._live(m)]
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        if d:
            for m in self._monos[d - 1]:
                for u in range(self.n):
                    row = {}
                    for rho, v in enumerate(self.fan.rays):
                        if not v[u]:
                            continue
                        mm = tuple(sorted(m + (rho,)))
                        if mm in index:
                            row[index[mm]] = row.get(index[mm],
                                                     Fraction(0)) + v[u]
                    row = {c: x for c, x in row.items() if x}
                    if row:
                        rows.append(row)
        pivots = _sparse_rref(rows)
        self._monos[d] = monos
        self._index[d] = index
        self._pivots[d] = pivots
        self._basis[d] = [i for i in range(len(monos)) if i not in pivots]

    def _normalize_point_class(self):
        if len(self._basis[self.n]) != 1:
            raise RuntimeError("top degree is not one-dimensional")
        top = self._basis[self.n][0]
        vals = set()
        for sig in self.fan.max_index_sets:
            red = self.reduce(self.n, {tuple(sorted(sig)): Fraction(1)})
            vals.add(red.get(top, Fraction(0)))
        if len(vals) != 1 or 0 in vals:
            raise RuntimeError("maximal cones disagree on the point class")
        self._point_scale = vals.pop()

    # -- reduction and products --------------------------------------------

    def reduce(self, d, vec):
        """Normal form of {monomial: coeff} as {basis column: coeff}."""
        index = self._index[d]
        row = {}
        for m, c in vec.items():
            m = tuple(sorted(m))
            if m in index:
                row[index[m]] = row.get(index[m], Fraction(0)) + Fraction(c)
        pivots = self._pivots[d]
        out = {}
        while row:
            col = min(row)
            val = row.pop(col)
            if not val:
                continue
            if col in pivots:
                for c, v in pivots[col].items():
                    if c == col:
                        continue
                    nv = row.get(c, Fraction(0)) - val * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
            else:
                out[col] = val
        return out

    def dims(self):
        return tuple(len(self._basis[d]) for d in range(self.n + 1))

    def class_coords(self, d, vec):
        red = self.reduce(d, vec)
        return tuple(red.get(i, Fraction(0)) for i in self._basis[d])

    def _coords_to_vec(self, d, coords):
        return {self._monos[d][col]: c
                for col, c in zip(self._basis[d], coords) if c}

    def multiply(self, d1, coords1, d2, coords2):
        d = d1 + d2
        if d > self.n:
            raise ValueError("product exceeds the top degree")
        v1 = self._coords_to_vec(d1, coords1)
        v2 = self._coords_to_vec(d2, coords2)
        out = {}
        for m1, c1 in v1.items():
            for m2, c2 in v2.items():
                mm = tuple(sorted(m1 + m2))
                if self._live(mm):
                    out[mm] = out.get(mm, Fraction(0)) + c1 * c2
        return self.class_coords(d, out)

    def evaluate(self, coords):
        """Degree of a top-degree class (the point class has degree 1)."""
        (c,) = coords if coords else (Fraction(0),)
        return Fraction(c) / self._point_scale


@dataclass(frozen=True)
class CycleClass:
    ring: ChowRing
    k: int          # dimension of the cycle
    coords: tuple   # coordinates in the degree-(n-k) monomial basis

    @property
    def codim(self):
        return self.ring.n - self.k


def chow_ring(fan):
    return ChowRing(fan)


def cycle_class(ring, sigma):
    """Normal form of the invariant cycle of a cone (given as a Cone
    owned by the fan or as an iterable of ray indices)."""
    idx = getattr(sigma, "ray_indices", sigma)
    mono = tuple(sorted(int(i) for i in idx))
    if frozenset(mono) not in ring.faces or len(set(mono)) != len(mono):
        raise ValueError("not a cone of the fan")
    d = len(mono)
    return CycleClass(ring, ring.n - d,
                      ring.class_coords(d, {mono: Fraction(1)}))


def divisor_cycle_class(ring, D):
    if D.fan != ring.fan:
        raise ValueError("fan mismatch")
    vec = {(i,): c for i, c in enumerate(D.coeffs) if c}
    return CycleClass(ring, ring.n - 1, ring.class_coords(1, vec))


def pair(c1, c2):
    """Intersection number of complementary-dimension cycle classes."""
    if c1.ring is not c2.ring:
        raise ValueError("classes live in different rings")
    ring = c1.ring
    if c1.codim + c2.codim != ring.n:
        raise ValueError("dimensions are not complementary")
    return ring.evaluate(
        ring.multiply(c1.codim, c1.coords, c2.codim, c2.coords))


def intersect_classes(c1, c2):
    """Product cycle class (dimensions permitting)."""
    if c1.ring is not c2.ring:
        raise ValueError("classes live in different rings")
    ring = c1.ring
    d = c1.codim + c2.codim
    return CycleClass(ring, ring.n - d,
                      ring.multiply(c1.codim, c1.coords,
                                    c2.codim, c2.coords))


def pairing_kernel(ring, d):
    """Kernel of the A^d x A^(n-d) pairing on the degree-d side."""
    bd, bc = ring._basis[d], ring._basis[ring.n - d]
    rows = []
    for i in bd:
        ei = tuple(Fraction(1) if j == i else Fraction(0) for j in bd)
        rows.append([ring.evaluate(ring.multiply(
            d, ei, ring.n - d,
            tuple(Fraction(1) if l == j else Fraction(0) for l in bc)))
            for j in bc])
    if not bd:
        return 0
    return len(bd) - rank([list(map(Fraction, r)) for r in rows])


def ne_k_cone(ring, k):
    """Cone of pseudo-effective k-cycle classes, generated by the
    invariant cycles of the codimension-(n-k) cones."""
    n = ring.n
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    d = n - k
    if pairing_kernel(ring, d):
        raise RuntimeError("numerical equivalence kernel is nonzero")
    gens = []
    for face in sorted(tuple(sorted(f)) for f in ring.faces if len(f) == d):
        coords = ring.class_coords(d, {face: Fraction(1)})
        if coords not in gens:
            gens.append(coords)
    dim = len(ring._basis[d])
    prim = _prim_gens([g for g in gens if any(g)])
    ext_idx = _extremal_rays(prim, dim)
    ext = tuple(sorted(tuple(Fraction(x) for x in primitive(g))
                       for g in ext_idx))
    return ConeInClassSpace(dim, tuple(gens), ext)
