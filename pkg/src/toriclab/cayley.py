"""Generalized Cayley polytopes, projective-bundle fans, and the
classifier for smooth Q-normal polytopes of large codegree.

Conventions.  Cayley^s(P_0, ..., P_k) = Conv(P_0 x {0}, P_1 x {s e_1},
..., P_k x {s e_k}) inside R^{m+k}, the factors living in R^m.  Bundle
fans put the base coordinates first and the fiber coordinates last: a
base ray eta_i lifts to (eta_i; a_i1 - a_i0, ..., a_ik - a_i0), the
fiber rays are e_1, ..., e_k together with e_0 = -(e_1 + ... + e_k),
and dropping the fiber coordinates is a map of fans onto the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .adjunction import nef_value, q_codegree
from .divisors import (TDivisor, canonical_divisor, class_coords,
                       divisor_of_polytope, polytope_of_divisor)
from .exactmath import basis_extension, dot, primitive
from .intersection import RelationClass, intersect, is_ample, mori_cone
from .latticepoints import codegree
from .polyhedral import (Fan, Polytope, fan_isomorphic, is_complete,
                         is_smooth, normal_fan, product_fan)

LABEL_2DN = "2Delta_n"
LABEL_3D3 = "3Delta_3"
LABEL_SD1 = "sDelta_1"
LABEL_CAY1 = "Cayley^1"
LABEL_CAY2 = "Cayley^2-odd"
LABEL_NONE = "not-classified"


class HypothesisViolation(Exception):
    """A polytope outside the classifier's standing hypotheses."""

    def __init__(self, which, detail):
        self.which = which
        self.detail = detail
        super().__init__(f"{which}: {detail}")


# ---------------------------------------------------------------------------
# Cayley polytopes

@dataclass(frozen=True)
class CayleySpec:
    s: int
    factors: tuple
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError("order s must be a positive integer")
        if len(self.factors) < 2:
            raise ValueError("need at least two factors")
        dims = {P.dim for P in self.factors}
        if len(dims) != 1:
            raise ValueError("dimension mismatch among the factors")
        if self.strict and self.m > 0:
            fans = {normal_fan(P) for P in self.factors}
            if len(fans) != 1:
                raise ValueError("strict spec needs equal normal fans")

    @property
    def m(self):
        return self.factors[0].dim

    @property
    def k(self):
        return len(self.factors) - 1


def build_cayley(spec):
    """The lattice polytope Cayley^s(P_0,...,P_k) in R^{m+k}."""
    k, s = spec.k, spec.s
    verts = [v + (0,) * k for v in spec.factors[0].vertices]
    for j in range(1, k + 1):
        tail = tuple(s if t == j - 1 else 0 for t in range(k))
        verts.extend(v + tail for v in spec.factors[j].vertices)
    return Polytope.from_vertices(verts)


def simplex(m, d=1):
    """The dilated standard simplex d*Delta_m (a point for m = 0)."""
    if m == 0:
        return Polytope.from_vertices([()])
    if d < 1:
        raise ValueError("dilation must be positive")
    verts = [(0,) * m]
    verts += [tuple(d if t == i else 0 for t in range(m)) for i in range(m)]
    return Polytope.from_vertices(verts)


# ---------------------------------------------------------------------------
# projective-bundle fans

@dataclass(frozen=True)
class BundleSpec:
    base: Fan
    divisors: tuple  # rows D_0..D_k of ray coefficients on the base

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.divisors)
        object.__setattr__(self, "divisors", rows)
        if not is_complete(self.base):
            raise ValueError("bundle base must be complete")
        if not rows:
            raise ValueError("need at least one divisor row")
        if any(len(row) != len(self.base.rays) for row in rows):
            raise ValueError("divisor rows must match the base rays")

    @property
    def k(self):
        return len(self.divisors) - 1


def bundle_fan(spec):
    """Fan of P(O(D_0) + ... + O(D_k)) over the base fan."""
    base, k = spec.base, spec.k
    if k == 0:
        return base
    m, a = base.rank, spec.divisors
    rays = [tuple(v) + tuple(a[j][i] - a[0][i] for j in range(1, k + 1))
            for i, v in enumerate(base.rays)]
    rays += [(0,) * m + tuple(1 if t == j else 0 for t in range(k))
             for j in range(k)]
    rays.append((0,) * m + (-1,) * k)
    nb = len(base.rays)
    fiber_idx = {j: nb + j - 1 for j in range(1, k + 1)}
    fiber_idx[0] = nb + k
    cones = []
    for sig in base.max_index_sets:
        for j in range(k + 1):
            kept = tuple(fiber_idx[t] for t in range(k + 1) if t != j)
            cones.append(tuple(sig) + kept)
    return Fan.from_cones(m + k, rays, cones)


def _point_fan():
    return Fan.from_cones(0, (), [()])


def _pn_fan(n):
    if n == 0:
        return _point_fan()
    rays = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    rays.append((-1,) * n)
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan.from_cones(n, rays, cones)


def cayley_smooth_check(spec):
    """Smoothness of Cayley^s(P_0..P_k) for a strict spec.

    Returns (smooth, witness).  Smooth iff the common normal fan is
    smooth and s divides every difference a_ij - a_i0 of the facet
    coefficient tables; on success the witness carries the bundle data
    E_j = (D_j - D_0)/s + D_0 and the twist (1-s) D_0 expressing the
    polytope divisor as s xi + pi^*((1-s) D_0).
    """
    if not spec.strict:
        raise ValueError("smoothness criterion needs a strict spec")
    s = spec.s
    if spec.m == 0:
        base = _point_fan()
        tables = [() for _ in spec.factors]
    else:
        base = normal_fan(spec.factors[0])
        tables = [tuple(int(c) for c in divisor_of_polytope(P, base).coeffs)
                  for P in spec.factors]
    base_smooth = is_smooth(base)
    bad = tuple((i, j, tab[i] - tables[0][i])
                for j, tab in enumerate(tables)
                for i in range(len(tab))
                if (tab[i] - tables[0][i]) % s)
    if base_smooth and not bad:
        e_rows = tuple(tuple((tab[i] - tables[0][i]) // s + tables[0][i]
                             for i in range(len(tab)))
                       for tab in tables)
        witness = {
            "base": base,
            "e_coeffs": e_rows,
            "l_twist": tuple((1 - s) * c for c in tables[0]),
        }
        return True, witness
    return False, {"base_smooth": base_smooth, "bad_differences": bad}


# ---------------------------------------------------------------------------
# closed forms for bundles over projective space

def closed_form_invariants(s, m, k, degrees):
    """(nef value, spectral value, Q-normality) for the polarized bundle
    whose polytope is Cayley^s(d_0 Delta_m, ..., d_k Delta_m)."""
    degs = tuple(int(d) for d in degrees)
    if len(degs) != k + 1:
        raise ValueError("expected k+1 degrees")
    if degs[0] <= 0 or any(degs[i] > degs[i + 1] for i in range(k)):
        raise ValueError("degrees must satisfy 0 < d_0 <= ... <= d_k")
    if any((d - degs[0]) % s for d in degs):
        raise ValueError("order must divide the degree differences")
    gap = Fraction(m + 1) - Fraction(sum(degs), s)
    base = Fraction(k + 1, s)
    tau = base + max(Fraction(0), gap / degs[0])
    mu = base + max(Fraction(0), gap / degs[-1])
    return tau, mu, tau == mu


def ample_on_bundle(s, a, a_list, m):
    """Polytope of s xi + a pi^*(H) on P(O(a_0)+...+O(a_k)) over P^m.

    Returns the polytope and certifies it equals
    Cayley^s((s a_0 + a) Delta_m, ..., (s a_k + a) Delta_m).
    """
    a_list = tuple(int(x) for x in a_list)
    if len(a_list) < 2:
        raise ValueError("need at least two bundle degrees")
    if any(a_list[i] > a_list[i + 1] for i in range(len(a_list) - 1)):
        raise ValueError("bundle degrees must be nondecreasing")
    if a <= -s * a_list[0]:
        raise ValueError("parameters give a non-ample divisor")
    k = len(a_list) - 1
    base = _pn_fan(m)
    table = tuple((0,) * m + (aj,) for aj in a_list)
    fan = bundle_fan(BundleSpec(base, table))
    coeffs = [0] * m + [s * a_list[0] + a] + [0] * k + [s]
    L = TDivisor(fan, coeffs)
    if not is_ample(L):
        raise RuntimeError("bundle polarization failed its ampleness check")
    Q = polytope_of_divisor(L)
    if any(x.denominator != 1 for v in Q.vertices for x in v):
        raise RuntimeError("bundle polytope is not a lattice polytope")
    P = Polytope.from_vertices([tuple(int(x) for x in v) for v in Q.vertices])
    model = build_cayley(CayleySpec(
        s, tuple(simplex(m, s * aj + a) for aj in a_list)))
    if P != model:
        raise RuntimeError("bundle polytope does not match its Cayley form")
    return P


# ---------------------------------------------------------------------------
# the classifier

@dataclass(frozen=True)
class ClassificationResult:
    label: str
    n: int
    tau: Fraction
    k: int = None
    s: int = None
    factors: tuple = None
    degrees: tuple = None
    detail: str = ""


def _unclassified(n, tau, detail):
    return ClassificationResult(LABEL_NONE, n, tau, detail=detail)


def _fano_candidates(n):
    cands = [_pn_fan(n)]
    if n >= 2 and n % 2 == 0:
        half = _pn_fan(n // 2)
        cands.append(product_fan(half, half))
    if n == 3:
        p1 = _pn_fan(1)
        cands.append(product_fan(product_fan(p1, p1), p1))
    if n >= 3 and n % 2 == 1:
        r = (n + 1) // 2
        table = tuple((0,) * r + (dj,) for dj in [1] * (r - 1) + [2])
        cands.append(bundle_fan(BundleSpec(_pn_fan(r), table)))
    return cands


def _factor_polytope(D):
    Q = polytope_of_divisor(D)
    if any(x.denominator != 1 for v in Q.vertices for x in v):
        raise RuntimeError("recovered factor is not a lattice polytope")
    P = Polytope.from_vertices([tuple(int(x) for x in v) for v in Q.vertices])
    low = min(P.vertices)
    return P.translate(tuple(-x for x in low))


def _recover_base(fan, supp):
    """Split the lattice along a fiber relation sum(v_j : j in supp) = 0.

    Returns (base fan, non-support ray indices, fiber-coordinate table)
    or (None, None, reason)."""
    n = fan.rank
    kp = len(supp) - 1
    try:
        rows = basis_extension([fan.rays[i] for i in supp[1:]], n)
    except ValueError:
        return None, None, "fiber rays are not part of a lattice basis"
    T = rows[kp:] + rows[:kp]  # base block first, fiber block last
    sset = set(supp)
    ns = [i for i in range(len(fan.rays)) if i not in sset]
    base_rays, btab = [], []
    for i in ns:
        img = tuple(dot(row, fan.rays[i]) for row in T)
        head, tail = img[:n - kp], img[n - kp:]
        if all(x == 0 for x in head) or tuple(primitive(head)) != head:
            return None, None, "horizontal ray does not map to a base ray"
        base_rays.append(head)
        btab.append(tail)
    if len(set(base_rays)) != len(base_rays):
        return None, None, "horizontal rays collide in the base"
    pos = {i: t for t, i in enumerate(ns)}
    bcones = set()
    for sig in fan.max_index_sets:
        if sum(1 for i in sig if i in sset) != kp:
            return None, None, "maximal cone is not a bundle chart"
        bcones.add(tuple(sorted(pos[i] for i in sig if i not in sset)))
    Y = Fan.from_cones(n - kp, base_rays, sorted(bcones))
    if not (is_complete(Y) and is_smooth(Y)):
        return None, None, "recovered base fan is not smooth and complete"
    return Y, (ns, btab), None


def _classify_ray(P, fan, L, tau, cd, c):
    """One fiber-type extremal class -> a ClassificationResult."""
    n = P.dim
    supp = [i for i, x in enumerate(c.coeffs) if x > 0]
    if any(c.coeffs[i] != 1 for i in supp):
        return _unclassified(n, tau, "fiber relation is not reduced")
    kp = len(supp) - 1
    ell = intersect(L, c)
    if ell.denominator != 1 or ell <= 0:
        return _unclassified(n, tau, "degenerate polarization degree")
    ell = int(ell)

    if kp == n:
        if len(fan.rays) != n + 1:
            return _unclassified(n, tau, "full fiber inside a larger fan")
        if ell == 1:
            return ClassificationResult(
                LABEL_CAY1, n, tau, k=n, s=1,
                factors=tuple(simplex(0) for _ in range(n + 1)))
        if ell == 2:
            return ClassificationResult(LABEL_2DN, n, tau, k=n, s=2)
        if ell == 3 and n == 3:
            return ClassificationResult(LABEL_3D3, n, tau, k=3, s=3)
        return _unclassified(
            n, tau, "polarization degree out of range on projective space")

    Y, data, reason = _recover_base(fan, supp)
    if Y is None:
        return _unclassified(n, tau, reason)
    ns, btab = data
    a_ns = [int(L.coeffs[i]) for i in ns]
    cj = [int(L.coeffs[i]) for i in supp]
    b_coeffs = [a_ns[t] - sum(cj[j] * btab[t][j - 1] for j in range(1, kp + 1))
                for t in range(len(ns))]

    if ell == 1:
        divisors = [TDivisor(Y, b_coeffs)]
        divisors += [TDivisor(Y, [b_coeffs[t] + btab[t][j - 1]
                                  for t in range(len(ns))])
                     for j in range(1, kp + 1)]
        if not all(is_ample(D) for D in divisors):
            return _unclassified(n, tau, "a recovered factor is not ample")
        if kp + 1 != cd:
            return _unclassified(
                n, tau,
                f"Cayley order {kp + 1} disagrees with codegree {cd}")
        return ClassificationResult(
            LABEL_CAY1, n, tau, k=kp, s=1,
            factors=tuple(_factor_polytope(D) for D in divisors))

    if ell == 2:
        if kp != n - 1 or n % 2 == 0 or Y.rank != 1:
            return _unclassified(n, tau, "fiber data rules out the odd case")
        deltas = [0] + [sum(row[j - 1] for row in btab)
                        for j in range(1, kp + 1)]
        a0 = sum(b_coeffs)
        degs = tuple(sorted(a0 + 2 * d for d in deltas))
        if degs[0] <= 0:
            return _unclassified(n, tau, "non-positive Cayley degree")
        t2, _, qn = closed_form_invariants(2, 1, kp, degs)
        if t2 != tau or not qn:
            return _unclassified(n, tau, "closed-form certificate failed")
        return ClassificationResult(
            LABEL_CAY2, n, tau, k=kp, s=2, degrees=degs)

    return _unclassified(
        n, tau, f"no case with polarization degree {ell} on a proper fiber")


def classify(P):
    """Decide which of the large-codegree models a smooth Q-normal
    polytope is, with recovered witnesses.

    Raises HypothesisViolation when P is not smooth, not Q-normal, or
    has codegree below (n+1)/2; the exception names the failing
    hypothesis.
    """
    n = P.dim
    fan = normal_fan(P)
    if not is_smooth(fan):
        raise HypothesisViolation(
            "smoothness", "the normal fan has a non-unimodular cone")
    tau = nef_value(P)
    qc = q_codegree(P)
    if tau != qc:
        raise HypothesisViolation(
            "Q-normality", f"nef value {tau} differs from Q-codegree {qc}")
    cd = codegree(P)
    if 2 * cd < n + 1:
        raise HypothesisViolation(
            "codegree", f"codegree {cd} is below the bound (n+1)/2")
    if n == 1:
        s = int(P.vertices[1][0] - P.vertices[0][0])
        return ClassificationResult(LABEL_SD1, 1, tau, k=0, s=s)

    L = divisor_of_polytope(P, fan)
    K = canonical_divisor(fan)
    face = []
    for g in mori_cone(fan).extremal_rays:
        c = RelationClass(fan, g)
        if intersect(K, c) + tau * intersect(L, c) == 0:
            face.append(c)
    fiber_rays = sorted((c for c in face if all(x >= 0 for x in c.coeffs)),
                        key=lambda c: c.coeffs)
    if not fiber_rays:
        return _unclassified(
            n, tau, "no fiber-type extremal ray in the nef-value face")

    results = [_classify_ray(P, fan, L, tau, cd, c) for c in fiber_rays]
    keys = {(r.label, r.k, r.s, r.degrees) for r in results}
    if len(keys) > 1:
        labels = sorted(f"{r.label}(k={r.k})" for r in results)
        return _unclassified(
            n, tau, "inconsistent fiber branches: " + ", ".join(labels))
    result = results[0]

    if result.label != LABEL_NONE and result.s == 1:
        kl = class_coords(K)
        ll = class_coords(L)
        if all(a + tau * b == 0 for a, b in zip(kl, ll)):
            if not any(fan_isomorphic(fan, f) for f in _fano_candidates(n)):
                return _unclassified(
                    n, tau, "Fano fan outside the index list")
    return result
