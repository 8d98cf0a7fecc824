import random

import pytest

from toriclab.catalog import product_polytope
from toriclab.cayley import CayleySpec, build_cayley, simplex
from toriclab.polyhedral import Polytope

CORPUS_SEED = 20260823


def _cube(n):
    return Polytope.from_vertices(
        [tuple((m >> i) & 1 for i in range(n)) for m in range(2 ** n)])


def _structured_members():
    """30 smooth members so smoothness-conditional checks are non-vacuous."""
    out = []
    for n in (2, 3, 4):
        for s in (1, 2, 3):
            out.append(simplex(n, s))                       # 9 dilations
    for n in (2, 3, 4):
        out.append(_cube(n))                                # 3 cubes
    out.append(product_polytope(simplex(2), simplex(1)))    # 5 products
    out.append(product_polytope(simplex(2), simplex(2)))
    out.append(product_polytope(simplex(3), simplex(1)))
    out.append(product_polytope(simplex(2, 2), simplex(1)))
    out.append(product_polytope(simplex(1, 3), simplex(1)))
    for s in (2, 3, 4):
        out.append(simplex(1, s))                           # 3 segments
    for degs in ((1, 2), (2, 2), (1, 3), (2, 3)):           # 4 Cayley^1
        out.append(build_cayley(
            CayleySpec(1, tuple(simplex(1, d) for d in degs))))
    for degs in ((1, 1, 1), (1, 1, 3)):                     # 2 Cayley^2
        out.append(build_cayley(
            CayleySpec(2, tuple(simplex(1, d) for d in degs))))
    out.append(build_cayley(CayleySpec(1, (simplex(2), simplex(2)))))
    out.append(build_cayley(CayleySpec(1, (simplex(2), simplex(2, 2)))))
    out.append(build_cayley(CayleySpec(1, (simplex(3), simplex(3)))))
    out.append(build_cayley(CayleySpec(3, (simplex(1), simplex(1)))))
    return out


@pytest.fixture(scope="session")
def corpus():
    """200 lattice polytopes of dimension <= 4: 170 seeded-random hulls
    plus 30 structured smooth members."""
    rnd = random.Random(CORPUS_SEED)
    members = []
    for n in [2] * 60 + [3] * 60 + [4] * 50:
        while True:
            npts = rnd.randint(n + 1, n + 4)
            pts = [tuple(rnd.randint(-3, 4) for _ in range(n))
                   for _ in range(npts)]
            try:
                members.append(Polytope.from_vertices(pts))
                break
            except ValueError:
                continue
    members += _structured_members()
    assert len(members) == 200
    return members
