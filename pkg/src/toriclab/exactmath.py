"""Exact integer and rational linear algebra.

All arithmetic uses arbitrary-precision ints and ``fractions.Fraction``;
there is no floating point anywhere. Vectors are plain tuples. Matrices
at the API boundary are ``IntMatrix`` / ``RatMatrix``; the worker
functions accept either those or any sequence of row sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count must equal rows*cols")

    @classmethod
    def from_rows(cls, rows):
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(x for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    def to_rows(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))


@dataclass(frozen=True)
class RatMatrix:
    """Dense rational matrix; every entry is a reduced Fraction."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count must equal rows*cols")
        object.__setattr__(self, "entries",
                           tuple(Fraction(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows):
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(x for r in rows for x in r)
        return cls(len(rows), ncols, flat)

    def to_rows(self):
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]


def _as_rows(A):
    if isinstance(A, (IntMatrix, RatMatrix)):
        return A.to_rows()
    return [list(r) for r in A]


# ---------------------------------------------------------------------------
# vectors

def dot(u, v):
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive(v):
    """v divided by the gcd of its entries; the primitive generator of R+·v.

    Accepts an integer vector or a rational vector lying on a rational ray;
    always returns an integer tuple with entry-gcd 1.
    """
    v = tuple(v)
    if all(x == 0 for x in v):
        raise ValueError("zero has no primitive representative")
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in v):
        m = 1
        for x in v:
            m = m * Fraction(x).denominator // gcd(m, Fraction(x).denominator)
        v = tuple(int(x * m) for x in v)
    else:
        v = tuple(int(x) for x in v)
    g = vec_gcd(v)
    return tuple(x // g for x in v)


def matvec(A, x):
    return tuple(dot(row, x) for row in _as_rows(A))


def transpose_rows(rows):
    return [list(col) for col in zip(*rows)] if rows else []


def identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# rational elimination

def rref(A):
    """Reduced row echelon form over Q. Returns (rows, pivot column list)."""
    M = [[Fraction(x) for x in row] for row in _as_rows(A)]
    if not M:
        return [], []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def _int_rank(M):
    """Rank of an integer row list by fraction-free elimination."""
    m = len(M)
    n = len(M[0]) if M else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
        top = M[r]
        pv = top[c]
        for i in range(r + 1, m):
            x = M[i][c]
            if x:
                row = M[i]
                for j in range(c + 1, n):
                    row[j] = row[j] * pv - top[j] * x
                row[c] = 0
                g = 0
                for v in row:
                    if v:
                        g = gcd(g, v)
                if g > 1:
                    M[i] = [v // g for v in row]
        r += 1
        if r == m:
            break
    return r


def rank(A):
    rows = _as_rows(A)
    ints = []
    for row in rows:
        m = 1
        for x in row:
            d = x.denominator
            if d != 1:
                m = m * d // gcd(m, d)
        ints.append([int(x) for x in row] if m == 1
                    else [int(x * m) for x in row])
    return _int_rank(ints)


def det(A):
    """Exact determinant via fraction-free (Bareiss) elimination."""
    M = [[Fraction(x) for x in row] for row in _as_rows(A)]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if pr is None:
                return 0
            M[k], M[pr] = M[pr], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
            M[i][k] = Fraction(0)
        prev = M[k][k]
    d = sign * M[n - 1][n - 1]
    return int(d) if d.denominator == 1 else d


def rat_solve(A, b):
    """Unique solution of A·x = b, or None when the system is inconsistent.

    A must be square or overdetermined. A consistent system with more than
    one solution raises instead of silently picking one.
    """
    rows = _as_rows(A)
    b = list(b)
    if len(rows) != len(b):
        raise ValueError("shape mismatch")
    ncols = len(rows[0]) if rows else 0
    if len(rows) < ncols:
        raise ValueError("non-unique solution")
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(rows, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        raise ValueError("non-unique solution")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = R[r][-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# integer normal forms

def hnf(rows):
    """Row Hermite normal form over Z. Returns (H, U) with U·rows = H.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    zero rows come last, and U is unimodular.
    """
    M = [[int(x) for x in r] for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    U = identity_rows(nrows)
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, nrows) if M[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[i0] = M[i0], M[r]
            U[r], U[i0] = U[i0], U[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, nrows):
                if M[i][c] != 0:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        if r < nrows and M[r][c] != 0:
            if M[r][c] < 0:
                M[r] = [-x for x in M[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = M[i][c] // M[r][c]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
            if r == nrows:
                break
    return M, U


def kernel_basis(A):
    """Canonical lattice basis of {x in Z^cols : A·x = 0}.

    The basis is returned as a tuple of integer vectors in Hermite normal
    form of the kernel lattice, so equal kernels give equal output.
    """
    rows = _as_rows(A)
    cols = transpose_rows(rows)
    c = len(cols)
    r = len(rows)
    if c == 0:
        return ()
    aug = [list(map(int, cols[i])) + identity_rows(c)[i] for i in range(c)]
    H, _ = hnf(aug)
    return tuple(tuple(row[r:]) for row in H
                 if all(x == 0 for x in row[:r]) and any(row[r:]))


def hermite_kernel(A):
    """Kernel of an integer matrix; columns of the result form a basis."""
    basis = kernel_basis(A)
    rows = _as_rows(A)
    ncols = len(rows[0]) if rows else 0
    col_rows = transpose_rows([list(v) for v in basis])
    if not basis:
        return IntMatrix(ncols, 0, ())
    return IntMatrix.from_rows(col_rows)


def smith_with_transforms(A):
    """Smith normal form. Returns (diag, U, V) with U·A·V diagonal.

    diag has length min(rows, cols), entries satisfy d1 | d2 | ... with
    zeros trailing; U, V are unimodular (as row lists).
    """
    M = [[int(x) for x in r] for r in _as_rows(A)]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    U = identity_rows(nrows)
    V = identity_rows(ncols)

    def row_op(i, j, q):  # row_i -= q * row_j
        M[i] = [a - q * b for a, b in zip(M[i], M[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in M:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nrows, ncols):
        # move a minimal nonzero entry of the remaining block to (t, t)
        pos = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if M[i][j] != 0 and (best is None or abs(M[i][j]) < best):
                    best = abs(M[i][j])
                    pos = (i, j)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        dirty = False
        for i in range(t + 1, nrows):
            if M[i][t] != 0:
                q = M[i][t] // M[t][t]
                row_op(i, t, q)
                if M[i][t] != 0:
                    dirty = True
        for j in range(t + 1, ncols):
            if M[t][j] != 0:
                q = M[t][j] // M[t][t]
                col_op(j, t, q)
                if M[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the rest of the block
        bad = next(((i, j) for i in range(t + 1, nrows)
                    for j in range(t + 1, ncols)
                    if M[i][j] % M[t][t] != 0), None)
        if bad is not None:
            row_op(t, bad[0], -1)
            continue
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [M[i][i] for i in range(min(nrows, ncols))]
    return diag, U, V


def smith_diagonal(A):
    """Invariant factors d1 | d2 | ... of an integer matrix."""
    return smith_with_transforms(A)[0]


def basis_extension(vectors, n):
    """Unimodular S (rows) with S·v_j = e_j for part-of-a-basis vectors.

    The v_j must extend to a lattice basis of Z^n (all Smith invariants 1),
    as the rays of a smooth cone do.
    """
    k = len(vectors)
    cols = transpose_rows([list(map(int, v)) for v in vectors])
    diag, U, V = smith_with_transforms(cols)
    if diag != [1] * k:
        raise ValueError("vectors do not extend to a lattice basis")
    # U·A·V = [I_k; 0]  =>  (blockdiag(V, I) · U) · A = [I_k; 0]
    S = [list(r) for r in U]
    top = [[sum(V[i][l] * S[l][j] for l in range(k)) for j in range(n)]
           for i in range(k)]
    return top + S[k:]
