"""Exact integer linear algebra: Hermite and Smith normal forms, kernels, sublattices.

Matrices are plain nested tuples of Python ints (row-major), so every
computation is arbitrary precision.  A ``k x m`` matrix whose columns generate
a sublattice of ``Z^k`` is the basic currency of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]

INFINITE = math.inf


class ZeroVector(ValueError):
    pass


class NotASublattice(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Freeze a nested sequence into an :data:`IntMatrix`, checking integrality."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x}")
                x = x.numerator
            if int(x) != x:
                raise ValueError(f"non-integral entry {x}")
            r.append(int(x))
        out.append(tuple(r))
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    if ncols is not None and out and len(out[0]) != ncols:
        raise ValueError("column count mismatch")
    return tuple(out)


def shape(M: IntMatrix, ncols: int = 0) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else ncols)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(M: IntMatrix, nrows_if_empty: int = 0) -> IntMatrix:
    if not M:
        return tuple(() for _ in range(nrows_if_empty))
    return tuple(zip(*M))


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def columns(M: IntMatrix) -> list[tuple[int, ...]]:
    return list(zip(*M)) if M else []


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(int(c[i]) for c in cols) for i in range(nrows))


def determinant(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries; the sign is kept."""
    g = math.gcd(*v) if v else 0
    if g == 0:
        raise ZeroVector("the zero vector has no primitive representative")
    return tuple(x // g for x in v)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector on the same ray.

    The zero vector is returned unchanged.
    """
    if all(type(x) is int for x in v):
        return primitive(v) if any(v) else tuple(v)
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    ints = tuple(int(x * den) for x in fr)
    if any(ints):
        return primitive(ints)
    return ints


# -- Hermite normal form -----------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf(M: IntMatrix, ncols: int = 0) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``H = M U`` and ``U`` unimodular.  ``H`` is in lower
    echelon form: in the row of each pivot, the pivot is positive, entries to
    its right vanish, and entries to its left lie in ``[0, pivot)``.  Zero
    columns are moved to the right end.

    Args:
      M: an integer matrix.
      ncols: number of columns, only consulted when ``M`` has no rows.
    """
    m, n = shape(M, ncols)
    H = [list(r) for r in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j1: int, j2: int, a: int, b: int, c: int, d: int) -> None:
        # (col_j1, col_j2) <- (a*col_j1 + b*col_j2, c*col_j1 + d*col_j2)
        for X in (H, U):
            for row in X:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = a * x + b * y, c * x + d * y

    col = 0
    for i in range(m):
        if col >= n:
            break
        for j in range(col + 1, n):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][col]
            g, s, t = _xgcd(a, b)
            colop(col, j, s, t, -b // g, a // g)
        p = H[i][col]
        if p == 0:
            continue
        if p < 0:
            for X in (H, U):
                for row in X:
                    row[col] = -row[col]
            p = -p
        for j in range(col):
            q = H[i][j] // p
            if q:
                for X in (H, U):
                    for row in X:
                        row[j] -= q * row[col]
        col += 1
    return tuple(map(tuple, H)), tuple(map(tuple, U))


def hnf_rank(H: IntMatrix) -> int:
    """Number of nonzero columns of a matrix already in Hermite form."""
    return sum(1 for c in columns(H) if any(c))


# -- Smith normal form -------------------------------------------------------


def snf(
    M: IntMatrix, ncols: int = 0, transforms: bool = False
) -> tuple[IntMatrix, IntMatrix | None, IntMatrix | None]:
    """Smith normal form ``S = U M V`` with ``d_1 | d_2 | ...``, all ``d_i > 0``.

    ``U`` and ``V`` are only built when ``transforms`` is set; otherwise the
    returned transforms are ``None``.
    """
    m, n = shape(M, ncols)
    S = [list(r) for r in M]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def rowop(i1, i2, a, b, c, d):
        for X in (S, U):
            if X is None:
                continue
            r1, r2 = X[i1], X[i2]
            X[i1] = [a * x + b * y for x, y in zip(r1, r2)]
            X[i2] = [c * x + d * y for x, y in zip(r1, r2)]

    def colop(j1, j2, a, b, c, d):
        for X in (S, V):
            if X is None:
                continue
            for row in X:
                x, y = row[j1], row[j2]
                row[j1], row[j2] = a * x + b * y, c * x + d * y

    t = 0
    while t < min(m, n):
        # choose a nonzero pivot of minimal absolute value in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            rowop(t, i, 0, 1, 1, 0)
        if j != t:
            colop(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, m):
                b = S[i][t]
                if b:
                    a = S[t][t]
                    if b % a == 0:
                        rowop(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        rowop(t, i, s, u, -b // g, a // g)
                        done = False
            for j in range(t + 1, n):
                b = S[t][j]
                if b:
                    a = S[t][t]
                    if b % a == 0:
                        colop(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, s, u = _xgcd(a, b)
                        colop(t, j, s, u, -b // g, a // g)
                        done = False
            if not done:
                continue
            # divisibility: fold any offending row into row t
            p = S[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            rowop(t, bad, 1, 1, 0, 1)
        if S[t][t] < 0:
            for X in (S, U):
                if X is not None:
                    X[t] = [-x for x in X[t]]
        t += 1
    return (
        tuple(map(tuple, S)),
        tuple(map(tuple, U)) if U is not None else None,
        tuple(map(tuple, V)) if V is not None else None,
    )


def elementary_divisors(M: IntMatrix, ncols: int = 0) -> list[int]:
    S, _, _ = snf(M, ncols)
    out = []
    for i in range(min(shape(S, ncols))):
        if S[i][i] == 0:
            break
        out.append(S[i][i])
    return out


def rank(M: IntMatrix, ncols: int = 0) -> int:
    H, _ = hnf(M, ncols)
    return hnf_rank(H)


# -- kernels and sublattices -------------------------------------------------


def kernel_basis(M: IntMatrix, ncols: int | None = None) -> IntMatrix:
    """Basis of the saturated integer kernel ``{v : M v = 0}`` as columns.

    The basis is returned in canonical Hermite form, so it is unique.  The
    result has ``ncols`` rows and ``ncols - rank(M)`` columns.
    """
    n = shape(M, ncols or 0)[1]
    H, U = hnf(M, n)
    r = hnf_rank(H)
    kcols = [c for c in columns(U)[r:]] if n else []
    K = from_columns(kcols, n)
    Hk, _ = hnf(K, len(kcols))
    return from_columns(columns(Hk)[: len(kcols)], n)


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of ``Z^k`` stored by its canonical Hermite basis.

    Two values compare equal exactly when they describe the same lattice.
    """

    ambient_rank: int
    basis: IntMatrix  # k x m, columns independent, column Hermite form

    @classmethod
    def generated_by(cls, vectors: Sequence[Sequence[int]], ambient_rank: int) -> "Sublattice":
        vecs = [tuple(int(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_rank:
                raise ValueError("dimension mismatch")
        M = from_columns(vecs, ambient_rank)
        H, _ = hnf(M, len(vecs))
        r = hnf_rank(H)
        return cls(ambient_rank, from_columns(columns(H)[:r], ambient_rank))

    @classmethod
    def full(cls, k: int) -> "Sublattice":
        return cls(k, identity(k))

    @property
    def rank(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    @property
    def generators(self) -> list[tuple[int, ...]]:
        return columns(self.basis) if self.rank else []

    def pivots(self) -> list[tuple[int, int]]:
        """``(row, value)`` of each pivot, in column order."""
        out = []
        for c in self.generators:
            i = next(i for i, x in enumerate(c) if x)
            out.append((i, c[i]))
        return out

    def __contains__(self, v) -> bool:
        return lattice_member(self, v)


def image_lattice(M: IntMatrix, ncols: int = 0) -> Sublattice:
    k, n = shape(M, ncols)
    if k == 0:
        return Sublattice(0, ())
    return Sublattice.generated_by(columns(M), k)


def lattice_member(L: Sublattice, v: Sequence[int]) -> bool:
    """Integer membership by forward substitution through the echelon basis."""
    if len(v) != L.ambient_rank:
        raise ValueError("dimension mismatch")
    r = [Fraction(x) for x in v]
    for c in L.generators:
        i = next(i for i, x in enumerate(c) if x)
        q = r[i] / c[i]
        if q.denominator != 1:
            return False
        if q:
            r = [a - q * b for a, b in zip(r, c)]
    return not any(r)


def lattice_intersection(L1: Sublattice, L2: Sublattice) -> Sublattice:
    """``L1 ∩ L2`` from the kernel of the stacked basis matrix ``[B1 | -B2]``."""
    if L1.ambient_rank != L2.ambient_rank:
        raise ValueError("ambient ranks differ")
    k = L1.ambient_rank
    g1, g2 = L1.generators, L2.generators
    if not g1 or not g2:
        return Sublattice(k, from_columns([], k))
    stacked = from_columns(g1 + [tuple(-x for x in c) for c in g2], k)
    K = kernel_basis(stacked, len(g1) + len(g2))
    vecs = []
    for x in columns(K):
        vecs.append(tuple(sum(xi * c[row] for xi, c in zip(x, g1)) for row in range(k)))
    return Sublattice.generated_by(vecs, k)


def lattice_index(sub: Sublattice, sup: Sublattice) -> int | float:
    """Index ``[sup : sub]``, or ``math.inf`` when the ranks differ.

    Raises:
      NotASublattice: if ``sub`` is not contained in ``sup``.
    """
    for c in sub.generators:
        if not lattice_member(sup, c):
            raise NotASublattice(f"{c} is not in the larger lattice")
    if sub.rank != sup.rank:
        return INFINITE
    # equal spans force identical pivot rows in the echelon bases
    num = math.prod(p for _, p in sub.pivots())
    den = math.prod(p for _, p in sup.pivots())
    return num // den


def is_surjective(M: IntMatrix, ncols: int = 0) -> bool:
    """True iff the columns of ``M`` generate ``Z^rows``."""
    k, _ = shape(M, ncols)
    return image_lattice(M, ncols) == Sublattice.full(k)


def saturation_rank(vectors: Sequence[Sequence], dim: int) -> int:
    """Rank over the rationals of a list of rational vectors."""
    return len(rref([list(v) for v in vectors], dim))


def rref(rows: list[list], dim: int) -> list[list[Fraction]]:
    """Reduced row echelon form over Q; zero rows dropped."""
    A = [[Fraction(x) for x in r] for r in rows]
    out: list[list[Fraction]] = []
    piv_cols: list[int] = []
    for r in A:
        for p, pc in zip(out, piv_cols):
            if r[pc]:
                f = r[pc]
                r = [a - f * b for a, b in zip(r, p)]
        j = next((j for j in range(dim) if r[j]), None)
        if j is None:
            continue
        f = r[j]
        r = [a / f for a in r]
        for idx, p in enumerate(out):
            if p[j]:
                g = p[j]
                out[idx] = [a - g * b for a, b in zip(p, r)]
        out.append(r)
        piv_cols.append(j)
    order = sorted(range(len(out)), key=lambda i: piv_cols[i])
    return [out[i] for i in order]


def rational_kernel(rows: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of ``{x in Q^dim : row . x = 0 for all rows}``.

    The basis is canonical: it is read off the reduced row echelon form.
    """
    R = rref([list(r) for r in rows], dim)
    pivots = [next(j for j in range(dim) if r[j]) for r in R]
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for r, p in zip(R, pivots):
            v[p] = -r[f]
        basis.append(clear_denominators(v))
    return basis


def canonical_subspace_basis(vectors: Sequence[Sequence], dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical primitive-integer basis of the rational span of ``vectors``."""
    return tuple(clear_denominators(r) for r in rref([list(v) for v in vectors], dim))
