"""Exact linear algebra over prime fields F_p.

Scalars are plain integer residues in [0, p); the modulus travels with the
containers (FVector / FMatrix). All values are immutable and all operations
are pure, so everything here is safe to share between threads.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


@functools.lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_modulus(p: int) -> None:
    # prime fields only, and small enough that generated subfields are trivial
    if not isinstance(p, int) or not 2 <= p < 2**16 or not is_prime(p):
        raise ValueError(f"modulus must be a prime in [2, 2**16), got {p!r}")


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 in F_p")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FVector:
    p: int
    coords: tuple[int, ...]

    def __post_init__(self):
        check_modulus(self.p)
        object.__setattr__(self, "coords", tuple(c % self.p for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "FVector") -> "FVector":
        _check_same_space(self, other)
        return FVector(self.p, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "FVector") -> "FVector":
        _check_same_space(self, other)
        return FVector(self.p, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "FVector":
        return FVector(self.p, tuple(-a for a in self.coords))

    def scale(self, c: int) -> "FVector":
        return FVector(self.p, tuple(c * a for a in self.coords))


def _check_same_space(a: FVector, b: FVector) -> None:
    if a.p != b.p:
        raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def zero_vector(p: int, d: int) -> FVector:
    return FVector(p, (0,) * d)


def basis_vector(p: int, d: int, i: int) -> FVector:
    if not 0 <= i < d:
        raise ValueError(f"basis index {i} out of range for dimension {d}")
    return FVector(p, tuple(1 if j == i else 0 for j in range(d)))


def standard_basis(p: int, d: int) -> list[FVector]:
    return [basis_vector(p, d, i) for i in range(d)]


@dataclass(frozen=True)
class FMatrix:
    p: int
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        check_modulus(self.p)
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")
        object.__setattr__(
            self, "rows", tuple(tuple(c % self.p for c in row) for row in self.rows)
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row_vectors(self) -> list[FVector]:
        return [FVector(self.p, row) for row in self.rows]

    def column(self, j: int) -> FVector:
        return FVector(self.p, tuple(row[j] for row in self.rows))

    def matvec(self, x: FVector) -> FVector:
        if x.dim != self.ncols:
            raise ValueError("shape mismatch in matvec")
        return FVector(
            self.p,
            tuple(sum(a * b for a, b in zip(row, x.coords)) % self.p for row in self.rows),
        )

    def transpose(self) -> "FMatrix":
        cols = tuple(tuple(row[j] for row in self.rows) for j in range(self.ncols))
        return FMatrix(self.p, cols, self.nrows)


def matrix(p: int, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> FMatrix:
    rows = tuple(tuple(r) for r in rows)
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for a matrix with no rows")
        ncols = len(rows[0])
    return FMatrix(p, rows, ncols)


def matrix_from_rows(vectors: Sequence[FVector], p: int, d: int) -> FMatrix:
    for v in vectors:
        if v.p != p or v.dim != d:
            raise ValueError("dimension mismatch among rows")
    return FMatrix(p, tuple(v.coords for v in vectors), d)


def identity_matrix(p: int, d: int) -> FMatrix:
    return FMatrix(p, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)), d)


def det_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square integer matrix mod p (Gaussian elimination)."""
    n = len(rows)
    if n == 0:
        return 1 % p
    m = [list(row) for row in rows]
    det = 1
    for i in range(n):
        pivot = None
        for r in range(i, n):
            if m[r][i] % p != 0:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det = (det * m[i][i]) % p
        inv = inv_mod(m[i][i], p)
        for r in range(i + 1, n):
            f = (m[r][i] * inv) % p
            if f:
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[i])]
    return det % p


def rref(m: FMatrix) -> tuple[FMatrix, list[int], int]:
    """Row-reduce over F_p.

    Returns the (unique) reduced row echelon form, the pivot column indices
    and the rank. Pivot selection is the first nonzero entry scanning down,
    so the result is deterministic.
    """
    p = m.p
    work = [list(row) for row in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = inv_mod(work[r][c], p)
        work[r] = [(x * inv) % p for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    reduced = FMatrix(p, tuple(tuple(row) for row in work), ncols)
    return reduced, pivots, len(pivots)


def rank(m: FMatrix) -> int:
    return rref(m)[2]


def kernel_basis(m: FMatrix) -> list[FVector]:
    """Basis of the right null space {x : m.x = 0}, one vector per free column."""
    reduced, pivots, _ = rref(m)
    p = m.p
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.ncols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        x = [0] * m.ncols
        x[f] = 1
        for r_idx, c in enumerate(pivots):
            x[c] = (-reduced.rows[r_idx][f]) % p
        basis.append(FVector(p, tuple(x)))
    return basis


def solve(m: FMatrix, b: FVector) -> Optional[FVector]:
    """Some x with m.x = b, or None when inconsistent.

    Deterministic choice: free variables are set to 0 under rref pivot order.
    """
    if b.p != m.p or b.dim != m.nrows:
        raise ValueError("right-hand side shape mismatch")
    aug = FMatrix(
        m.p,
        tuple(row + (b.coords[i],) for i, row in enumerate(m.rows)),
        m.ncols + 1,
    )
    reduced, pivots, _ = rref(aug)
    if m.ncols in pivots:
        return None
    x = [0] * m.ncols
    for r_idx, c in enumerate(pivots):
        x[c] = reduced.rows[r_idx][m.ncols]
    return FVector(m.p, tuple(x))


def theta(vectors: Sequence[FVector]) -> bool:
    """Linear independence over F_p; the empty family is independent."""
    if not vectors:
        return True
    p, d = vectors[0].p, vectors[0].dim
    for v in vectors:
        if v.p != p or v.dim != d:
            raise ValueError("dimension mismatch among vectors")
    if len(vectors) > d:
        return False
    return rank(matrix_from_rows(vectors, p, d)) == len(vectors)


def coord(v: FVector, basis: Sequence[FVector], i: int) -> int:
    """The i-th coordinate of v over basis (1-based), as a total function.

    Returns lambda_i when the basis is independent and v lies in its span,
    and 0 in every other case.
    """
    if not 1 <= i <= len(basis):
        raise ValueError(f"coordinate index {i} out of range 1..{len(basis)}")
    if not theta(basis):
        return 0
    p, d = basis[0].p, basis[0].dim
    cols = matrix_from_rows(basis, p, d).transpose()
    x = solve(cols, v)
    if x is None:
        return 0
    return x.coords[i - 1]


def coordinates(v: FVector, basis: Sequence[FVector]) -> Optional[tuple[int, ...]]:
    """All coordinates of v over an independent basis, or None if v is outside
    the span (or the basis is dependent)."""
    if not basis:
        return () if v.is_zero() else None
    if not theta(basis):
        return None
    p, d = basis[0].p, basis[0].dim
    cols = matrix_from_rows(basis, p, d).transpose()
    x = solve(cols, v)
    return None if x is None else x.coords


def span_dim(vectors: Sequence[FVector], p: int, d: int) -> int:
    if not vectors:
        return 0
    return rank(matrix_from_rows(vectors, p, d))


def in_span(v: FVector, vectors: Sequence[FVector]) -> bool:
    if not vectors:
        return v.is_zero()
    stacked = list(vectors) + [v]
    return span_dim(stacked, v.p, v.dim) == span_dim(vectors, v.p, v.dim)


def enumerate_span(basis: Sequence[FVector], p: int, d: int) -> Iterable[FVector]:
    """All vectors in the span, in lexicographic coefficient order."""
    if not basis:
        yield zero_vector(p, d)
        return
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        acc = [0] * d
        for c, v in zip(coeffs, basis):
            if c:
                for j, a in enumerate(v.coords):
                    acc[j] += c * a
        yield FVector(p, tuple(acc))
