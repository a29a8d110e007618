"""Coordinates on the (n-1)-th exterior power of F_p^d.

Wedge vectors are stored sparsely on the basis of strictly increasing index
tuples, ordered lexicographically. The induced pairing of a wedge vector
against an ambient vector, and the matrices of the two maps it induces
(wedge space -> dual of V, and V -> dual of a subspace's wedge space), live
here as well.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .linalg import FMatrix, FVector, check_modulus, det_mod, theta

if TYPE_CHECKING:  # pragma: no cover
    from .forms import AlternatingForm

WedgeIndex = tuple[int, ...]


def wedge_indices(d: int, grade: int) -> Iterable[WedgeIndex]:
    """Strictly increasing grade-tuples in [0, d), lexicographically."""
    return itertools.combinations(range(d), grade)


def wedge_dim(d: int, grade: int) -> int:
    return math.comb(d, grade)


def check_wedge_index(idx: WedgeIndex, grade: int, d: int) -> None:
    if len(idx) != grade:
        raise ValueError(f"wedge index {idx} has length {len(idx)}, expected {grade}")
    if any(not 0 <= i < d for i in idx):
        raise ValueError(f"wedge index {idx} out of range for dimension {d}")
    if any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError(f"wedge index {idx} is not strictly increasing")


@dataclass(frozen=True)
class WedgeVector:
    p: int
    grade: int  # n - 1 for an n-linear form
    d: int
    terms: tuple[tuple[WedgeIndex, int], ...]  # sorted, nonzero coefficients only

    def __post_init__(self):
        check_modulus(self.p)
        for idx, _ in self.terms:
            check_wedge_index(idx, self.grade, self.d)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, idx: WedgeIndex) -> int:
        for key, c in self.terms:
            if key == idx:
                return c
        return 0

    def coords(self) -> FVector:
        """Dense coordinates over the lexicographic wedge basis."""
        positions = {idx: q for q, idx in enumerate(wedge_indices(self.d, self.grade))}
        dense = [0] * len(positions)
        for idx, c in self.terms:
            dense[positions[idx]] = c
        return FVector(self.p, tuple(dense))

    def __add__(self, other: "WedgeVector") -> "WedgeVector":
        self._check_compatible(other)
        acc = dict(self.terms)
        for idx, c in other.terms:
            acc[idx] = acc.get(idx, 0) + c
        return wedge_vector(self.p, self.grade, self.d, acc)

    def scale(self, c: int) -> "WedgeVector":
        return wedge_vector(self.p, self.grade, self.d, {idx: c * a for idx, a in self.terms})

    def _check_compatible(self, other: "WedgeVector") -> None:
        if (self.p, self.grade, self.d) != (other.p, other.grade, other.d):
            raise ValueError("wedge vectors live in different spaces")


def wedge_vector(p: int, grade: int, d: int, terms: Mapping[WedgeIndex, int]) -> WedgeVector:
    cleaned = {}
    for idx, c in terms.items():
        c %= p
        if c:
            cleaned[tuple(idx)] = c
    return WedgeVector(p, grade, d, tuple(sorted(cleaned.items())))


def zero_wedge(p: int, grade: int, d: int) -> WedgeVector:
    return WedgeVector(p, grade, d, ())


def basis_wedge(p: int, grade: int, d: int, idx: WedgeIndex) -> WedgeVector:
    return wedge_vector(p, grade, d, {tuple(idx): 1})


def wedge_from_coords(p: int, grade: int, d: int, coords: FVector) -> WedgeVector:
    terms = {}
    for q, idx in enumerate(wedge_indices(d, grade)):
        if coords.coords[q]:
            terms[idx] = coords.coords[q]
    return wedge_vector(p, grade, d, terms)


def wedge_of_vectors(vectors: Sequence[FVector]) -> WedgeVector:
    """The wedge product of grade-many vectors, in increasing-tuple coordinates.

    The coefficient at (i_1 < ... < i_g) is the determinant of the minor of
    the stacked vectors at those columns, so the result is alternating and
    multilinear in its arguments.
    """
    if not vectors:
        raise ValueError("wedge of an empty tuple is not supported (grade 0)")
    p, d = vectors[0].p, vectors[0].dim
    grade = len(vectors)
    for v in vectors:
        if v.p != p or v.dim != d:
            raise ValueError("dimension mismatch among wedge factors")
    rows = [list(v.coords) for v in vectors]
    terms = {}
    for idx in wedge_indices(d, grade):
        minor = [[row[j] for j in idx] for row in rows]
        c = det_mod(minor, p)
        if c:
            terms[idx] = c
    return wedge_vector(p, grade, d, terms)


def insertion_sign(idx: WedgeIndex, j: int) -> int:
    """Sign of sorting (idx..., j) into increasing order; 0 if j collides."""
    if j in idx:
        return 0
    pos = sum(1 for i in idx if i < j)
    return -1 if (len(idx) - pos) % 2 else 1


def _basis_pairing(form: "AlternatingForm", idx: WedgeIndex, j: int) -> int:
    """Form value on (e_{idx[0]}, ..., e_{idx[-1]}, e_j)."""
    sign = insertion_sign(idx, j)
    if sign == 0:
        return 0
    key = tuple(sorted(idx + (j,)))
    return (sign * form.coeff_map.get(key, 0)) % form.p


def pairing2(form: "AlternatingForm", t: WedgeVector, w: FVector) -> int:
    """The bilinear pairing of a wedge vector against an ambient vector.

    On a pure wedge of basis vectors this returns the stored form
    coefficient; in general it is bilinear in (t, w).
    """
    if t.p != form.p or t.d != form.d or t.grade != form.n - 1:
        raise ValueError("wedge vector incompatible with form")
    if w.p != form.p or w.dim != form.d:
        raise ValueError("vector incompatible with form")
    total = 0
    for idx, c in t.terms:
        idx_set = set(idx)
        for j, wj in enumerate(w.coords):
            if wj and j not in idx_set:
                total += c * wj * _basis_pairing(form, idx, j)
    return total % form.p


def psi_matrix(form: "AlternatingForm") -> FMatrix:
    """Matrix of (wedge space -> dual of V): d rows, one column per wedge index.

    The column at a wedge index is the functional v -> <basis wedge, v>
    written in the dual standard basis. Entries are computed directly from
    the stored coefficients, independently of pairing2.
    """
    cols = list(wedge_indices(form.d, form.n - 1))
    rows = tuple(
        tuple(_basis_pairing(form, idx, r) for idx in cols) for r in range(form.d)
    )
    return FMatrix(form.p, rows, len(cols))


def phi_matrix(form: "AlternatingForm", w_basis: Sequence[FVector]) -> FMatrix:
    """Matrix of (V -> dual of the wedge space of W) for W = span(w_basis).

    Rows are indexed by the lexicographic wedge basis of W (built from
    subtuples of w_basis), columns by the ambient standard basis.
    """
    if not theta(w_basis):
        raise ValueError("w_basis must be linearly independent")
    grade = form.n - 1
    rows = []
    for subset in itertools.combinations(range(len(w_basis)), grade):
        t = wedge_of_vectors([w_basis[i] for i in subset])
        row = []
        for j in range(form.d):
            e_j = FVector(form.p, tuple(1 if c == j else 0 for c in range(form.d)))
            row.append(pairing2(form, t, e_j))
        rows.append(tuple(row))
    return FMatrix(form.p, tuple(rows), form.d)
