"""Connected-component computation for the additive group of a form space.

Subspaces are held in canonical reduced echelon form so equality is
structural. The component of a parameter set is the intersection of the
kernels of all functionals obtained by filling the first n-1 form slots
from the set; the partition identity states that over n parts this
intersection can be assembled from the part-omitting sub-intersections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .forms import AlternatingForm, evaluate
from .linalg import (
    FMatrix,
    FVector,
    kernel_basis,
    matrix_from_rows,
    rref,
)


@dataclass(frozen=True)
class Subspace:
    p: int
    d: int
    basis: tuple[tuple[int, ...], ...]  # reduced echelon rows, no zero rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.d - self.dim

    def basis_vectors(self) -> list[FVector]:
        return [FVector(self.p, row) for row in self.basis]

    def contains(self, v: FVector) -> bool:
        if v.p != self.p or v.dim != self.d:
            raise ValueError("vector incompatible with subspace")
        stacked = matrix_from_rows(self.basis_vectors() + [v], self.p, self.d)
        return rref(stacked)[2] == self.dim


def subspace_from_spanning(p: int, d: int, vectors: Sequence[FVector]) -> Subspace:
    """Canonical representation: rref of the spanning rows, zero rows dropped."""
    if not vectors:
        return Subspace(p, d, ())
    reduced, _, rk = rref(matrix_from_rows(vectors, p, d))
    return Subspace(p, d, reduced.rows[:rk])


def full_space(p: int, d: int) -> Subspace:
    return Subspace(p, d, tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))


def annihilator_rows(space: Subspace) -> list[FVector]:
    """Functionals vanishing exactly on the subspace."""
    if space.dim == 0:
        return [FVector(space.p, tuple(1 if i == j else 0 for j in range(space.d))) for i in range(space.d)]
    return kernel_basis(matrix_from_rows(space.basis_vectors(), space.p, space.d))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if (a.p, a.d) != (b.p, b.d):
        raise ValueError("subspaces live in different ambient spaces")
    rows = annihilator_rows(a) + annihilator_rows(b)
    if not rows:
        return full_space(a.p, a.d)
    ker = kernel_basis(matrix_from_rows(rows, a.p, a.d))
    return subspace_from_spanning(a.p, a.d, ker)


def functional_row(form: AlternatingForm, a_tuple: Sequence[FVector]) -> tuple[int, ...]:
    """Row of the functional v -> form(a_tuple..., v) over the standard basis."""
    if len(a_tuple) != form.n - 1:
        raise ValueError(f"expected {form.n - 1} vectors, got {len(a_tuple)}")
    row = []
    for j in range(form.d):
        e_j = FVector(form.p, tuple(1 if c == j else 0 for c in range(form.d)))
        row.append(evaluate(form, list(a_tuple) + [e_j]))
    return tuple(row)


def v_perp(form: AlternatingForm, a_tuple: Sequence[FVector]) -> Subspace:
    """Kernel of the functional induced by filling the first n-1 slots."""
    row = functional_row(form, a_tuple)
    ker = kernel_basis(FMatrix(form.p, (row,), form.d))
    return subspace_from_spanning(form.p, form.d, ker)


def g_infty(form: AlternatingForm, parameters: Sequence[FVector]) -> Subspace:
    """Intersection of v_perp over all (n-1)-tuples from the set, with
    repetition; the empty set yields the full space."""
    rows = []
    for a_tuple in itertools.product(parameters, repeat=form.n - 1):
        row = functional_row(form, a_tuple)
        if any(row):
            rows.append(FVector(form.p, row))
    if not rows:
        return full_space(form.p, form.d)
    ker = kernel_basis(matrix_from_rows(rows, form.p, form.d))
    return subspace_from_spanning(form.p, form.d, ker)


def intersection_identity_check(
    form: AlternatingForm, parts: Sequence[Sequence[FVector]]
) -> bool:
    """Whether the component of the union of n parts equals the intersection
    of the components of the n part-omitting unions.

    Every (n-1)-tuple over the union omits at least one of the n parts, so
    both sides intersect the same kernels; this computes both sides from
    scratch and compares canonical bases.
    """
    if len(parts) != form.n:
        raise ValueError(f"expected {form.n} parts, got {len(parts)}")
    union = [v for part in parts for v in part]
    lhs = g_infty(form, union)
    rhs = full_space(form.p, form.d)
    for i in range(len(parts)):
        omitted = [v for j, part in enumerate(parts) if j != i for v in part]
        rhs = intersect(rhs, g_infty(form, omitted))
    return lhs == rhs
