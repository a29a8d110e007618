"""Alternating n-linear forms on F_p^d.

A form is stored by its coefficients on strictly increasing basis n-tuples;
evaluation on arbitrary vectors is the alternating multilinear extension
(minor determinants against the stored tuples). On top of that sit the
radical, the non-degeneracy and genericity certificates, dual tuples, the
prescribed-pairing solver, and the step-by-step extension of a form to one
whose old wedge vectors all pair nontrivially with the new space.
"""

from __future__ import annotations

import functools
import itertools
import os
import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import NoSolution, NotGenericHere, TooLarge
from .exterior import (
    WedgeVector,
    basis_wedge,
    pairing2,
    phi_matrix,
    psi_matrix,
    wedge_dim,
    wedge_from_coords,
    wedge_indices,
    wedge_of_vectors,
)
from .linalg import (
    FMatrix,
    FVector,
    check_modulus,
    det_mod,
    in_span,
    kernel_basis,
    matrix_from_rows,
    rank,
    solve,
    standard_basis,
    theta,
)

MAX_TOWER_DIM = 64


def enumeration_budget(default: int = 10**6) -> int:
    raw = os.environ.get("MULTIFORM_BUDGET")
    if raw is None:
        return default
    return int(raw)


@dataclass(frozen=True)
class AlternatingForm:
    p: int
    n: int
    d: int
    coeffs: tuple[tuple[tuple[int, ...], int], ...]  # sorted, nonzero only

    def __post_init__(self):
        check_modulus(self.p)
        if self.n < 2:
            raise ValueError(f"arity must be at least 2, got {self.n}")
        if self.d < 0:
            raise ValueError("dimension must be nonnegative")
        for key, c in self.coeffs:
            if len(key) != self.n:
                raise ValueError(f"coefficient key {key} has wrong length")
            if any(a >= b for a, b in zip(key, key[1:])):
                raise ValueError(f"coefficient key {key} is not strictly increasing")
            if any(not 0 <= i < self.d for i in key):
                raise ValueError(f"coefficient key {key} out of range")
            if not 0 < c < self.p:
                raise ValueError(f"coefficient {c} not reduced or zero")

    @functools.cached_property
    def coeff_map(self) -> dict[tuple[int, ...], int]:
        return dict(self.coeffs)

    def coeff(self, key: Sequence[int]) -> int:
        return self.coeff_map.get(tuple(key), 0)


def alternating_form(
    p: int, n: int, d: int, coeffs: Mapping[tuple[int, ...], int]
) -> AlternatingForm:
    cleaned = {}
    for key, c in coeffs.items():
        c %= p
        if c:
            cleaned[tuple(key)] = c
    return AlternatingForm(p, n, d, tuple(sorted(cleaned.items())))


def zero_form(p: int, n: int, d: int) -> AlternatingForm:
    return AlternatingForm(p, n, d, ())


def volume_form(p: int, n: int, coefficient: int = 1) -> AlternatingForm:
    """The form on F_p^n with a single coefficient on (0, ..., n-1)."""
    return alternating_form(p, n, n, {tuple(range(n)): coefficient})


def standard_symplectic(p: int, d: int) -> AlternatingForm:
    """Bilinear alternating form pairing consecutive coordinates; d even."""
    if d % 2:
        raise ValueError("standard symplectic form needs even dimension")
    return alternating_form(p, 2, d, {(2 * i, 2 * i + 1): 1 for i in range(d // 2)})


def evaluate(form: AlternatingForm, vectors: Sequence[FVector]) -> int:
    """Form value on n vectors: sum of stored coefficients times the minor
    determinants of the stacked vectors at those column tuples."""
    if len(vectors) != form.n:
        raise ValueError(f"expected {form.n} vectors, got {len(vectors)}")
    for v in vectors:
        if v.p != form.p or v.dim != form.d:
            raise ValueError("vector incompatible with form")
    rows = [list(v.coords) for v in vectors]
    total = 0
    for key, c in form.coeffs:
        minor = [[row[j] for j in key] for row in rows]
        det = det_mod(minor, form.p)
        if det:
            total += c * det
    return total % form.p


def radical(form: AlternatingForm) -> list[WedgeVector]:
    """Basis of the kernel of the wedge-to-dual map, as wedge vectors."""
    ker = kernel_basis(psi_matrix(form))
    return [wedge_from_coords(form.p, form.n - 1, form.d, v) for v in ker]


def is_nondegenerate(form: AlternatingForm) -> bool:
    """True iff every nonzero wedge vector pairs nontrivially with some vector.

    When d < n-1 the wedge space is zero, so this holds vacuously.
    """
    return not radical(form)


def is_generic(form: AlternatingForm) -> bool:
    """True iff prescribed pairing values are always achievable, certified by
    surjectivity of the pairing matrix for the full standard basis (vacuous
    for d < n-1, same convention as is_nondegenerate)."""
    m = phi_matrix(form, standard_basis(form.p, form.d))
    return rank(m) == m.nrows


def pairing_row(form: AlternatingForm, t: WedgeVector) -> tuple[int, ...]:
    """The functional <t, -> as a row over the standard basis."""
    row = []
    for j in range(form.d):
        e_j = FVector(form.p, tuple(1 if c == j else 0 for c in range(form.d)))
        row.append(pairing2(form, t, e_j))
    return tuple(row)


def dual_tuples(
    form: AlternatingForm, w_basis: Sequence[FVector]
) -> tuple[list[WedgeVector], list[FVector]]:
    """Wedge basis of span(w_basis) together with ambient vectors pairing to
    the identity pattern against it."""
    if not theta(w_basis):
        raise ValueError("w_basis must be linearly independent")
    grade = form.n - 1
    ts = [
        wedge_of_vectors([w_basis[i] for i in subset])
        for subset in itertools.combinations(range(len(w_basis)), grade)
    ]
    if not ts:
        return [], []
    m = phi_matrix(form, w_basis)
    us = []
    for j in range(len(ts)):
        target = FVector(form.p, tuple(1 if i == j else 0 for i in range(m.nrows)))
        u = solve(m, target)
        if u is None:
            raise NotGenericHere(
                f"no dual tuple for a {len(w_basis)}-dimensional subspace here"
            )
        us.append(u)
    return ts, us


def find_w(
    form: AlternatingForm,
    ts: Sequence[WedgeVector],
    ks: Sequence[int],
    avoid: Sequence[FVector] = (),
) -> FVector:
    """A vector w with <t_i, w> = k_i for all i, linearly independent from
    `avoid`.

    Deterministic choice: solve the pairing system with zeroed free
    variables, then walk the solution coset in kernel-basis order until a
    representative outside span(avoid) appears.
    """
    if len(ts) != len(ks):
        raise ValueError("ts and ks must have equal length")
    if ts:
        coord_rows = [t.coords() for t in ts]
        if not theta(coord_rows):
            raise ValueError("ts must be linearly independent wedge vectors")
    system = FMatrix(form.p, tuple(pairing_row(form, t) for t in ts), form.d)
    base = solve(system, FVector(form.p, tuple(ks)))
    if base is None:
        raise NoSolution("pairing constraints are inconsistent in this ambient space")
    if not theta(avoid):
        raise NoSolution("the avoided vectors are already dependent")
    if not in_span(base, avoid):
        return base
    for k_vec in kernel_basis(system):
        candidate = base + k_vec
        if not in_span(candidate, avoid):
            return candidate
    raise NoSolution("every solution lies in the span of the avoided vectors")


@dataclass(frozen=True)
class TowerCertificate:
    level: int
    wedge_dim: int  # required rank: dimension of the lower wedge space
    achieved_rank: int

    @property
    def passed(self) -> bool:
        return self.wedge_dim == self.achieved_rank


@dataclass(frozen=True)
class Tower:
    levels: tuple[AlternatingForm, ...]
    certificates: tuple[TowerCertificate, ...]

    def dimensions(self) -> tuple[int, ...]:
        return tuple(f.d for f in self.levels)


def _extension_wedge_basis(form: AlternatingForm) -> tuple[list[FVector], int]:
    """Radical basis first, greedily completed by lexicographic standard wedge
    coordinates; returns dense coordinate vectors and the radical size."""
    ker = kernel_basis(psi_matrix(form))
    n_wedge = wedge_dim(form.d, form.n - 1)
    chosen = list(ker)
    for q in range(n_wedge):
        if len(chosen) == n_wedge:
            break
        unit = FVector(form.p, tuple(1 if i == q else 0 for i in range(n_wedge)))
        if theta(chosen + [unit]):
            chosen.append(unit)
    return chosen, len(ker)


def extend_step(form: AlternatingForm) -> AlternatingForm:
    """Append one fresh dimension per radical basis element and prescribe the
    new coefficients so the chosen wedge basis pairs to the identity pattern
    against the fresh vectors; unchanged when the radical is empty.

    Coefficients on tuples containing two or more fresh indices are zero,
    which keeps the step deterministic.
    """
    chosen, r = _extension_wedge_basis(form)
    if r == 0:
        return form
    if form.d + r > MAX_TOWER_DIM:
        raise TooLarge(
            f"extension to dimension {form.d + r} exceeds the {MAX_TOWER_DIM} cap"
        )
    p = form.p
    n_wedge = wedge_dim(form.d, form.n - 1)
    # Row j of the inverse of the basis matrix gives, at position q, the
    # required pairing of the q-th standard wedge coordinate with fresh
    # vector j. Solving against the stacked basis rows yields exactly that.
    basis_rows = matrix_from_rows(chosen, p, n_wedge)
    inverse_rows = []
    for j in range(r):
        target = FVector(p, tuple(1 if i == j else 0 for i in range(n_wedge)))
        y = solve(basis_rows, target)
        assert y is not None  # chosen is a basis by construction
        inverse_rows.append(y.coords)
    coeffs = dict(form.coeff_map)
    for q, idx in enumerate(wedge_indices(form.d, form.n - 1)):
        for j in range(r):
            c = inverse_rows[j][q]
            if c:
                coeffs[idx + (form.d + j,)] = c
    return alternating_form(p, form.n, form.d + r, coeffs)


def cross_level_rank(old_form: AlternatingForm, new_form: AlternatingForm) -> int:
    """Rank of the map sending old wedge basis vectors to functionals on the
    new space; full rank (the old wedge dimension) certifies injectivity."""
    grade = old_form.n - 1
    rows = [
        pairing_row(new_form, basis_wedge(new_form.p, grade, new_form.d, idx))
        for idx in wedge_indices(old_form.d, grade)
    ]
    return rank(FMatrix(new_form.p, tuple(rows), new_form.d))


def restricts_to(new_form: AlternatingForm, old_form: AlternatingForm) -> bool:
    """The new form agrees with the old one on all old basis tuples."""
    old = old_form.coeff_map
    for key in itertools.combinations(range(old_form.d), old_form.n):
        if new_form.coeff(key) != old.get(key, 0):
            return False
    return True


def certify_tower(form: AlternatingForm, steps: int) -> Tower:
    """Iterate extend_step, recording one injectivity certificate per step."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    levels = [form]
    certificates = []
    for step in range(steps):
        nxt = extend_step(levels[-1])
        certificates.append(
            TowerCertificate(
                level=step,
                wedge_dim=wedge_dim(levels[-1].d, form.n - 1),
                achieved_rank=cross_level_rank(levels[-1], nxt),
            )
        )
        levels.append(nxt)
    return Tower(tuple(levels), tuple(certificates))


def _echelon_bases(p: int, d: int, r: int):
    """All reduced echelon bases of r-dimensional subspaces of F_p^d."""
    for pivots in itertools.combinations(range(d), r):
        pivot_set = set(pivots)
        free_slots = [
            (i, j)
            for i in range(r)
            for j in range(pivots[i] + 1, d)
            if j not in pivot_set
        ]
        for values in itertools.product(range(p), repeat=len(free_slots)):
            rows = [[0] * d for _ in range(r)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(free_slots, values):
                rows[i][j] = v
            yield [FVector(p, tuple(row)) for row in rows]


def subspace_count(p: int, d: int, r: int) -> int:
    """Gaussian binomial: number of r-dimensional subspaces of F_p^d."""
    num = den = 1
    for i in range(r):
        num *= p**d - p**i
        den *= p**r - p**i
    return num // den


def pure_tensor_nondegenerate(form: AlternatingForm, budget: Optional[int] = None) -> bool:
    """Exhaustive check that every independent (n-1)-tuple admits a vector
    producing a nonzero form value.

    Enumerates (n-1)-dimensional subspaces via reduced echelon bases; a
    subspace is witnessed iff the pairing functional of its wedge is nonzero.
    """
    if budget is None:
        budget = enumeration_budget()
    grade = form.n - 1
    if form.d < grade:
        return True
    total = subspace_count(form.p, form.d, grade)
    if total > budget:
        raise TooLarge(f"{total} subspaces exceed the budget of {budget}")
    for basis in _echelon_bases(form.p, form.d, grade):
        t = wedge_of_vectors(basis)
        if all(c == 0 for c in pairing_row(form, t)):
            return False
    return True


def random_form(p: int, n: int, d: int, seed: int) -> AlternatingForm:
    """Uniformly random coefficients on increasing tuples; deterministic per seed."""
    rng = random.Random(seed)
    coeffs = {}
    for key in itertools.combinations(range(d), n):
        coeffs[key] = rng.randrange(p)
    return alternating_form(p, n, d, coeffs)
