"""Finitely generated substructures, canonical atomic invariants, and the
back-and-forth partial-isomorphism engine.

Over a prime field the field sort never grows, so a finitely generated
substructure is just the span of its generators together with the form
values on basis tuples. The atomic invariant of a tuple records the greedy
leftmost maximal independent subtuple, every entry's coordinates over it,
and the form values on its n-subsets; two tuples are equivalent exactly
when these fingerprints coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InsufficientHeadroom, NoSolution, TargetExhausted
from .exterior import wedge_of_vectors
from .forms import AlternatingForm, evaluate, find_w
from .linalg import (
    FVector,
    coordinates,
    enumerate_span,
    in_span,
    span_dim,
    theta,
    zero_vector,
)


@dataclass(frozen=True)
class Substructure:
    form: AlternatingForm
    basis: tuple[FVector, ...]
    gram: tuple[tuple[tuple[int, ...], int], ...]  # all increasing n-tuples of positions

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class AtomicInvariant:
    p: int
    n: int
    length: int
    support: tuple[int, ...]  # positions of the greedy maximal independent subtuple
    coords: tuple[tuple[int, ...], ...]  # per entry, coordinates over the support
    form_values: tuple[tuple[tuple[int, ...], int], ...]  # n-tuples of support positions

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "length": self.length,
            "support": list(self.support),
            "coords": [list(c) for c in self.coords],
            "formValues": [[list(key), val] for key, val in self.form_values],
        }


@dataclass(frozen=True)
class PartialIso:
    form_a: AlternatingForm
    form_b: AlternatingForm
    domain: tuple[FVector, ...]
    image: tuple[FVector, ...]

    def holds(self) -> bool:
        return atomic_invariant(self.form_a, self.domain) == atomic_invariant(
            self.form_b, self.image
        )


def _greedy_support(vectors: Sequence[FVector]) -> list[int]:
    support: list[int] = []
    kept: list[FVector] = []
    for pos, v in enumerate(vectors):
        if theta(kept + [v]):
            kept.append(v)
            support.append(pos)
    return support


def generate(form: AlternatingForm, vectors: Sequence[FVector]) -> Substructure:
    """Substructure generated by the vectors: greedy leftmost maximal
    independent subset as basis, with the full table of form values."""
    for v in vectors:
        if v.p != form.p or v.dim != form.d:
            raise ValueError("vector incompatible with form")
    support = _greedy_support(vectors)
    basis = tuple(vectors[i] for i in support)
    gram = tuple(
        (key, evaluate(form, [basis[i] for i in key]))
        for key in itertools.combinations(range(len(basis)), form.n)
    )
    return Substructure(form, basis, gram)


def atomic_invariant(form: AlternatingForm, vectors: Sequence[FVector]) -> AtomicInvariant:
    """Canonical quantifier-free fingerprint of a tuple: support pattern,
    coordinates, and form values. Deterministic by the greedy support rule."""
    for v in vectors:
        if v.p != form.p or v.dim != form.d:
            raise ValueError("vector incompatible with form")
    support = _greedy_support(vectors)
    basis = [vectors[i] for i in support]
    coords = []
    for v in vectors:
        lam = coordinates(v, basis)
        assert lam is not None  # support is maximal, so every entry is spanned
        coords.append(lam)
    form_values = tuple(
        (key, evaluate(form, [vectors[i] for i in key]))
        for key in itertools.combinations(support, form.n)
    )
    return AtomicInvariant(
        p=form.p,
        n=form.n,
        length=len(vectors),
        support=tuple(support),
        coords=tuple(coords),
        form_values=form_values,
    )


def headroom(form: AlternatingForm, vectors: Sequence[FVector]) -> int:
    """Free dimensions beyond the span of the tuple."""
    return form.d - span_dim(vectors, form.p, form.d)


def equivalent(
    form_a: AlternatingForm,
    tuple_a: Sequence[FVector],
    form_b: AlternatingForm,
    tuple_b: Sequence[FVector],
) -> bool:
    """Atomic-invariant equality, the quantifier-free decision rule.

    Requires both ambient spaces to leave headroom of at least the tuple
    length, so the answer is a faithful surrogate for the unbounded theory
    rather than an artifact of a cramped ambient space.
    """
    if (form_a.p, form_a.n) != (form_b.p, form_b.n):
        raise ValueError("forms must share modulus and arity")
    for side, form, tup in (("left", form_a, tuple_a), ("right", form_b, tuple_b)):
        if headroom(form, tup) < len(tup):
            raise InsufficientHeadroom(
                f"{side} ambient dimension {form.d} leaves headroom "
                f"{headroom(form, tup)} < tuple length {len(tup)}"
            )
    return atomic_invariant(form_a, tuple_a) == atomic_invariant(form_b, tuple_b)


def extend_iso(iso: PartialIso, x: FVector) -> PartialIso:
    """Extend a partial isomorphism so its domain covers x.

    A spanned x forces its image through the coordinates over the domain
    support; an independent x gets its image from the prescribed-pairing
    solver against the wedge basis of the image support.
    """
    if x.p != iso.form_a.p or x.dim != iso.form_a.d:
        raise ValueError("vector incompatible with the domain form")
    n = iso.form_a.n
    support = _greedy_support(iso.domain)
    dom_basis = [iso.domain[i] for i in support]
    img_basis = [iso.image[i] for i in support]
    lam = coordinates(x, dom_basis)
    if lam is not None:
        image_x = zero_vector(iso.form_b.p, iso.form_b.d)
        for c, w in zip(lam, img_basis):
            image_x = image_x + w.scale(c)
    else:
        ts = [
            wedge_of_vectors([img_basis[i] for i in subset])
            for subset in itertools.combinations(range(len(img_basis)), n - 1)
        ]
        ks = [
            evaluate(iso.form_a, [dom_basis[i] for i in subset] + [x])
            for subset in itertools.combinations(range(len(dom_basis)), n - 1)
        ]
        try:
            image_x = find_w(iso.form_b, ts, ks, avoid=img_basis)
        except NoSolution as err:
            raise TargetExhausted(
                "image ambient space cannot realize the required pairings; "
                "extend it and retry"
            ) from err
    extended = PartialIso(
        iso.form_a, iso.form_b, iso.domain + (x,), iso.image + (image_x,)
    )
    assert extended.holds(), "extension must preserve the atomic invariant"
    return extended


def empty_iso(form_a: AlternatingForm, form_b: AlternatingForm) -> PartialIso:
    if (form_a.p, form_a.n) != (form_b.p, form_b.n):
        raise ValueError("forms must share modulus and arity")
    return PartialIso(form_a, form_b, (), ())


def embed(sub: Substructure, target: AlternatingForm) -> PartialIso:
    """Form-preserving injective linear map of the substructure basis into the
    target ambient space, built one generator at a time."""
    iso = empty_iso(sub.form, target)
    for v in sub.basis:
        iso = extend_iso(iso, v)
    return iso


def exhaustive_map_search(
    form_a: AlternatingForm,
    tuple_a: Sequence[FVector],
    form_b: AlternatingForm,
    tuple_b: Sequence[FVector],
) -> Optional[list[FVector]]:
    """Brute-force search for a form-preserving linear bijection of the
    generated substructures extending tuple_a -> tuple_b.

    Independent of the invariant machinery: enumerates all candidate images
    of the domain basis inside the image span and checks linearity, the
    tuple constraints, and the form values directly. Returns the basis
    images, or None.
    """
    if (form_a.p, form_a.n) != (form_b.p, form_b.n):
        raise ValueError("forms must share modulus and arity")
    if len(tuple_a) != len(tuple_b):
        return None
    p, n = form_a.p, form_a.n
    basis_a = [tuple_a[i] for i in _greedy_support(tuple_a)]
    basis_b = [tuple_b[i] for i in _greedy_support(tuple_b)]
    if len(basis_a) != len(basis_b):
        return None
    r = len(basis_a)
    if r == 0:
        return []
    coords_a = [coordinates(v, basis_a) for v in tuple_a]
    span_b = list(enumerate_span(basis_b, p, form_b.d))
    for images in itertools.product(span_b, repeat=r):
        if not theta(list(images)):
            continue
        # must extend the tuple map entrywise
        ok = True
        for lam, target in zip(coords_a, tuple_b):
            mapped = zero_vector(p, form_b.d)
            for c, w in zip(lam, images):
                mapped = mapped + w.scale(c)
            if mapped != target:
                ok = False
                break
        if not ok:
            continue
        for key in itertools.combinations(range(r), n):
            lhs = evaluate(form_a, [basis_a[i] for i in key])
            rhs = evaluate(form_b, [images[i] for i in key])
            if lhs != rhs:
                ok = False
                break
        if ok:
            return list(images)
    return None
