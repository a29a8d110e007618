import itertools
import random

import pytest

from multiform.conncomp import (
    Subspace,
    full_space,
    g_infty,
    intersect,
    intersection_identity_check,
    subspace_from_spanning,
    v_perp,
)
from multiform.forms import (
    certify_tower,
    random_form,
    standard_symplectic,
    volume_form,
    zero_form,
)
from multiform.linalg import FVector, standard_basis

from helpers import random_vector


class TestSubspace:
    def test_canonical_equality(self):
        a = subspace_from_spanning(
            2, 3, [FVector(2, (1, 1, 0)), FVector(2, (0, 1, 1))]
        )
        b = subspace_from_spanning(
            2, 3, [FVector(2, (1, 0, 1)), FVector(2, (1, 1, 0))]
        )
        assert a == b

    def test_full_space(self):
        assert full_space(3, 2).dim == 2
        assert subspace_from_spanning(3, 2, standard_basis(3, 2)) == full_space(3, 2)

    def test_intersection(self):
        e = standard_basis(2, 3)
        a = subspace_from_spanning(2, 3, [e[0], e[1]])
        b = subspace_from_spanning(2, 3, [e[1], e[2]])
        assert intersect(a, b) == subspace_from_spanning(2, 3, [e[1]])


class TestVPerp:
    def test_dependent_tuple_gives_full_space(self):
        form = volume_form(2, 3)
        e = standard_basis(2, 3)
        assert v_perp(form, [e[0], e[0]]) == full_space(2, 3)

    def test_symplectic_kernel(self):
        form = standard_symplectic(2, 4)
        e = standard_basis(2, 4)
        space = v_perp(form, [e[0]])
        assert space.dim == 3
        assert space.contains(e[0])
        assert space.contains(e[2])
        assert space.contains(e[3])
        assert not space.contains(e[1])

    def test_volume_form_kernel_is_leading_block(self):
        form = volume_form(5, 3, coefficient=2)
        e = standard_basis(5, 3)
        space = v_perp(form, [e[0], e[1]])
        assert space == subspace_from_spanning(5, 3, e[:2])

    def test_permutation_invariance(self):
        rng = random.Random(70)
        form = standard_symplectic(3, 6)
        for _ in range(20):
            form3 = random_form(2, 3, 5, seed=rng.randrange(10**6))
            a = [random_vector(rng, 2, 5) for _ in range(2)]
            assert v_perp(form3, a) == v_perp(form3, list(reversed(a)))

    def test_wrong_tuple_length(self):
        with pytest.raises(ValueError):
            v_perp(volume_form(2, 3), [standard_basis(2, 3)[0]])


class TestGInfty:
    def test_empty_parameters_full_space(self):
        assert g_infty(volume_form(2, 3), []) == full_space(2, 3)

    def test_single_vector_symplectic(self):
        form = standard_symplectic(2, 4)
        e = standard_basis(2, 4)
        assert g_infty(form, [e[0]]) == v_perp(form, [e[0]])

    def test_two_vectors_symplectic(self):
        form = standard_symplectic(2, 4)
        e = standard_basis(2, 4)
        space = g_infty(form, [e[0], e[2]])
        assert space == subspace_from_spanning(2, 4, [e[0], e[2]])

    def test_antitone(self):
        rng = random.Random(71)
        form = standard_symplectic(2, 6)
        for _ in range(30):
            vs = [random_vector(rng, 2, 6) for _ in range(3)]
            smaller = g_infty(form, vs)
            larger = g_infty(form, vs[:2])
            for row in smaller.basis:
                assert larger.contains(FVector(2, row))

    def test_union_contained_in_intersection(self):
        rng = random.Random(72)
        for trial in range(20):
            form = certify_tower(random_form(2, 3, 3, seed=trial), 1).levels[-1]
            a = [random_vector(rng, 2, form.d) for _ in range(2)]
            b = [random_vector(rng, 2, form.d) for _ in range(2)]
            combined = g_infty(form, a + b)
            meet = intersect(g_infty(form, a), g_infty(form, b))
            for row in combined.basis:
                assert meet.contains(FVector(2, row))

    def test_codimension_bounded_by_functional_count(self):
        rng = random.Random(73)
        form = standard_symplectic(2, 6)
        for _ in range(20):
            count = rng.randrange(0, 4)
            vs = [random_vector(rng, 2, 6) for _ in range(count)]
            space = g_infty(form, vs)
            assert space.codim <= len(vs)  # one functional per parameter at arity 2


class TestIntersectionIdentity:
    def test_all_parts_empty(self):
        assert intersection_identity_check(standard_symplectic(2, 4), [[], []])

    def test_explicit_symplectic_example(self):
        form = standard_symplectic(2, 4)
        e = standard_basis(2, 4)
        assert intersection_identity_check(form, [[e[0]], [e[2]]])

    def test_wrong_part_count(self):
        with pytest.raises(ValueError):
            intersection_identity_check(volume_form(2, 3), [[], []])

    def test_random_instances_always_hold(self):
        rng = random.Random(74)
        held = 0
        for trial in range(100):
            if trial % 2 == 0:
                form = standard_symplectic(2, 6)
            else:
                base = random_form(2, 3, 3, seed=trial)
                form = certify_tower(base, 2).levels[-1]
            parts = [
                [random_vector(rng, 2, form.d) for _ in range(rng.randrange(0, 3))]
                for _ in range(form.n)
            ]
            assert intersection_identity_check(form, parts)
            held += 1
        assert held == 100
