import itertools
import json
import os
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiform import io
from multiform.errors import NoSolution, NotGenericHere, TooLarge
from multiform.exterior import basis_wedge, pairing2, wedge_dim, wedge_vector
from multiform.forms import (
    alternating_form,
    certify_tower,
    dual_tuples,
    evaluate,
    extend_step,
    find_w,
    is_generic,
    is_nondegenerate,
    pure_tensor_nondegenerate,
    radical,
    random_form,
    restricts_to,
    standard_symplectic,
    subspace_count,
    volume_form,
    zero_form,
)
from multiform.linalg import FVector, standard_basis, theta, zero_vector

from helpers import evaluate_bruteforce, random_vector

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


class TestEvaluate:
    def test_stored_coefficient_on_basis_tuple(self):
        form = alternating_form(7, 3, 5, {(0, 2, 4): 5, (1, 2, 3): 2})
        e = standard_basis(7, 5)
        assert evaluate(form, [e[0], e[2], e[4]]) == 5
        assert evaluate(form, [e[1], e[2], e[3]]) == 2
        assert evaluate(form, [e[0], e[1], e[2]]) == 0

    def test_repeated_argument_vanishes(self):
        rng = random.Random(20)
        for _ in range(40):
            p = rng.choice([2, 3, 5])
            n = rng.choice([2, 3])
            d = rng.randrange(n, 6)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            vs = [random_vector(rng, p, d) for _ in range(n)]
            slot = rng.randrange(n - 1)
            vs[slot + 1] = vs[slot]
            assert evaluate(form, vs) == 0

    def test_transposition_negates(self):
        rng = random.Random(21)
        for _ in range(40):
            p = rng.choice([3, 5])
            n = rng.choice([2, 3, 4])
            d = rng.randrange(n, 6)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            vs = [random_vector(rng, p, d) for _ in range(n)]
            i = rng.randrange(n - 1)
            swapped = list(vs)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            assert evaluate(form, swapped) == (-evaluate(form, vs)) % p

    def test_agrees_with_bruteforce_expansion(self):
        rng = random.Random(22)
        for _ in range(80):
            p = rng.choice([2, 3, 5])
            n = rng.choice([2, 3])
            d = rng.randrange(n, 5)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            vs = [random_vector(rng, p, d) for _ in range(n)]
            assert evaluate(form, vs) == evaluate_bruteforce(form, vs)

    def test_multilinearity(self):
        rng = random.Random(23)
        for _ in range(40):
            p = rng.choice([3, 5])
            n = rng.choice([2, 3])
            d = rng.randrange(n, 5)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            slot = rng.randrange(n)
            others = [random_vector(rng, p, d) for _ in range(n)]
            u, v = random_vector(rng, p, d), random_vector(rng, p, d)
            a, b = rng.randrange(p), rng.randrange(p)
            with_combo = list(others)
            with_combo[slot] = u.scale(a) + v.scale(b)
            with_u = list(others)
            with_u[slot] = u
            with_v = list(others)
            with_v[slot] = v
            assert evaluate(form, with_combo) == (
                a * evaluate(form, with_u) + b * evaluate(form, with_v)
            ) % p

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(volume_form(2, 2), [zero_vector(2, 2)])


class TestRadicalAndCertificates:
    def test_zero_form_radical_is_full_wedge_basis(self):
        form = zero_form(2, 3, 4)
        assert len(radical(form)) == wedge_dim(4, 2) == 6

    def test_volume_form_empty_radical(self):
        assert radical(volume_form(3, 3)) == []

    def test_symplectic_empty_radical(self):
        assert radical(standard_symplectic(2, 4)) == []

    def test_volume_forms_nondegenerate_and_generic(self):
        for p in (2, 3, 5):
            for n in (2, 3, 4):
                form = volume_form(p, n)
                assert is_nondegenerate(form)
                assert is_generic(form)

    def test_high_dimension_obstruction(self):
        # for arity >= 3 and d > n neither certificate can hold
        for values in itertools.product(range(2), repeat=4):
            keys = list(itertools.combinations(range(4), 3))
            form = alternating_form(2, 3, 4, dict(zip(keys, values)))
            assert not is_nondegenerate(form)
            assert not is_generic(form)
            assert wedge_dim(4, 2) > 4  # the a-priori dimension count agrees

    def test_vacuous_below_wedge_grade(self):
        form = zero_form(2, 3, 1)  # d < n-1: no nonzero wedge vectors exist
        assert is_nondegenerate(form)

    def test_zero_form_not_generic(self):
        assert not is_generic(zero_form(2, 3, 3))

    def test_nondegenerate_iff_radical_empty_iff_full_rank(self):
        from multiform.exterior import psi_matrix
        from multiform.linalg import rank

        rng = random.Random(24)
        for _ in range(40):
            p = rng.choice([2, 3])
            n = rng.choice([2, 3])
            d = rng.randrange(n - 1, 6)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            rad = radical(form)
            full = rank(psi_matrix(form)) == wedge_dim(d, n - 1)
            assert is_nondegenerate(form) == (not rad) == full


class TestDualTuples:
    def test_empty_basis(self):
        assert dual_tuples(volume_form(2, 3), []) == ([], [])

    def test_volume_form_duals(self):
        form = volume_form(5, 3, coefficient=2)
        e = standard_basis(5, 3)
        ts, us = dual_tuples(form, e[:2])
        assert len(ts) == len(us) == 1
        assert us[0].coords == (0, 0, 3)  # 2 * 3 = 6 = 1 mod 5

    def test_zero_form_raises(self):
        with pytest.raises(NotGenericHere):
            dual_tuples(zero_form(2, 3, 4), standard_basis(2, 4)[:2])

    def test_kronecker_property_verified(self):
        rng = random.Random(25)
        for d in (2, 4, 6):
            form = standard_symplectic(3, d)
            size = rng.randrange(0, d + 1)
            basis = []
            while len(basis) < size:
                v = random_vector(rng, 3, d)
                if theta(basis + [v]):
                    basis.append(v)
            ts, us = dual_tuples(form, basis)
            for i, t in enumerate(ts):
                for j, u in enumerate(us):
                    assert pairing2(form, t, u) == (1 if i == j else 0)


class TestFindW:
    def test_no_constraints_returns_first_basis_vector(self):
        w = find_w(volume_form(2, 3), [], [])
        assert w == standard_basis(2, 3)[0]

    def test_symplectic_example(self):
        form = standard_symplectic(2, 4)
        e = standard_basis(2, 4)
        w = find_w(form, [basis_wedge(2, 1, 4, (0,))], [1], avoid=[e[0]])
        assert pairing2(form, basis_wedge(2, 1, 4, (0,)), w) == 1
        assert theta([e[0], w])
        assert w == e[1]

    def test_zero_form_with_nonzero_target(self):
        with pytest.raises(NoSolution):
            find_w(zero_form(2, 2, 3), [basis_wedge(2, 1, 3, (0,))], [1])

    def test_constraints_and_independence_verified(self):
        rng = random.Random(26)
        for _ in range(50):
            d = rng.choice([4, 6])
            form = standard_symplectic(2, d)
            count = rng.randrange(0, 3)
            ts, seen = [], []
            while len(ts) < count:
                t = wedge_vector(
                    2, 1, d, {(i,): rng.randrange(2) for i in range(d)}
                )
                if not t.is_zero() and theta(seen + [t.coords()]):
                    ts.append(t)
                    seen.append(t.coords())
            ks = [rng.randrange(2) for _ in ts]
            avoid = [random_vector(rng, 2, d) for _ in range(rng.randrange(0, 2))]
            if not theta(avoid):
                continue
            try:
                w = find_w(form, ts, ks, avoid=avoid)
            except NoSolution:
                continue
            for t, k in zip(ts, ks):
                assert pairing2(form, t, w) == k
            assert theta(list(avoid) + [w])

    def test_dependent_wedges_rejected(self):
        form = standard_symplectic(2, 4)
        t = basis_wedge(2, 1, 4, (0,))
        with pytest.raises(ValueError):
            find_w(form, [t, t], [0, 0])


class TestExtendStep:
    def test_nondegenerate_input_unchanged(self):
        form = standard_symplectic(3, 4)
        assert extend_step(form) is form

    def test_zero_form_n3_d2_becomes_volume(self):
        ext = extend_step(zero_form(2, 3, 2))
        assert ext.d == 3
        assert ext.coeffs == (((0, 1, 2), 1),)
        assert is_nondegenerate(ext)

    def test_zero_form_n2_d1_becomes_symplectic_plane(self):
        ext = extend_step(zero_form(3, 2, 1))
        assert ext.d == 2
        assert ext.coeffs == (((0, 1), 1),)

    def test_extension_restricts_to_original(self):
        rng = random.Random(27)
        for _ in range(30):
            p = rng.choice([2, 3])
            n = rng.choice([2, 3])
            d = rng.randrange(n - 1, 5)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            ext = extend_step(form)
            assert restricts_to(ext, form)

    def test_growth_budget(self):
        with pytest.raises(TooLarge):
            # radical of the zero form in grade 2 is C(12,2)=66 > 64 - 12
            extend_step(zero_form(2, 3, 12))


class TestCertifyTower:
    def test_zero_steps(self):
        tower = certify_tower(volume_form(2, 3), 0)
        assert len(tower.levels) == 1
        assert tower.certificates == ()

    def test_zero_form_n2_d2_growth(self):
        tower = certify_tower(zero_form(2, 2, 2), 1)
        # radical of the zero form is the whole 2-dimensional wedge space
        assert tower.dimensions() == (2, 4)
        assert all(c.passed for c in tower.certificates)
        assert is_nondegenerate(tower.levels[-1])

    def test_growth_matches_radical_size(self):
        rng = random.Random(28)
        for _ in range(20):
            p = rng.choice([2, 3])
            n = rng.choice([2, 3])
            d = rng.randrange(n - 1, 5)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            tower = certify_tower(form, 2)
            for low, high in zip(tower.levels, tower.levels[1:]):
                assert high.d - low.d == len(radical(low))
                assert restricts_to(high, low)

    def test_certificates_always_pass(self):
        rng = random.Random(29)
        for _ in range(20):
            p = rng.choice([2, 3])
            n = rng.choice([2, 3])
            d = rng.randrange(n - 1, 5)
            form = random_form(p, n, d, seed=rng.randrange(10**6))
            tower = certify_tower(form, 2)
            assert all(c.passed for c in tower.certificates)

    def test_tower_property_find_w_succeeds_on_next_level(self):
        rng = random.Random(30)
        for base in (zero_form(2, 2, 2), zero_form(2, 3, 2), zero_form(3, 2, 1)):
            tower = certify_tower(base, 2)
            for low, high in zip(tower.levels, tower.levels[1:]):
                grade = low.n - 1
                n_wedge = wedge_dim(low.d, grade)
                if n_wedge == 0:
                    continue
                for _ in range(25):
                    coords = [rng.randrange(low.p) for _ in range(n_wedge)]
                    if not any(coords):
                        coords[0] = 1
                    terms = {
                        idx: c
                        for idx, c in zip(
                            itertools.combinations(range(low.d), grade), coords
                        )
                        if c
                    }
                    t = wedge_vector(high.p, grade, high.d, terms)
                    w = find_w(high, [t], [1])
                    assert pairing2(high, t, w) == 1


class TestPureTensorCriterion:
    def test_volume_form_true(self):
        assert pure_tensor_nondegenerate(volume_form(2, 3)) is True

    def test_zero_form_false(self):
        assert pure_tensor_nondegenerate(zero_form(2, 3, 3)) is False

    def test_budget_guard(self):
        with pytest.raises(TooLarge):
            pure_tensor_nondegenerate(zero_form(2, 2, 4), budget=2)

    def test_sound_direction_everywhere(self):
        # nondegenerate implies the pure-tensor criterion, checked on all
        # arity-3 forms over F_2 with d <= 4 plus random samples
        for d in (2, 3, 4):
            keys = list(itertools.combinations(range(d), 3))
            for values in itertools.product(range(2), repeat=len(keys)):
                form = alternating_form(2, 3, d, dict(zip(keys, values)))
                if is_nondegenerate(form):
                    assert pure_tensor_nondegenerate(form)

    def test_converse_on_towers_with_headroom(self):
        # after one certified extension the two notions agree on the base's
        # wedge vectors; at the top level a still-empty radical matches the
        # pure tensor criterion exactly
        for seed in range(10):
            form = random_form(2, 2, 3, seed=seed)
            top = certify_tower(form, 2).levels[-1]
            assert is_nondegenerate(top) == pure_tensor_nondegenerate(top)

    def test_gaussian_binomial_counts_match_enumeration(self):
        from multiform.forms import _echelon_bases

        for p, d, r in [(2, 4, 2), (3, 3, 2), (2, 5, 1), (5, 3, 3)]:
            assert sum(1 for _ in _echelon_bases(p, d, r)) == subspace_count(p, d, r)


class TestRandomForm:
    def test_same_seed_identical(self):
        assert random_form(5, 3, 5, seed=42) == random_form(5, 3, 5, seed=42)

    def test_d_below_n_gives_zero_form(self):
        assert random_form(3, 3, 2, seed=1) == zero_form(3, 3, 2)

    def test_seed_stability_golden(self):
        golden_path = os.path.join(GOLDEN_DIR, "random_form_p5_n3_d5_seed42.json")
        produced = io.canonical_json(io.form_to_dict(random_form(5, 3, 5, seed=42)))
        with open(golden_path) as fh:
            assert fh.read() == produced


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_random_form_coefficients_in_range(seed):
    form = random_form(5, 2, 4, seed=seed)
    for key, c in form.coeffs:
        assert 0 < c < 5
        assert 0 <= key[0] < key[1] < 4
