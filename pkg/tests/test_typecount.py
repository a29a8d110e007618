import itertools
import random

import pytest

from multiform.forms import certify_tower, evaluate, random_form, zero_form
from multiform.linalg import FVector
from multiform.shatter import build_bad_hypergraph
from multiform.typecount import (
    RelationOracle,
    array_family_cardinality,
    compose_relation,
    constant_oracle,
    dagger_bound,
    dagger_check,
    minimal_window_length,
    oracle_from_hypergraph,
    oracle_from_table,
    phi_types_realized,
    random_table,
)

IN_GUARD = [(2, 1, 2, 0), (2, 2, 2, 1), (2, 1, 3, 0), (3, 1, 2, 0)]


def order_base(size):
    carrier = tuple(range(size))
    return RelationOracle(1, (carrier, carrier), lambda a, b: a < b)


class TestPhiTypesRealized:
    def test_constant_oracle_gives_one(self):
        oracle = constant_oracle(2, [(0,), range(3), range(10)], False)
        assert phi_types_realized(oracle, 0, [list(range(3))], list(range(10))) == 1

    def test_singleton_window_gives_one(self):
        graph = build_bad_hypergraph(2, 1, 2)
        oracle = oracle_from_hypergraph(graph)
        assert phi_types_realized(oracle, 0, [[0, 1]], [3]) == 1

    def test_bad_hypergraph_long_interval_is_maximal(self):
        for k, d, n, _ in IN_GUARD:
            graph = build_bad_hypergraph(k, d, n)
            oracle = oracle_from_hypergraph(graph)
            seqs = [list(range(n)) for _ in range(k - 1)]
            last = graph.part_sizes[-1]
            need = last // d - 1
            window = list(range(need))
            assert (
                phi_types_realized(oracle, 0, seqs, window) == 1 << (n ** (k - 1))
            )

    def test_monotone_in_window(self):
        rng = random.Random(60)
        graph = build_bad_hypergraph(2, 2, 2)
        oracle = oracle_from_hypergraph(graph)
        seqs = [[0, 1]]
        last = graph.part_sizes[-1]
        for _ in range(30):
            lo = rng.randrange(last)
            hi = rng.randrange(lo, last + 1)
            hi2 = rng.randrange(hi, last + 1)
            inner = phi_types_realized(oracle, 0, seqs, list(range(lo, hi)))
            outer = phi_types_realized(oracle, 0, seqs, list(range(lo, hi2)))
            assert inner <= outer
            assert outer <= min(max(hi2 - lo, 1), 1 << 2) or outer <= hi2 - lo

    def test_count_bounded_by_window_and_patterns(self):
        rng = random.Random(61)
        oracle = oracle_from_table(
            2,
            [range(2), range(3), range(8)],
            [(rng.randrange(2), rng.randrange(3), rng.randrange(8)) for _ in range(20)],
        )
        for _ in range(20):
            window = [rng.randrange(8) for _ in range(rng.randrange(1, 8))]
            count = phi_types_realized(oracle, 0, [[0, 1, 2]], window)
            assert count <= min(len(window), 1 << 3)


class TestDaggerCheck:
    def test_constant_oracle_passes_first_interval(self):
        oracle = constant_oracle(2, [(0,), range(3), range(30)], True)
        report = dagger_check(oracle, 0, [list(range(3))], list(range(30)), 1, 0.2)
        assert report.passed
        assert report.pass_interval[0] == 0

    def test_bad_hypergraph_fails_exactly(self):
        for k, d, n, d_exp in IN_GUARD:
            graph = build_bad_hypergraph(k, d, n)
            oracle = oracle_from_hypergraph(graph)
            seqs = [list(range(n)) for _ in range(k - 1)]
            long_seq = list(range(graph.part_sizes[-1]))
            report = dagger_check(oracle, 0, seqs, long_seq, d_exp, 0.2)
            maximal = 1 << (n ** (k - 1))
            assert not report.passed
            assert all(c == maximal for c in report.per_interval_type_counts)

    def test_trivial_window_length_passes(self):
        oracle = constant_oracle(2, [(0,), range(2), range(2)], False)
        report = dagger_check(oracle, 0, [[0, 1]], [0, 1], 3, 0.2)
        assert report.passed and report.pass_interval == (0, 0)

    def test_window_length_arithmetic(self):
        assert minimal_window_length(8, 1) == 7
        assert minimal_window_length(16, 2) == 7
        assert minimal_window_length(9, 9) == 0
        assert minimal_window_length(10, 9) == 1

    def test_bound_values(self):
        assert dagger_bound(2, 2, 0.2) == 4
        assert dagger_bound(3, 2, 0.2) == 8
        assert dagger_bound(2, 3, 0.2) == 16

    def test_form_backed_oracle_passes_mostly(self):
        # arity-3 tower form as a 2-slot relation: traces are controlled by
        # linear functionals, so qualifying intervals realize few types
        passes = 0
        trials = 60
        for trial in range(trials):
            tower = certify_tower(random_form(2, 3, 3, seed=trial), 1)
            form = tower.levels[-1]
            rng = random.Random(1000 + trial)
            pool = list(itertools.product(range(2), repeat=form.d))
            universes = (tuple(pool),) * 3
            def fn(b, v1, v2, _form=form):
                return (
                    evaluate(
                        _form,
                        [FVector(_form.p, v1), FVector(_form.p, v2), FVector(_form.p, b)],
                    )
                    == 0
                )
            oracle = RelationOracle(2, universes, fn)
            n, m = 3, 36
            seqs = [[pool[rng.randrange(len(pool))] for _ in range(n)]]
            long_seq = [pool[rng.randrange(len(pool))] for _ in range(m)]
            b = pool[rng.randrange(len(pool))]
            report = dagger_check(oracle, b, seqs, long_seq, 2, 0.2)
            passes += report.passed
        assert passes >= 0.95 * trials


class TestComposeRelation:
    def test_identity_functions_reproduce_base(self):
        base = order_base(8)
        psi = compose_relation(
            base,
            [lambda x: x, lambda y: y],
            [(0,), (1,)],
            [range(8), range(8)],
        )
        for a, b in itertools.product(range(8), repeat=2):
            assert psi(a, b) == (a < b)

    def test_pointwise_agreement_with_direct_path(self):
        base = order_base(8)
        left = random_table([range(8), range(8)], range(8), seed=3)
        right = random_table([range(8), range(8)], range(8), seed=4)
        psi = compose_relation(
            base, [left, right], [(0, 1), (1, 2)], [range(8)] * 3
        )
        for ys in itertools.product(range(8), repeat=3):
            direct = left[(ys[0], ys[1])] < right[(ys[1], ys[2])]
            assert psi(*ys) == direct

    def test_form_evaluation_as_table(self):
        # field equation composed with the form-evaluation function
        rng = random.Random(62)
        form = certify_tower(zero_form(2, 3, 2), 1).levels[-1]
        pool = list(itertools.product(range(2), repeat=form.d))
        eq_base = RelationOracle(1, ((0, 1), (0, 1)), lambda a, b: a == b)
        form_table = {
            key: evaluate(form, [FVector(2, v) for v in key])
            for key in itertools.product(pool, repeat=3)
        }
        const_zero = {key: 0 for key in itertools.product(pool, repeat=3)}
        psi = compose_relation(
            eq_base,
            [form_table, const_zero],
            [(0, 1, 2), (0, 1, 2)],
            [pool] * 3,
        )
        for _ in range(500):
            ys = tuple(pool[rng.randrange(len(pool))] for _ in range(3))
            direct = evaluate(form, [FVector(2, v) for v in ys]) == 0
            assert psi(*ys) == direct

    def test_arity_mismatch_rejected(self):
        base = order_base(4)
        with pytest.raises(ValueError):
            compose_relation(base, [lambda x: x], [(0,)], [range(4)])

    def test_partial_table_rejected(self):
        base = order_base(4)
        with pytest.raises(ValueError):
            compose_relation(
                base,
                [{(0,): 0}, {(0,): 1}],
                [(0,), (1,)],
                [range(4), range(4)],
            )


class TestArrayFamily:
    def test_constant_oracle_gives_one(self):
        oracle = constant_oracle(2, [(0, 1), (0, 1), (0, 1)], True)
        count, exact = array_family_cardinality(oracle, [[0, 1], [1, 0]], [0, 1])
        assert (count, exact) == (1, True)

    def test_upper_bound_always_holds(self):
        rng = random.Random(63)
        for _ in range(10):
            rows = [
                (rng.randrange(2), rng.randrange(2), rng.randrange(2))
                for _ in range(rng.randrange(1, 8))
            ]
            oracle = oracle_from_table(2, [range(2)] * 3, rows)
            n = 2
            delta = [[rng.randrange(2) for _ in range(n)] for _ in range(n)]
            count, exact = array_family_cardinality(oracle, delta, [0, 1])
            assert exact
            assert count <= min(1 << (n * n), 2 ** (2 * n * 2))

    def test_agrees_with_independent_enumerator(self):
        oracle = RelationOracle(
            2, (tuple(range(2)),) * 3, lambda d, z1, z2: z1 == d
        )
        delta = [[0, 1], [1, 0]]
        count, exact = array_family_cardinality(oracle, delta, [0, 1])
        assert exact

        def brute(oracle, delta, universe):
            n = len(delta)
            k = oracle.k
            seen = set()
            side = list(itertools.product(universe, repeat=n ** (k - 1)))
            for arrays in itertools.product(side, repeat=k):
                bits = []
                for coords in itertools.product(range(n), repeat=k):
                    args = []
                    for t in range(k):
                        reduced = coords[:t] + coords[t + 1 :]
                        pos = 0
                        for c in reduced:
                            pos = pos * n + c
                        args.append(arrays[t][pos])
                    value = delta
                    for c in coords:
                        value = value[c]
                    bits.append(oracle(value, *args))
                seen.add(tuple(bits))
            return len(seen)

        assert brute(oracle, delta, [0, 1]) == count

    def test_sampled_mode_is_lower_bound(self):
        oracle = RelationOracle(
            2, (tuple(range(2)),) * 3, lambda d, z1, z2: z1 == d
        )
        delta = [[0, 1], [1, 0]]
        exact_count, _ = array_family_cardinality(oracle, delta, [0, 1])
        sampled_count, exact = array_family_cardinality(
            oracle, delta, [0, 1], budget=3, seed=5, samples=64
        )
        assert not exact
        assert sampled_count <= exact_count
