"""Command-line front end and experiment runner.

Every command emits canonical JSON (stdout or --out); randomized commands
require explicit seeds. Exit codes: 0 success, 2 domain error, 3 budget or
guard violation, 64 usage problems.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import random
import sys
from typing import Optional

from . import conncomp, forms, io, shatter, substruct, typecount
from .errors import LimitError, MultiformError
from .linalg import FVector

USAGE_EXIT = 64


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_EXIT)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(payload: dict, out: Optional[str]) -> None:
    text = io.canonical_json(payload)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_form(path: str) -> forms.AlternatingForm:
    return io.form_from_dict(_load_json(path))


def _load_vectors(path: str) -> list[FVector]:
    return io.vectors_from_dict(_load_json(path))


def _random_vector(rng: random.Random, p: int, d: int) -> FVector:
    return FVector(p, tuple(rng.randrange(p) for _ in range(d)))


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok != ""]


def _parse_box(text: str, k: int) -> shatter.Box:
    parts = [tuple(_parse_int_list(chunk)) for chunk in text.split(";")]
    if len(parts) != k:
        raise ValueError(f"box needs {k} parts, got {len(parts)}")
    return shatter.Box(k, tuple(parts))


# --- per-command schema validation -------------------------------------------

SPEC_SCHEMAS = {
    "constant": {"required": {"kind": str, "k": int, "value": bool, "universes": list}},
    "table": {"required": {"kind": str, "k": int, "universes": list, "trueRows": list}},
    "badgraph": {"required": {"kind": str, "k": int, "d": int, "n": int}},
    "order": {"required": {"kind": str, "size": int}},
    "composedOrder": {
        "required": {"kind": str, "size": int, "arity": int, "tableSeed": int}
    },
    "form": {"required": {"kind": str, "form": dict}},
}


def _check_schema(spec: dict, schema: dict, where: str) -> None:
    for key, expected in schema["required"].items():
        if key not in spec:
            raise ValueError(f"{where}: missing required key {key!r}")
        if expected is int and isinstance(spec[key], bool):
            raise ValueError(f"{where}: key {key!r} must be an integer")
        if not isinstance(spec[key], expected):
            raise ValueError(f"{where}: key {key!r} must be {expected.__name__}")


def _hashable(value):
    return tuple(value) if isinstance(value, list) else value


def _build_oracle(spec: dict, where: str = "oracle"):
    kind = spec.get("kind")
    if kind not in SPEC_SCHEMAS:
        raise ValueError(f"{where}: unknown oracle kind {kind!r}")
    _check_schema(spec, SPEC_SCHEMAS[kind], where)
    if kind == "constant":
        universes = [tuple(_hashable(v) for v in u) for u in spec["universes"]]
        return typecount.constant_oracle(spec["k"], universes, spec["value"])
    if kind == "table":
        universes = [tuple(_hashable(v) for v in u) for u in spec["universes"]]
        rows = [tuple(_hashable(v) for v in row) for row in spec["trueRows"]]
        return typecount.oracle_from_table(spec["k"], universes, rows)
    if kind == "badgraph":
        graph = shatter.build_bad_hypergraph(spec["k"], spec["d"], spec["n"])
        return typecount.oracle_from_hypergraph(graph)
    if kind == "order":
        size = spec["size"]
        carriers = (tuple(range(size)), tuple(range(size)))
        return typecount.RelationOracle(1, carriers, lambda a, b: a < b)
    if kind == "composedOrder":
        return _composed_order_oracle(spec["size"], spec["arity"], spec["tableSeed"])
    if kind == "form":
        form = io.form_from_dict(spec["form"])
        universe = tuple(itertools.product(range(form.p), repeat=form.d))
        universes = (universe,) * form.n

        def fn(parameter, *vs):
            vectors = [FVector(form.p, v) for v in vs] + [FVector(form.p, parameter)]
            return forms.evaluate(form, vectors) == 0

        return typecount.RelationOracle(form.n - 1, universes, fn)
    raise ValueError(f"{where}: unhandled kind {kind!r}")


def _composed_order_oracle(size: int, arity: int, table_seed: int):
    """Order comparison on [size] composed with two seeded random tables of
    the given fan-in: slots (0..arity-1) feed the left table, (1..arity) the
    right one."""
    base = typecount.RelationOracle(
        1, (tuple(range(size)), tuple(range(size))), lambda a, b: a < b
    )
    carrier = tuple(range(size))
    universes = [carrier] * (arity + 1)
    left_slots = tuple(range(0, arity))
    right_slots = tuple(range(1, arity + 1))
    left = typecount.random_table([carrier] * arity, carrier, seed=table_seed)
    right = typecount.random_table([carrier] * arity, carrier, seed=table_seed + 1)
    return typecount.compose_relation(
        base, [left, right], [left_slots, right_slots], universes
    )


def _dagger_inputs(spec: dict, oracle, rng_seed_offset: int = 0):
    """Parameter, short sequences and long sequence for one trial."""
    seq_spec = spec.get("sequences")
    k = oracle.k
    if seq_spec is None:
        # default: full universes in their natural order
        seqs = [list(u) for u in oracle.universes[1 : k]]
        long_seq = list(oracle.universes[k])
        parameter = oracle.universes[0][0]
        return parameter, seqs, long_seq
    if "explicit" in seq_spec:
        seqs = [[_hashable(v) for v in s] for s in seq_spec["explicit"]]
        long_seq = [_hashable(v) for v in seq_spec["long"]]
        parameter = _hashable(spec.get("parameter", oracle.universes[0][0]))
        return parameter, seqs, long_seq
    rng = random.Random(int(seq_spec["seed"]) + rng_seed_offset)
    n, m = int(seq_spec["n"]), int(seq_spec["m"])

    def draw(universe):
        return universe[rng.randrange(len(universe))]

    seqs = [[draw(oracle.universes[i + 1]) for _ in range(n)] for i in range(k - 1)]
    long_seq = [draw(oracle.universes[k]) for _ in range(m)]
    parameter = draw(oracle.universes[0])
    return parameter, seqs, long_seq


# --- form group ---------------------------------------------------------------


def cmd_form_eval(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    return {"value": forms.evaluate(form, vectors)}


def cmd_form_radical(args):
    form = _load_form(args.form)
    basis = forms.radical(form)
    return {"count": len(basis), "radical": [io.wedge_to_dict(t) for t in basis]}


def cmd_form_nondeg(args):
    if args.obstruction:
        return _obstruction_report(args)
    form = _load_form(args.form)
    return {"nondegenerate": forms.is_nondegenerate(form)}


def _structured_fixtures(p: int, n: int, d: int) -> list[forms.AlternatingForm]:
    fixtures = [forms.zero_form(p, n, d)]
    keys = list(itertools.combinations(range(d), n))
    fixtures.append(forms.alternating_form(p, n, d, {keys[0]: 1}))
    fixtures.append(forms.alternating_form(p, n, d, {key: 1 for key in keys}))
    fixtures.append(
        forms.alternating_form(p, n, d, {key: (i % (p - 1)) + 1 for i, key in enumerate(keys)})
    )
    return fixtures


def _obstruction_report(args):
    p, n, d = args.p, args.n, args.d
    if args.sample is None or args.seed is None:
        raise ValueError("--obstruction needs --sample and --seed")
    wedge_count = math.comb(d, n - 1)
    sampled = [
        forms.random_form(p, n, d, seed=args.seed + i) for i in range(args.sample)
    ]
    structured = _structured_fixtures(p, n, d)
    all_nondeg_false = all(
        not forms.is_nondegenerate(f) for f in sampled + structured
    )
    all_generic_false = all(not forms.is_generic(f) for f in sampled + structured)
    volume_grid = [
        {
            "p": vp,
            "n": vn,
            "nondegenerate": forms.is_nondegenerate(forms.volume_form(vp, vn)),
            "generic": forms.is_generic(forms.volume_form(vp, vn)),
        }
        for vp in (2, 3, 5)
        for vn in (2, 3, 4)
    ]
    return {
        "p": p,
        "n": n,
        "d": d,
        "sampled": len(sampled),
        "structured": len(structured),
        "allNondegenerateFalse": all_nondeg_false,
        "allGenericFalse": all_generic_false,
        "aprioriObstruction": wedge_count > d,
        "volumeGrid": volume_grid,
    }


def cmd_form_generic(args):
    form = _load_form(args.form)
    return {"generic": forms.is_generic(form)}


def cmd_form_dual(args):
    form = _load_form(args.form)
    w_basis = _load_vectors(args.wbasis)
    ts, us = forms.dual_tuples(form, w_basis)
    return {
        "ts": [io.wedge_to_dict(t) for t in ts],
        "us": [list(u.coords) for u in us],
    }


def cmd_form_findw(args):
    form = _load_form(args.form)
    wedges = io.wedges_from_dict(_load_json(args.wedges))
    targets = _parse_int_list(args.targets)
    avoid = _load_vectors(args.avoid) if args.avoid else []
    w = forms.find_w(form, wedges, targets, avoid=avoid)
    return {"w": list(w.coords)}


def cmd_form_extend(args):
    form = _load_form(args.form)
    return io.form_to_dict(forms.extend_step(form))


def cmd_form_tower(args):
    if args.zero:
        if args.p is None or args.n is None or args.d is None:
            raise ValueError("--zero needs --p, --n and --d")
        base = forms.zero_form(args.p, args.n, args.d)
    else:
        if not args.form:
            raise ValueError("need --form or --zero")
        base = _load_form(args.form)
    tower = forms.certify_tower(base, args.steps)
    payload = io.tower_to_dict(tower)
    payload["allCertificatesPassed"] = all(c.passed for c in tower.certificates)
    if args.probe_wedges:
        if args.probe_seed is None:
            raise ValueError("--probe-wedges needs --probe-seed")
        payload["probe"] = _tower_probe(tower, args.probe_wedges, args.probe_seed)
    return payload


def _tower_probe(tower: forms.Tower, count: int, seed: int) -> dict:
    """For random nonzero wedges over each level, ask the next level for a
    vector pairing to 1."""
    from .exterior import pairing2, wedge_dim, wedge_from_coords, wedge_vector

    rng = random.Random(seed)
    attempts = successes = 0
    for level in range(len(tower.levels) - 1):
        low, high = tower.levels[level], tower.levels[level + 1]
        grade = low.n - 1
        n_wedge = wedge_dim(low.d, grade)
        if n_wedge == 0:
            continue
        for _ in range(count):
            coords = [rng.randrange(low.p) for _ in range(n_wedge)]
            if not any(coords):
                coords[rng.randrange(n_wedge)] = 1 + rng.randrange(low.p - 1)
            t_low = wedge_from_coords(low.p, grade, low.d, FVector(low.p, tuple(coords)))
            # index tuples over the low space stay valid in the high space
            t_high = wedge_vector(high.p, grade, high.d, dict(t_low.terms))
            attempts += 1
            try:
                w = forms.find_w(high, [t_high], [1])
            except MultiformError:
                continue
            if pairing2(high, t_high, w) == 1 and not w.is_zero():
                successes += 1
    return {"attempts": attempts, "successes": successes}


# --- struct group ---------------------------------------------------------------


def cmd_struct_generate(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    return io.substructure_to_dict(substruct.generate(form, vectors))


def cmd_struct_invariant(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    return substruct.atomic_invariant(form, vectors).to_json_dict()


def cmd_struct_equiv(args):
    if args.agreement:
        return _equiv_agreement_report(args)
    form_a, form_b = _load_form(args.form_a), _load_form(args.form_b)
    tuple_a, tuple_b = _load_vectors(args.tuple_a), _load_vectors(args.tuple_b)
    return {"equivalent": substruct.equivalent(form_a, tuple_a, form_b, tuple_b)}


def _symplectic_transvection(form, v, x):
    return x + v.scale(forms.evaluate(form, [x, v]))


def _equiv_agreement_report(args):
    """Seeded pairs compared against the exhaustive map search."""
    if args.pairs is None or args.seed is None:
        raise ValueError("--agreement needs --pairs and --seed")
    p, n = args.p, args.n
    if n != 2:
        raise ValueError("the agreement experiment is wired for arity 2")
    rng = random.Random(args.seed)
    towers = {
        2: forms.certify_tower(forms.zero_form(p, 2, 1), 1).levels[-1],
        4: forms.certify_tower(forms.zero_form(p, 2, 2), 1).levels[-1],
        6: forms.certify_tower(forms.zero_form(p, 2, 3), 1).levels[-1],
    }
    agreements = disagreements = positives = 0
    for _ in range(args.pairs):
        d = rng.choice([2, 4, 6])
        form = towers[d]
        max_len = min(3, d // 2)
        length = rng.randrange(0, max_len + 1)
        tuple_a = [_random_vector(rng, p, d) for _ in range(length)]
        mode = rng.randrange(3)
        if mode == 0:
            tuple_b = [_random_vector(rng, p, d) for _ in range(length)]
        else:
            tuple_b = list(tuple_a)
            for _ in range(6):
                v = _random_vector(rng, p, d)
                tuple_b = [_symplectic_transvection(form, v, x) for x in tuple_b]
            if mode == 2 and tuple_b:
                slot = rng.randrange(len(tuple_b))
                tuple_b[slot] = tuple_b[slot] + _random_vector(rng, p, d)
        decided = substruct.equivalent(form, tuple_a, form, tuple_b)
        found = substruct.exhaustive_map_search(form, tuple_a, form, tuple_b) is not None
        if decided == found:
            agreements += 1
        else:
            disagreements += 1
        positives += decided
    return {
        "pairs": args.pairs,
        "agreements": agreements,
        "disagreements": disagreements,
        "equivalentCount": positives,
    }


def cmd_struct_embed(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    target = _load_form(args.target)
    sub = substruct.generate(form, vectors)
    iso = substruct.embed(sub, target)
    return io.iso_to_dict(iso)


# --- vc group ---------------------------------------------------------------


def cmd_vc_shatter(args):
    fam = io.load_family(args.family)
    box = _parse_box(args.box, fam.k)
    return {"shatters": shatter.shatters(fam, box)}


def cmd_vc_dim(args):
    fam = io.load_family(args.family)
    return {"vc": shatter.vc_k(fam, threads=args.threads)}


def cmd_vc_sauer(args):
    if args.extremal_n is not None:
        fam = shatter.bounded_size_family(args.extremal_n, args.cap)
        box = shatter.sauer_shelah_search(fam, args.d, threads=args.threads)
        return {
            "familySize": len(fam.sets),
            "d": args.d,
            "box": [list(part) for part in box.parts] if box else None,
        }
    if args.random_trials is not None:
        if args.seed is None:
            raise ValueError("--random-trials needs --seed")
        return _sauer_random_report(args)
    fam = io.load_family(args.family)
    box = shatter.sauer_shelah_search(fam, args.d, threads=args.threads)
    return {"d": args.d, "box": [list(part) for part in box.parts] if box else None}


def _random_family(rng: random.Random, n: int, size: int) -> shatter.BoxFamily:
    chosen = set()
    while len(chosen) < size:
        chosen.add(rng.getrandbits(n))
    return shatter.box_family(1, (n,), sorted(chosen))


def _sauer_random_report(args):
    rng = random.Random(args.seed)
    found = 0
    for _ in range(args.random_trials):
        fam = _random_family(rng, args.n, args.size)
        if shatter.sauer_shelah_search(fam, args.d, threads=args.threads) is not None:
            found += 1
    return {
        "trials": args.random_trials,
        "n": args.n,
        "familySize": args.size,
        "d": args.d,
        "shattered": found,
    }


def cmd_vc_badgraph(args):
    graph = shatter.build_bad_hypergraph(args.k, args.d, args.n)
    payload = io.hypergraph_to_dict(graph)
    if args.check:
        payload["check"] = _badgraph_check(graph, args.k, args.d, args.n)
    return payload


def _badgraph_check(graph, k, d, n):
    expected_last = 2 * d * (1 << (n ** (k - 1)))
    sizes_ok = graph.part_sizes == (n,) * (k - 1) + (expected_last,)
    block = 1 << (n ** (k - 1))
    need = expected_last // d - 1
    full_box = shatter.Box(k - 1, tuple(tuple(range(n)) for _ in range(k - 1)))
    intervals = 0
    all_shatter = True
    counts = set()
    for lo in range(expected_last):
        hi = lo + need
        if hi > expected_last:
            break
        fam = shatter.bad_hypergraph_interval_traces(graph, lo, hi)
        intervals += 1
        counts.add(len(fam.sets))
        if not shatter.shatters(fam, full_box):
            all_shatter = False
    edge_formula = 2 * d * (n ** (k - 1)) * (1 << (n ** (k - 1) - 1))
    return {
        "partSizesExact": sizes_ok,
        "minimalIntervalsChecked": intervals,
        "allIntervalsShatter": all_shatter,
        "traceCounts": sorted(counts),
        "expectedTraceCount": block,
        "edgeCount": len(graph.edges),
        "edgeCountFormula": edge_formula,
    }


def cmd_vc_randgraph(args):
    sizes = _parse_int_list(args.sizes)
    graph = shatter.random_partite_extension_graph(args.k, sizes, args.seed)
    payload = io.hypergraph_to_dict(graph)
    if args.audit:
        if args.audit_seed is None:
            raise ValueError("--audit needs --audit-seed")
        satisfied, total = shatter.extension_score(graph, args.audit, args.audit_seed)
        payload["extensionScore"] = {"satisfied": satisfied, "samples": total}
    return payload


def cmd_vc_ramsey(args):
    colors = _load_json(args.colors)["cells"]
    target = tuple(_parse_int_list(args.target))
    box = shatter.indiscernible_subbox(colors, target, budget=args.budget)
    return {"box": [list(part) for part in box.parts] if box else None}


# --- types group ---------------------------------------------------------------


def cmd_types_count(args):
    spec = _load_json(args.spec)
    oracle = _build_oracle(spec["oracle"])
    parameter, seqs, long_seq = _dagger_inputs(spec, oracle)
    window_spec = spec.get("window")
    window = long_seq if window_spec is None else long_seq[window_spec[0] : window_spec[0] + window_spec[1]]
    return {"count": typecount.phi_types_realized(oracle, parameter, seqs, window)}


def cmd_types_dagger(args):
    spec = _load_json(args.spec)
    oracle_spec = spec["oracle"]
    d_exp, eps = int(spec["dExp"]), float(spec["eps"])
    trials = int(spec.get("trials", 1))
    if trials == 1:
        oracle = _build_oracle(oracle_spec)
        parameter, seqs, long_seq = _dagger_inputs(spec, oracle)
        report = typecount.dagger_check(oracle, parameter, seqs, long_seq, d_exp, eps)
        return report.to_json_dict()
    passes = 0
    reports = []
    for trial in range(trials):
        trial_spec = dict(oracle_spec)
        if "tableSeed" in trial_spec:
            trial_spec["tableSeed"] = trial_spec["tableSeed"] + 1000 * trial
        oracle = _build_oracle(trial_spec)
        parameter, seqs, long_seq = _dagger_inputs(spec, oracle, rng_seed_offset=trial)
        report = typecount.dagger_check(oracle, parameter, seqs, long_seq, d_exp, eps)
        passes += report.passed
        reports.append(
            {
                "trial": trial,
                "passed": report.passed,
                "minCount": min(report.per_interval_type_counts),
                "bound": report.bound,
            }
        )
    return {
        "trials": trials,
        "passes": passes,
        "note": "empirical curve; the underlying guarantee is asymptotic and "
        "its constants are not pinned by this harness",
        "reports": reports,
    }


def cmd_types_compose(args):
    spec = _load_json(args.spec)
    base = _build_oracle(spec["base"], where="base")
    universes = [tuple(_hashable(v) for v in u) for u in spec["universes"]]
    slot_map = [tuple(entry) for entry in spec["slotMap"]]
    fns = []
    for i, fn_spec in enumerate(spec["fns"]):
        if "rows" in fn_spec:
            table = {
                tuple(_hashable(v) for v in row[:-1]): _hashable(row[-1])
                for row in fn_spec["rows"]
            }
        else:
            arg_universes = [universes[s] for s in slot_map[i]]
            table = typecount.random_table(
                arg_universes, base.universes[i], seed=int(fn_spec["seed"])
            )
        fns.append(table)
    composed = typecount.compose_relation(base, fns, slot_map, universes)
    payload = {"slots": composed.k + 1}
    if args.verify == "all":
        total = agreements = 0
        for ys in itertools.product(*universes):
            total += 1
            direct = base(*(fns[t][tuple(ys[s] for s in slot_map[t])] for t in range(base.k + 1)))
            agreements += composed(*ys) == direct
        payload["verified"] = {"inputs": total, "agreements": agreements}
    elif args.verify == "random":
        if args.verify_samples is None or args.verify_seed is None:
            raise ValueError("--verify random needs --verify-samples and --verify-seed")
        rng = random.Random(args.verify_seed)
        total = agreements = 0
        for _ in range(args.verify_samples):
            ys = tuple(u[rng.randrange(len(u))] for u in universes)
            total += 1
            direct = base(*(fns[t][tuple(ys[s] for s in slot_map[t])] for t in range(base.k + 1)))
            agreements += composed(*ys) == direct
        payload["verified"] = {"inputs": total, "agreements": agreements}
    return payload


def cmd_types_arrayfam(args):
    spec = _load_json(args.spec)
    oracle = _build_oracle(spec["oracle"])
    count, exact = typecount.array_family_cardinality(
        oracle,
        spec["delta"],
        [_hashable(v) for v in spec["zetaUniverse"]],
        budget=int(spec.get("budget", 10**6)),
        seed=int(spec.get("seed", 0)),
        samples=int(spec.get("samples", 4096)),
    )
    return {"count": count, "exact": exact}


# --- conn group ---------------------------------------------------------------


def cmd_conn_perp(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    return io.subspace_to_dict(conncomp.v_perp(form, vectors))


def cmd_conn_ginfty(args):
    form = _load_form(args.form)
    vectors = _load_vectors(args.vectors)
    return io.subspace_to_dict(conncomp.g_infty(form, vectors))


def cmd_conn_identity(args):
    if args.random is not None:
        return _identity_random_report(args)
    form = _load_form(args.form)
    data = _load_json(args.parts)
    p = int(data["p"])
    parts = [
        [FVector(p, tuple(int(c) for c in row)) for row in part]
        for part in data["parts"]
    ]
    lhs = conncomp.g_infty(form, [v for part in parts for v in part])
    return {
        "identity": conncomp.intersection_identity_check(form, parts),
        "unionComponent": io.subspace_to_dict(lhs),
    }


def _identity_random_report(args):
    if args.seed is None:
        raise ValueError("--random needs --seed")
    rng = random.Random(args.seed)
    held = failed = 0
    for trial in range(args.random):
        if trial % 2 == 0:
            form = forms.standard_symplectic(2, 6)
        else:
            base = forms.random_form(2, 3, 3, seed=args.seed + trial)
            form = forms.certify_tower(base, 2).levels[-1]
        parts = [
            [_random_vector(rng, 2, form.d) for _ in range(rng.randrange(0, 3))]
            for _ in range(form.n)
        ]
        if conncomp.intersection_identity_check(form, parts):
            held += 1
        else:
            failed += 1
    return {"instances": args.random, "held": held, "failed": failed}


# --- parser wiring ---------------------------------------------------------------


def build_parser() -> CliParser:
    parser = CliParser(prog="multiform", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument(
        "--threads", type=int, default=1, help="worker cap; never affects results"
    )
    groups = parser.add_subparsers(dest="group", metavar="group")

    form = groups.add_parser("form", help="alternating form operations").add_subparsers(
        dest="command", metavar="command"
    )
    sub = form.add_parser("eval", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.set_defaults(fn=cmd_form_eval)
    sub = form.add_parser("radical", parents=[common])
    sub.add_argument("--form", required=True)
    sub.set_defaults(fn=cmd_form_radical)
    sub = form.add_parser("nondeg", parents=[common])
    sub.add_argument("--form")
    sub.add_argument("--obstruction", action="store_true")
    sub.add_argument("--sample", type=int)
    sub.add_argument("--p", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--d", type=int)
    sub.add_argument("--seed", type=int)
    sub.set_defaults(fn=cmd_form_nondeg)
    sub = form.add_parser("generic", parents=[common])
    sub.add_argument("--form", required=True)
    sub.set_defaults(fn=cmd_form_generic)
    sub = form.add_parser("dual", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--wbasis", required=True)
    sub.set_defaults(fn=cmd_form_dual)
    sub = form.add_parser("findw", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--wedges", required=True)
    sub.add_argument("--targets", required=True)
    sub.add_argument("--avoid")
    sub.set_defaults(fn=cmd_form_findw)
    sub = form.add_parser("extend", parents=[common])
    sub.add_argument("--form", required=True)
    sub.set_defaults(fn=cmd_form_extend)
    sub = form.add_parser("tower", parents=[common])
    sub.add_argument("--form")
    sub.add_argument("--zero", action="store_true")
    sub.add_argument("--p", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--d", type=int)
    sub.add_argument("--steps", type=int, required=True)
    sub.add_argument("--probe-wedges", type=int)
    sub.add_argument("--probe-seed", type=int)
    sub.set_defaults(fn=cmd_form_tower)

    struct = groups.add_parser("struct", help="substructures and equivalence").add_subparsers(
        dest="command", metavar="command"
    )
    sub = struct.add_parser("generate", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.set_defaults(fn=cmd_struct_generate)
    sub = struct.add_parser("invariant", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.set_defaults(fn=cmd_struct_invariant)
    sub = struct.add_parser("equiv", parents=[common])
    sub.add_argument("--form-a")
    sub.add_argument("--tuple-a")
    sub.add_argument("--form-b")
    sub.add_argument("--tuple-b")
    sub.add_argument("--agreement", action="store_true")
    sub.add_argument("--pairs", type=int)
    sub.add_argument("--p", type=int, default=2)
    sub.add_argument("--n", type=int, default=2)
    sub.add_argument("--seed", type=int)
    sub.set_defaults(fn=cmd_struct_equiv)
    sub = struct.add_parser("embed", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.add_argument("--target", required=True)
    sub.set_defaults(fn=cmd_struct_embed)

    vc = groups.add_parser("vc", help="box families and shattering").add_subparsers(
        dest="command", metavar="command"
    )
    sub = vc.add_parser("shatter", parents=[common])
    sub.add_argument("--family", required=True)
    sub.add_argument("--box", required=True, help="semicolon-separated parts, e.g. '0,1;2,3'")
    sub.set_defaults(fn=cmd_vc_shatter)
    sub = vc.add_parser("dim", parents=[common])
    sub.add_argument("--family", required=True)
    sub.set_defaults(fn=cmd_vc_dim)
    sub = vc.add_parser("sauer", parents=[common])
    sub.add_argument("--family")
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--extremal-n", type=int)
    sub.add_argument("--cap", type=int, default=3)
    sub.add_argument("--random-trials", type=int)
    sub.add_argument("--n", type=int)
    sub.add_argument("--size", type=int)
    sub.add_argument("--seed", type=int)
    sub.set_defaults(fn=cmd_vc_sauer)
    sub = vc.add_parser("badgraph", parents=[common])
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--d", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--check", action="store_true")
    sub.set_defaults(fn=cmd_vc_badgraph)
    sub = vc.add_parser("randgraph", parents=[common])
    sub.add_argument("--k", type=int, required=True)
    sub.add_argument("--sizes", required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--audit", type=int)
    sub.add_argument("--audit-seed", type=int)
    sub.set_defaults(fn=cmd_vc_randgraph)
    sub = vc.add_parser("ramsey", parents=[common])
    sub.add_argument("--colors", required=True)
    sub.add_argument("--target", required=True)
    sub.add_argument("--budget", type=int)
    sub.set_defaults(fn=cmd_vc_ramsey)

    types = groups.add_parser("types", help="type counting experiments").add_subparsers(
        dest="command", metavar="command"
    )
    sub = types.add_parser("count", parents=[common])
    sub.add_argument("--spec", required=True)
    sub.set_defaults(fn=cmd_types_count)
    sub = types.add_parser("dagger", parents=[common])
    sub.add_argument("--spec", required=True)
    sub.set_defaults(fn=cmd_types_dagger)
    sub = types.add_parser("compose", parents=[common])
    sub.add_argument("--spec", required=True)
    sub.add_argument("--verify", choices=["all", "random", "none"], default="none")
    sub.add_argument("--verify-samples", type=int)
    sub.add_argument("--verify-seed", type=int)
    sub.set_defaults(fn=cmd_types_compose)
    sub = types.add_parser("arrayfam", parents=[common])
    sub.add_argument("--spec", required=True)
    sub.set_defaults(fn=cmd_types_arrayfam)

    conn = groups.add_parser("conn", help="connected components").add_subparsers(
        dest="command", metavar="command"
    )
    sub = conn.add_parser("perp", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.set_defaults(fn=cmd_conn_perp)
    sub = conn.add_parser("ginfty", parents=[common])
    sub.add_argument("--form", required=True)
    sub.add_argument("--vectors", required=True)
    sub.set_defaults(fn=cmd_conn_ginfty)
    sub = conn.add_parser("identity", parents=[common])
    sub.add_argument("--form")
    sub.add_argument("--parts")
    sub.add_argument("--random", type=int)
    sub.add_argument("--seed", type=int)
    sub.set_defaults(fn=cmd_conn_identity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "fn"):
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    try:
        payload = args.fn(args)
    except LimitError as err:
        sys.stderr.write(io.canonical_json({"error": type(err).__name__, "message": str(err)}))
        return 3
    except (MultiformError, ValueError, OSError, KeyError, json.JSONDecodeError) as err:
        message = f"missing key {err}" if isinstance(err, KeyError) else str(err)
        sys.stderr.write(io.canonical_json({"error": type(err).__name__, "message": message}))
        return 2
    _emit(payload, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
