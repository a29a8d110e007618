"""Trace-type counting over product sets and intervals.

A relation oracle is a total boolean function with one distinguished
parameter slot and k object slots. The interval criterion scans windows of
the long sequence and asks for one realizing fewer than 2^ceil(n^(k-1-eps))
traces; composition wires lookup tables into a base relation; the array
family counter measures how many subsets of the n^k grid the composed shape
can cut out while the grid entries stay fixed.
"""

from __future__ import annotations

import csv
import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence


@dataclass(frozen=True)
class RelationOracle:
    k: int  # object slots; calls take (parameter, y_1, ..., y_k)
    universes: tuple[tuple[Hashable, ...], ...]  # k + 1 carriers, parameter first
    fn: Callable[..., bool]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one object slot")
        if len(self.universes) != self.k + 1:
            raise ValueError("one universe per slot required (parameter first)")

    def __call__(self, *args) -> bool:
        if len(args) != self.k + 1:
            raise ValueError(f"expected {self.k + 1} arguments, got {len(args)}")
        return bool(self.fn(*args))


def oracle_from_table(
    k: int, universes: Sequence[Sequence[Hashable]], true_rows: Iterable = ()
) -> RelationOracle:
    rows = {tuple(row) for row in true_rows}
    return RelationOracle(k, tuple(tuple(u) for u in universes), lambda *a: a in rows)


def constant_oracle(
    k: int, universes: Sequence[Sequence[Hashable]], value: bool
) -> RelationOracle:
    return RelationOracle(k, tuple(tuple(u) for u in universes), lambda *a: value)


def oracle_from_hypergraph(graph) -> RelationOracle:
    """Edge membership of an ordered partite hypergraph, with a dummy
    parameter slot; object slot i carries part i's vertices in order."""
    universes = ((0,),) + tuple(tuple(range(s)) for s in graph.part_sizes)
    edges = graph.edges
    return RelationOracle(graph.k, universes, lambda b, *vs: vs in edges)


def phi_types_realized(
    oracle: RelationOracle,
    parameter: Hashable,
    seqs: Sequence[Sequence[Hashable]],
    window: Sequence[Hashable],
) -> int:
    """Number of distinct boolean traces over the product of the sequences,
    as the last slot ranges over the window."""
    if len(seqs) != oracle.k - 1:
        raise ValueError(f"expected {oracle.k - 1} sequences, got {len(seqs)}")
    grid = list(itertools.product(*seqs))
    traces = set()
    for c in window:
        traces.add(tuple(oracle(parameter, *cell, c) for cell in grid))
    return len(traces)


@dataclass(frozen=True)
class TypeCountReport:
    intervals_scanned: int
    per_interval_type_counts: tuple[int, ...]
    bound: int
    pass_interval: Optional[tuple[int, int]]  # (start, length)
    parameters: tuple[tuple[str, object], ...]

    @property
    def passed(self) -> bool:
        return self.pass_interval is not None

    def to_json_dict(self) -> dict:
        return {
            "intervalsScanned": self.intervals_scanned,
            "perIntervalTypeCounts": list(self.per_interval_type_counts),
            "bound": self.bound,
            "passInterval": list(self.pass_interval) if self.pass_interval else None,
            "passed": self.passed,
            "parameters": dict(self.parameters),
        }


def dagger_bound(n: int, k: int, eps: float) -> int:
    return 1 << math.ceil(n ** (k - 1 - eps))


def minimal_window_length(m: int, f_of_n: int) -> int:
    """Smallest integer window length that is >= m / f(n) - 1."""
    if f_of_n <= 0:
        raise ValueError("interval divisor must be positive")
    return max(0, -((f_of_n - m) // f_of_n))


def dagger_check(
    oracle: RelationOracle,
    parameter: Hashable,
    seqs: Sequence[Sequence[Hashable]],
    long_seq: Sequence[Hashable],
    d_exp: int,
    eps: float,
    f: Optional[Callable[[int], int]] = None,
) -> TypeCountReport:
    """Scan the long sequence for an interval of qualifying length realizing
    fewer than 2^ceil(n^(k-1-eps)) traces.

    Only minimal-length windows are visited, left to right: trace counts are
    monotone under window inclusion, so a longer qualifying interval passes
    or fails exactly when some (respectively every) minimal window does.
    """
    if not seqs:
        raise ValueError("need at least one short sequence")
    n = len(seqs[0])
    if any(len(s) != n for s in seqs):
        raise ValueError("short sequences must share one length")
    m = len(long_seq)
    if n > m:
        raise ValueError("long sequence must be at least as long as the short ones")
    f_of_n = f(n) if f is not None else n**d_exp
    bound = dagger_bound(n, oracle.k, eps)
    length = minimal_window_length(m, f_of_n)
    params = (
        ("n", n),
        ("m", m),
        ("k", oracle.k),
        ("dExp", d_exp),
        ("eps", eps),
        ("windowLength", length),
    )
    if length == 0:
        return TypeCountReport(1, (0,), bound, (0, 0), params)
    counts = []
    pass_interval = None
    for start in range(m - length + 1):
        count = phi_types_realized(
            oracle, parameter, seqs, long_seq[start : start + length]
        )
        counts.append(count)
        if pass_interval is None and count < bound:
            pass_interval = (start, length)
    return TypeCountReport(len(counts), tuple(counts), bound, pass_interval, params)


def compose_relation(
    base: RelationOracle,
    fns: Sequence[Mapping[tuple, Hashable] | Callable[..., Hashable]],
    slot_map: Sequence[Sequence[int]],
    universes: Sequence[Sequence[Hashable]],
) -> RelationOracle:
    """Wire k-ary lookup tables into the base relation.

    Entry t of slot_map names, for each argument of table t, which of the
    k + 1 output slots feeds it; the returned oracle evaluates the base
    relation on the table outputs pointwise.
    """
    arity = base.k + 1
    if len(fns) != arity or len(slot_map) != arity:
        raise ValueError(f"need one table and one slot assignment per base slot ({arity})")
    out_slots = len(universes)
    fan_in = len(slot_map[0])
    lookups = []
    for t, (fn, slots) in enumerate(zip(fns, slot_map)):
        if len(slots) != fan_in:
            raise ValueError("all tables must share one arity")
        if any(not 0 <= s < out_slots for s in slots):
            raise ValueError(f"slot assignment {slots} out of range")
        if callable(fn):
            lookups.append(fn)
        else:
            table = dict(fn)
            domain = list(itertools.product(*(universes[s] for s in slots)))
            missing = [key for key in domain if key not in table]
            if missing:
                raise ValueError(
                    f"table {t} is not total: missing {missing[0]!r} and "
                    f"{len(missing) - 1} more"
                )
            values = set(table[key] for key in domain)
            allowed = set(base.universes[t])
            if not values <= allowed:
                raise ValueError(f"table {t} produces values outside base slot {t}")
            lookups.append(table.__getitem__)
    slot_map = [tuple(s) for s in slot_map]
    spreads = [callable(fn) for fn in fns]

    def composed(*ys):
        args = []
        for t in range(arity):
            inputs = tuple(ys[s] for s in slot_map[t])
            args.append(lookups[t](*inputs) if spreads[t] else lookups[t](inputs))
        return base(*args)

    return RelationOracle(out_slots - 1, tuple(tuple(u) for u in universes), composed)


def random_table(
    arg_universes: Sequence[Sequence[Hashable]],
    value_universe: Sequence[Hashable],
    seed: int,
) -> dict[tuple, Hashable]:
    """Total lookup table with values drawn uniformly, deterministic per seed."""
    rng = random.Random(seed)
    values = list(value_universe)
    return {
        key: values[rng.randrange(len(values))]
        for key in itertools.product(*arg_universes)
    }


def array_family_cardinality(
    oracle: RelationOracle,
    delta,
    zeta_universe: Sequence[Hashable],
    budget: int = 10**6,
    seed: int = 0,
    samples: int = 4096,
) -> tuple[int, bool]:
    """Cardinality of the family of grid subsets cut out by the oracle as the
    side arrays vary over all assignments.

    delta is a k-dimensional nested array feeding the parameter slot; each of
    the k side arrays is indexed by the remaining k-1 coordinates and feeds
    one object slot. Exact when the full assignment space fits the budget,
    otherwise a seeded sampled lower bound (exact=False).
    """
    k = oracle.k
    values, shape = _flatten_array(delta, k)
    n = shape[0]
    if any(s != n for s in shape):
        raise ValueError("delta must be an n^k cube")
    side_cells = n ** (k - 1)
    u = len(zeta_universe)
    total_assignments = u ** (k * side_cells)
    grid = list(itertools.product(range(n), repeat=k))
    side_index = {
        coords: pos
        for pos, coords in enumerate(itertools.product(range(n), repeat=k - 1))
    }

    def cut_set(side_arrays) -> int:
        bits = 0
        for pos, coords in enumerate(grid):
            args = []
            for t in range(k):
                reduced = coords[:t] + coords[t + 1 :]
                args.append(side_arrays[t][side_index[reduced]])
            if oracle(values[_row_major(coords, shape)], *args):
                bits |= 1 << pos
        return bits

    exact = total_assignments <= budget
    seen = set()
    if exact:
        for assignment in itertools.product(
            itertools.product(zeta_universe, repeat=side_cells), repeat=k
        ):
            seen.add(cut_set(assignment))
    else:
        rng = random.Random(seed)
        pool = list(zeta_universe)
        for _ in range(samples):
            assignment = tuple(
                tuple(pool[rng.randrange(u)] for _ in range(side_cells))
                for _ in range(k)
            )
            seen.add(cut_set(assignment))
    return len(seen), exact


def _flatten_array(nested, k: int) -> tuple[list, tuple[int, ...]]:
    shape = []
    probe = nested
    for _ in range(k):
        shape.append(len(probe))
        probe = probe[0]
    values = []

    def walk(node, depth):
        if depth == k:
            values.append(node)
            return
        if len(node) != shape[depth]:
            raise ValueError("ragged array")
        for child in node:
            walk(child, depth + 1)

    walk(nested, 0)
    return values, tuple(shape)


def _row_major(coords: Sequence[int], shape: Sequence[int]) -> int:
    index = 0
    for c, s in zip(coords, shape):
        index = index * s + c
    return index


def reports_to_csv(reports: Sequence[TypeCountReport], path: str) -> None:
    """One row per report, for sweep plots."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["n", "m", "k", "dExp", "eps", "windowLength", "bound", "passed", "minCount"]
        )
        for report in reports:
            params = dict(report.parameters)
            writer.writerow(
                [
                    params["n"],
                    params["m"],
                    params["k"],
                    params["dExp"],
                    params["eps"],
                    params["windowLength"],
                    report.bound,
                    int(report.passed),
                    min(report.per_interval_type_counts),
                ]
            )
