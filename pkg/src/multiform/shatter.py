"""Set families over k-fold product boxes, shattering and box dimension.

Families are bitset-backed: each member set is one Python integer whose bit
at the row-major flattened cell index (coordinate 1 outermost) records
membership. Also here: the explicit adversarial ordered partite hypergraph
whose long last-part intervals realize the maximal number of traces, finite
random partite graphs, and exhaustive monochromatic sub-box search.
"""

from __future__ import annotations

import itertools
import math
import random
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, TooLarge


@dataclass(frozen=True)
class Box:
    k: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.parts) != self.k:
            raise ValueError("box must have one part per coordinate")
        object.__setattr__(
            self, "parts", tuple(tuple(sorted(set(part))) for part in self.parts)
        )

    def cells(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*self.parts)

    def cell_count(self) -> int:
        return math.prod(len(part) for part in self.parts)


@dataclass(frozen=True)
class BoxFamily:
    k: int
    sizes: tuple[int, ...]
    sets: tuple[int, ...]  # bitsets over the flattened product, deduplicated

    def __post_init__(self):
        if len(self.sizes) != self.k:
            raise ValueError("sizes must have one entry per coordinate")
        limit = 1 << self.cell_count()
        for s in self.sets:
            if not 0 <= s < limit:
                raise ValueError("bitset out of range for the product universe")

    def cell_count(self) -> int:
        return math.prod(self.sizes)

    def cell_index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.k:
            raise ValueError("coordinate arity mismatch")
        index = 0
        for c, size in zip(coords, self.sizes):
            if not 0 <= c < size:
                raise ValueError(f"coordinate {c} out of range for size {size}")
            index = index * size + c
        return index


def box_family(k: int, sizes: Sequence[int], sets: Iterable[int]) -> BoxFamily:
    """Deduplicate on load, keeping first-seen order."""
    seen = set()
    unique = []
    for s in sets:
        if s not in seen:
            seen.add(s)
            unique.append(s)
    return BoxFamily(k, tuple(sizes), tuple(unique))


def family_from_cell_sets(
    k: int, sizes: Sequence[int], members: Iterable[Iterable[Sequence[int] | int]]
) -> BoxFamily:
    """Build from explicit member sets given as flattened indices or coordinates."""
    fam = BoxFamily(k, tuple(sizes), ())
    bitsets = []
    for member in members:
        bits = 0
        for cell in member:
            idx = cell if isinstance(cell, int) else fam.cell_index(cell)
            if not 0 <= idx < fam.cell_count():
                raise ValueError(f"cell index {idx} out of range")
            bits |= 1 << idx
        bitsets.append(bits)
    return box_family(k, sizes, bitsets)


def powerset_family(k: int, sizes: Sequence[int]) -> BoxFamily:
    cells = math.prod(sizes)
    return box_family(k, sizes, range(1 << cells))


def bounded_size_family(n: int, cap: int) -> BoxFamily:
    """k=1 family of all subsets of [n] with at most cap elements."""
    sets = []
    for r in range(cap + 1):
        for subset in itertools.combinations(range(n), r):
            bits = 0
            for i in subset:
                bits |= 1 << i
            sets.append(bits)
    return box_family(1, (n,), sets)


def shatters(fam: BoxFamily, box: Box) -> bool:
    """All 2^(cell count) traces of the family on the box are realized."""
    if box.k != fam.k:
        raise ValueError("box arity mismatch")
    cells = [fam.cell_index(c) for c in box.cells()]
    m = len(cells)
    want = 1 << m
    if want > len(fam.sets) or m == 0:
        return m == 0 and len(fam.sets) > 0  # the empty box has one trace
    seen = set()
    for s in fam.sets:
        trace = 0
        for bit_pos, cell in enumerate(cells):
            if (s >> cell) & 1:
                trace |= 1 << bit_pos
        if trace not in seen:
            seen.add(trace)
            if len(seen) == want:
                return True
    return False


def trace_count(fam: BoxFamily, box: Box) -> int:
    """Number of distinct traces of the family on the box."""
    cells = [fam.cell_index(c) for c in box.cells()]
    seen = set()
    for s in fam.sets:
        trace = 0
        for bit_pos, cell in enumerate(cells):
            if (s >> cell) & 1:
                trace |= 1 << bit_pos
        seen.add(trace)
    return len(seen)


def _candidate_boxes(sizes: Sequence[int], d: int) -> Iterable[Box]:
    axes = [itertools.combinations(range(size), d) for size in sizes]
    for parts in itertools.product(*axes):
        yield Box(len(sizes), parts)


def find_shattered_box(fam: BoxFamily, d: int, threads: int = 1) -> Optional[Box]:
    """Lexicographically first shattered d-box, or None.

    With threads > 1 candidates are checked in parallel chunks; the winner is
    still the lexicographic first, independent of scheduling.
    """
    if d <= 0:
        raise ValueError("box size must be positive")
    if any(d > size for size in fam.sizes):
        return None
    if (1 << d ** fam.k) > len(fam.sets):
        return None
    boxes = _candidate_boxes(fam.sizes, d)
    if threads <= 1:
        for box in boxes:
            if shatters(fam, box):
                return box
        return None
    chunk = 64
    with ThreadPoolExecutor(max_workers=threads) as pool:
        iterator = iter(boxes)
        while True:
            batch = list(itertools.islice(iterator, chunk))
            if not batch:
                return None
            for box, hit in zip(batch, pool.map(lambda b: shatters(fam, b), batch)):
                if hit:
                    return box


def sauer_shelah_search(fam: BoxFamily, d: int, threads: int = 1) -> Optional[Box]:
    """Deterministic search for a shattered d-box in a uniform-size family."""
    if len(set(fam.sizes)) > 1:
        raise ValueError("sauer_shelah_search needs uniform coordinate sizes")
    return find_shattered_box(fam, d, threads=threads)


def vc_k(fam: BoxFamily, threads: int = 1) -> int:
    """Largest d such that some d-box is shattered; 0 when no 1-box is."""
    best = 0
    if not fam.sets or fam.cell_count() == 0:
        return 0
    for d in range(1, min(fam.sizes) + 1):
        if find_shattered_box(fam, d, threads=threads) is None:
            break
        best = d
    return best


@dataclass(frozen=True)
class PartiteHypergraph:
    k: int
    part_sizes: tuple[int, ...]
    edges: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if len(self.part_sizes) != self.k:
            raise ValueError("one size per part required")
        for edge in self.edges:
            if len(edge) != self.k:
                raise ValueError("edge arity mismatch")
            for v, size in zip(edge, self.part_sizes):
                if not 0 <= v < size:
                    raise ValueError("edge vertex out of part range")

    def has_edge(self, edge: Sequence[int]) -> bool:
        return tuple(edge) in self.edges


def flatten_cell(coords: Sequence[int], sizes: Sequence[int]) -> int:
    index = 0
    for c, size in zip(coords, sizes):
        index = index * size + c
    return index


def build_bad_hypergraph(k: int, d: int, n: int) -> PartiteHypergraph:
    """The adversarial ordered k-partite hypergraph on parts of sizes
    (n, ..., n, 2d * 2^(n^(k-1))).

    The last part is the lexicographic product [2d] x [number of subsets];
    vertex (t, a) is joined to a front cell exactly when the cell belongs to
    the a-th subset in binary-counter order over the row-major flattening.
    """
    if k < 2:
        raise ValueError("need at least two parts")
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    cells = n ** (k - 1)
    if cells > 20:
        raise BudgetExceeded(f"n^(k-1) = {cells} exceeds the guard of 20")
    block = 1 << cells
    last_size = 2 * d * block
    front_sizes = (n,) * (k - 1)
    edges = set()
    for a in range(block):
        members = [
            coords
            for coords in itertools.product(range(n), repeat=k - 1)
            if (a >> flatten_cell(coords, front_sizes)) & 1
        ]
        if not members:
            continue
        for t in range(2 * d):
            vk = t * block + a
            for coords in members:
                edges.add(coords + (vk,))
    return PartiteHypergraph(k, front_sizes + (last_size,), frozenset(edges))


def bad_hypergraph_interval_traces(graph: PartiteHypergraph, lo: int, hi: int) -> BoxFamily:
    """Trace family cut out on the front box by last-part vertices in [lo, hi)."""
    k = graph.k
    front_sizes = graph.part_sizes[:-1]
    sets = []
    for c in range(lo, hi):
        bits = 0
        for coords in itertools.product(*(range(s) for s in front_sizes)):
            if graph.has_edge(coords + (c,)):
                bits |= 1 << flatten_cell(coords, front_sizes)
        sets.append(bits)
    return box_family(k - 1, front_sizes, sets)


def random_partite_extension_graph(
    k: int, part_sizes: Sequence[int], seed: int
) -> PartiteHypergraph:
    """Each potential edge present independently with probability 1/2,
    deterministic per seed (edges drawn in lexicographic order)."""
    rng = random.Random(seed)
    edges = set()
    for edge in itertools.product(*(range(s) for s in part_sizes)):
        if rng.getrandbits(1):
            edges.add(edge)
    return PartiteHypergraph(k, tuple(part_sizes), frozenset(edges))


def extension_score(
    graph: PartiteHypergraph, samples: int, seed: int, demand_size: int = 2
) -> tuple[int, int]:
    """Audit of the one-point extension axioms: how many random demands
    (a part j plus disjoint positive/negative cell sets over the other
    parts) admit a witness vertex in part j. Returns (satisfied, samples).
    """
    rng = random.Random(seed)
    other_cells = {}
    for j in range(graph.k):
        others = [range(s) for i, s in enumerate(graph.part_sizes) if i != j]
        other_cells[j] = list(itertools.product(*others))
    satisfied = 0
    for _ in range(samples):
        j = rng.randrange(graph.k)
        pool = other_cells[j]
        total = rng.randrange(1, demand_size + 1) + rng.randrange(0, demand_size + 1)
        total = min(total, len(pool))
        chosen = []
        seen = set()
        while len(chosen) < total:
            cell = pool[rng.randrange(len(pool))]
            if cell not in seen:
                seen.add(cell)
                chosen.append(cell)
        split = rng.randrange(len(chosen) + 1)
        positive, negative = chosen[:split], chosen[split:]
        for b in range(graph.part_sizes[j]):
            if all(graph.has_edge(cell[:j] + (b,) + cell[j:]) for cell in positive) and all(
                not graph.has_edge(cell[:j] + (b,) + cell[j:]) for cell in negative
            ):
                satisfied += 1
                break
    return satisfied, samples


def indiscernible_subbox(
    colors, target_sizes: Sequence[int], budget: Optional[int] = None
) -> Optional[Box]:
    """Lexicographically first sub-box of the given sizes on which the cell
    coloring is constant, or None.

    Cell labels are unary data, so pattern-indiscernibility collapses to
    constancy: single-cell patterns already force every two cells of the
    sub-box to share their color.
    """
    from .forms import enumeration_budget

    if budget is None:
        budget = enumeration_budget(default=10**7)
    shape = []
    probe = colors
    while isinstance(probe, (list, tuple)):
        shape.append(len(probe))
        probe = probe[0] if len(probe) else None
    k = len(target_sizes)
    if len(shape) != k:
        raise ValueError("color array arity does not match target sizes")
    if any(t > s for t, s in zip(target_sizes, shape)):
        return None

    def color_at(coords):
        value = colors
        for c in coords:
            value = value[c]
        return value

    work = math.prod(math.comb(s, t) for s, t in zip(shape, target_sizes)) * math.prod(
        target_sizes
    )
    if work > budget:
        raise BudgetExceeded(f"sub-box scan needs {work} cell visits > budget {budget}")
    axes = [itertools.combinations(range(s), t) for s, t in zip(shape, target_sizes)]
    for parts in itertools.product(*axes):
        box = Box(k, parts)
        cells = iter(box.cells())
        first = color_at(next(cells))
        if all(color_at(c) == first for c in cells):
            return box
    return None
