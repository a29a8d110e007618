"""JSON and binary serialization for every file format the tools exchange.

JSON output is canonical (sorted keys, two-space indent, trailing newline)
so identical inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
import struct
from typing import Sequence

from .conncomp import Subspace
from .exterior import WedgeVector, wedge_vector
from .forms import AlternatingForm, Tower, TowerCertificate, alternating_form
from .linalg import FMatrix, FVector
from .shatter import BoxFamily, PartiteHypergraph, box_family
from .substruct import AtomicInvariant, PartialIso, Substructure


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# --- vectors and matrices ---------------------------------------------------


def vector_to_dict(v: FVector) -> dict:
    return {"p": v.p, "coords": list(v.coords)}


def vector_from_dict(data: dict) -> FVector:
    return FVector(int(data["p"]), tuple(int(c) for c in data["coords"]))


def vectors_to_dict(p: int, vectors: Sequence[FVector]) -> dict:
    return {"p": p, "vectors": [list(v.coords) for v in vectors]}


def vectors_from_dict(data: dict) -> list[FVector]:
    p = int(data["p"])
    return [FVector(p, tuple(int(c) for c in row)) for row in data["vectors"]]


def matrix_to_dict(m: FMatrix) -> dict:
    return {"p": m.p, "ncols": m.ncols, "rows": [list(r) for r in m.rows]}


# --- forms and wedges -------------------------------------------------------


def form_to_dict(form: AlternatingForm) -> dict:
    return {
        "p": form.p,
        "n": form.n,
        "d": form.d,
        "coeffs": [[list(key), c] for key, c in form.coeffs],
    }


def form_from_dict(data: dict) -> AlternatingForm:
    coeffs = {tuple(int(i) for i in key): int(c) for key, c in data.get("coeffs", [])}
    return alternating_form(int(data["p"]), int(data["n"]), int(data["d"]), coeffs)


def wedge_to_dict(t: WedgeVector) -> dict:
    return {
        "p": t.p,
        "n": t.grade + 1,
        "d": t.d,
        "terms": [list(idx) + [c] for idx, c in t.terms],
    }


def wedge_from_dict(data: dict) -> WedgeVector:
    grade = int(data["n"]) - 1
    terms = {}
    for entry in data.get("terms", []):
        idx, c = tuple(int(i) for i in entry[:-1]), int(entry[-1])
        terms[idx] = c
    return wedge_vector(int(data["p"]), grade, int(data["d"]), terms)


def wedges_from_dict(data: dict) -> list[WedgeVector]:
    grade = int(data["n"]) - 1
    p, d = int(data["p"]), int(data["d"])
    result = []
    for flat_terms in data.get("wedges", []):
        terms = {}
        for entry in flat_terms:
            terms[tuple(int(i) for i in entry[:-1])] = int(entry[-1])
        result.append(wedge_vector(p, grade, d, terms))
    return result


def tower_to_dict(tower: Tower) -> dict:
    return {
        "levels": [form_to_dict(f) for f in tower.levels],
        "dimensions": list(tower.dimensions()),
        "certificates": [
            {
                "level": c.level,
                "wedgeDim": c.wedge_dim,
                "rank": c.achieved_rank,
                "passed": c.passed,
            }
            for c in tower.certificates
        ],
    }


# --- substructures ----------------------------------------------------------


def substructure_to_dict(sub: Substructure) -> dict:
    return {
        "form": form_to_dict(sub.form),
        "basis": [list(v.coords) for v in sub.basis],
        "gram": [[list(key), val] for key, val in sub.gram],
    }


def invariant_to_dict(inv: AtomicInvariant) -> dict:
    return inv.to_json_dict()


def iso_to_dict(iso: PartialIso) -> dict:
    from .substruct import atomic_invariant

    return {
        "domain": [list(v.coords) for v in iso.domain],
        "image": [list(v.coords) for v in iso.image],
        "invariant": atomic_invariant(iso.form_a, iso.domain).to_json_dict(),
    }


# --- box families and hypergraphs -------------------------------------------

_FAMILY_MAGIC = b"BOXF"


def family_to_bytes(fam: BoxFamily) -> bytes:
    """Binary format: magic, k, sizes, set count, then per set the packed
    little-endian bitset over ceil(cells / 8) bytes."""
    cells = fam.cell_count()
    nbytes = (cells + 7) // 8
    out = bytearray(_FAMILY_MAGIC)
    out += struct.pack("<I", fam.k)
    for size in fam.sizes:
        out += struct.pack("<I", size)
    out += struct.pack("<I", len(fam.sets))
    for s in fam.sets:
        out += s.to_bytes(nbytes, "little")
    return bytes(out)


def family_from_bytes(blob: bytes) -> BoxFamily:
    if blob[:4] != _FAMILY_MAGIC:
        raise ValueError("not a box family blob (bad magic)")
    offset = 4
    (k,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    sizes = []
    for _ in range(k):
        (size,) = struct.unpack_from("<I", blob, offset)
        sizes.append(size)
        offset += 4
    (count,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    cells = 1
    for size in sizes:
        cells *= size
    nbytes = (cells + 7) // 8
    sets = []
    for _ in range(count):
        sets.append(int.from_bytes(blob[offset : offset + nbytes], "little"))
        offset += nbytes
    return box_family(k, sizes, sets)


def family_to_debug_dict(fam: BoxFamily) -> dict:
    return {
        "k": fam.k,
        "sizes": list(fam.sizes),
        "sets": [
            [i for i in range(fam.cell_count()) if (s >> i) & 1] for s in fam.sets
        ],
    }


def family_from_debug_dict(data: dict) -> BoxFamily:
    sets = []
    for member in data["sets"]:
        bits = 0
        for i in member:
            bits |= 1 << int(i)
        sets.append(bits)
    return box_family(int(data["k"]), [int(s) for s in data["sizes"]], sets)


def load_family(path: str) -> BoxFamily:
    with open(path, "rb") as handle:
        blob = handle.read()
    if blob[:4] == _FAMILY_MAGIC:
        return family_from_bytes(blob)
    return family_from_debug_dict(json.loads(blob.decode("utf-8")))


def hypergraph_to_dict(graph: PartiteHypergraph) -> dict:
    return {
        "k": graph.k,
        "partSizes": list(graph.part_sizes),
        "edges": sorted(list(edge) for edge in graph.edges),
    }


def hypergraph_from_dict(data: dict) -> PartiteHypergraph:
    return PartiteHypergraph(
        int(data["k"]),
        tuple(int(s) for s in data["partSizes"]),
        frozenset(tuple(int(v) for v in edge) for edge in data["edges"]),
    )


# --- subspaces ----------------------------------------------------------------


def subspace_to_dict(space: Subspace) -> dict:
    return {
        "p": space.p,
        "d": space.d,
        "dim": space.dim,
        "codim": space.codim,
        "basis": [list(row) for row in space.basis],
    }
