"""Construction and export of the clean graph Cl2(Z_n).

Vertices are pairs ``(e, u)`` of a nonzero idempotent and a unit. Two
distinct vertices are adjacent when ``e*f = 0`` or ``u*v = 1`` (mod n).
Vertices are stored block-major: one contiguous block per idempotent,
idempotents ascending, units ascending inside a block, so the block of
``e = 1`` always comes first.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .ring import Factorization, RingData, euler_phi, factorize, ring_data

DEFAULT_VERTEX_CAP = 50_000
VERTEX_CAP_ENV = "CLEANGRAPH_VERTEX_CAP"
# above this the packed bit matrix is not kept
BITMATRIX_LIMIT = 4096

EXPORT_FORMATS = ("dot", "csv", "json")


class SizeLimitError(ValueError):
    """Raised when a graph would exceed the configured vertex cap."""


def vertex_cap() -> int:
    """Vertex cap from the environment, falling back to the default."""
    raw = os.environ.get(VERTEX_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_VERTEX_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{VERTEX_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{VERTEX_CAP_ENV} must be positive, got {cap}")
    return cap


class Vertex(NamedTuple):
    e: int
    u: int

    def label(self) -> str:
        return f"({self.e},{self.u})"


def cl2_vertex_count(fact: Factorization) -> int:
    """(2**k - 1) * phi(n), without building anything."""
    return (2**fact.k_total - 1) * euler_phi(fact)


@dataclass(frozen=True, eq=False)
class CleanGraph:
    n: int
    ring: RingData
    include_zero_block: bool
    vertices: tuple[Vertex, ...]
    units: tuple[int, ...]
    block_idempotents: tuple[int, ...]
    # CSR adjacency, neighbours sorted ascending
    indptr: np.ndarray
    indices: np.ndarray
    bits: np.ndarray | None

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return int(self.indices.size // 2)

    @property
    def blocks(self) -> list[range]:
        size = self.ring.phi
        return [range(b * size, (b + 1) * size) for b in range(len(self.block_idempotents))]

    def block_of(self, i: int) -> int:
        return i // self.ring.phi

    def block_index(self, e: int) -> int:
        return self.block_idempotents.index(e)

    def index_of(self, v: Vertex | tuple[int, int]) -> int:
        e, u = v
        b = self.block_index(e)
        return b * self.ring.phi + self._unit_pos[u]

    @property
    def _unit_pos(self) -> dict[int, int]:
        cache = self.__dict__.get("_unit_pos_cache")
        if cache is None:
            cache = {u: j for j, u in enumerate(self.units)}
            object.__setattr__(self, "_unit_pos_cache", cache)
        return cache

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.num_vertices)]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once as ``(i, j)`` with ``i < j``, lexicographic."""
        for i in range(self.num_vertices):
            nbrs = self.neighbors(i)
            for j in nbrs[np.searchsorted(nbrs, i, side="right") :].tolist():
                yield i, j

    def csr_matrix(self):
        from scipy.sparse import csr_matrix

        V = self.num_vertices
        data = np.ones(self.indices.size, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(V, V))

    def __repr__(self) -> str:
        mode = "Cl" if self.include_zero_block else "Cl2"
        return f"<CleanGraph {mode}(Z_{self.n}) V={self.num_vertices} E={self.num_edges}>"


def build_cl2(
    n: int | Factorization,
    include_zero_block: bool = False,
    cap: int | None = None,
    unit_order: list[int] | None = None,
) -> CleanGraph:
    """Build Cl2(Z_n), or the full Cl(Z_n) with ``include_zero_block``.

    ``unit_order`` permutes the units inside every block; it exists so tests
    can relabel vertices. Block ranges stay contiguous either way.
    """
    fact = n if isinstance(n, Factorization) else factorize(n)
    if fact.n < 2:
        raise ValueError(f"clean graph needs n >= 2, got n={fact.n}")
    cap = vertex_cap() if cap is None else cap
    count = cl2_vertex_count(fact)
    if include_zero_block:
        count += count // (2**fact.k_total - 1)
    if count > cap:
        raise SizeLimitError(f"Cl2(Z_{fact.n}) has {count} vertices, above the cap of {cap}")

    ring = ring_data(fact)
    n = fact.n
    units = list(ring.units)
    if unit_order is not None:
        if sorted(unit_order) != units:
            raise ValueError("unit_order must be a permutation of the units")
        units = list(unit_order)
    ids = ring.idempotents if include_zero_block else ring.nonzero_idempotents
    phi = len(units)
    nb = len(ids)
    V = nb * phi
    vertices = tuple(Vertex(e, u) for e in ids for u in units)

    pos = {u: j for j, u in enumerate(units)}
    inv_pos = np.array([pos[ring.inverse(u)] for u in units], dtype=np.int64)
    orth = [[b for b in range(nb) if ids[a] * ids[b] % n == 0] for a in range(nb)]
    block_offsets = np.arange(nb, dtype=np.int64) * phi
    full_blocks = {a: np.concatenate([np.arange(b * phi, (b + 1) * phi) for b in orth[a]])
                   if orth[a] else np.empty(0, dtype=np.int64) for a in range(nb)}

    rows = []
    for a in range(nb):
        base = full_blocks[a]
        for j in range(phi):
            i = a * phi + j
            nb_i = np.union1d(base, block_offsets + inv_pos[j])
            rows.append(nb_i[nb_i != i])
    lengths = np.fromiter((r.size for r in rows), dtype=np.int64, count=V)
    indptr = np.zeros(V + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    indices = np.concatenate(rows).astype(np.int64) if rows else np.empty(0, dtype=np.int64)

    bits = None
    if V <= BITMATRIX_LIMIT:
        dense = np.zeros((V, V), dtype=bool)
        dense[np.repeat(np.arange(V), lengths), indices] = True
        bits = np.packbits(dense, axis=1)

    return CleanGraph(
        n=n,
        ring=ring,
        include_zero_block=include_zero_block,
        vertices=vertices,
        units=tuple(units),
        block_idempotents=tuple(ids),
        indptr=indptr,
        indices=indices,
        bits=bits,
    )


def adjacent(g: CleanGraph, i: int, j: int) -> bool:
    V = g.num_vertices
    for x in (i, j):
        if not 0 <= x < V:
            raise IndexError(f"vertex index {x} out of range for {V} vertices")
    if i == j:
        return False
    if g.bits is not None:
        return bool((g.bits[i, j >> 3] >> (7 - (j & 7))) & 1)
    nbrs = g.neighbors(i)
    k = int(np.searchsorted(nbrs, j))
    return k < nbrs.size and int(nbrs[k]) == j


def adjacent_by_rule(n: int, v: tuple[int, int], w: tuple[int, int]) -> bool:
    """The defining adjacency rule, for distinct vertices."""
    (e, u), (f, x) = v, w
    return e * f % n == 0 or u * x % n == 1


# ---------------------------------------------------------------- export


def export(g: CleanGraph, fmt: str) -> bytes:
    if fmt == "dot":
        return _to_dot(g).encode()
    if fmt in ("csv", "edge-csv"):
        return _to_csv(g).encode()
    if fmt == "json":
        return to_json(g).encode()
    raise ValueError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")


def _graph_name(g: CleanGraph) -> str:
    return f"{'Cl' if g.include_zero_block else 'Cl2'}(Z_{g.n})"


def _to_dot(g: CleanGraph) -> str:
    out = io.StringIO()
    out.write(f'graph "{_graph_name(g)}" {{\n')
    for i, v in enumerate(g.vertices):
        out.write(f'  {i} [label="{v.label()}"];\n')
    for i, j in g.edges():
        out.write(f"  {i} -- {j};\n")
    out.write("}\n")
    return out.getvalue()


def _to_csv(g: CleanGraph) -> str:
    out = io.StringIO()
    out.write("e1,u1,e2,u2\n")
    vs = g.vertices
    for i, j in g.edges():
        out.write(f"{vs[i].e},{vs[i].u},{vs[j].e},{vs[j].u}\n")
    return out.getvalue()


def to_json(g: CleanGraph) -> str:
    doc = {
        "n": g.n,
        "include_zero_block": g.include_zero_block,
        "vertices": [[v.e, v.u] for v in g.vertices],
        "edges": [[i, j] for i, j in g.edges()],
        "blocks": [[r.start, r.stop] for r in g.blocks],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(data: str | bytes) -> CleanGraph:
    """Rebuild a graph from :func:`to_json` output.

    The graph is reconstructed from ``n`` and then checked against the
    stored vertices, edges and blocks; any mismatch raises ``ValueError``.
    """
    doc = json.loads(data)
    g = build_cl2(int(doc["n"]), include_zero_block=bool(doc.get("include_zero_block", False)),
                  cap=max(vertex_cap(), len(doc["vertices"])))
    if [list(v) for v in g.vertices] != doc["vertices"]:
        raise ValueError("vertex list does not match the graph of the stated n")
    if [list(e) for e in g.edges()] != doc["edges"]:
        raise ValueError("edge list does not match the graph of the stated n")
    if [[r.start, r.stop] for r in g.blocks] != doc["blocks"]:
        raise ValueError("block ranges do not match the graph of the stated n")
    return g


def write_export(g: CleanGraph, fmt: str, path: str | os.PathLike) -> None:
    data = export(g, fmt)
    with open(path, "wb") as fh:
        fh.write(data)
