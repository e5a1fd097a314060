"""Distances, diameter and Wiener index of Cl2(Z_n).

Two routes are kept apart on purpose:

* closed forms that only look at ``Factorization`` (and a vertex pair for
  :func:`distance_closed`), and
* BFS oracles that only look at the explicit graph.

``wiener_closed`` / ``wiener_decomposition_closed`` evaluate the published
formula verbatim. That formula counts only complementary idempotent pairs as
orthogonal, which undercounts distance-1 pairs once n has three or more
distinct primes; ``wiener_closed_corrected`` and
``wiener_decomposition_corrected`` count every orthogonal pair and agree
with the oracle for all k >= 2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

import numpy as np

from .graph import CleanGraph, Vertex
from .ring import Factorization, RingData, count_self_inverse_closed, euler_phi


@total_ordering
class Infinite(Enum):
    """Distance between vertices in different components."""

    INF = "INF"

    def __str__(self) -> str:
        return "INF"

    def __repr__(self) -> str:
        return "INF"

    def __lt__(self, other: object) -> bool:
        if isinstance(other, Infinite):
            return False
        if isinstance(other, (int, float)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if isinstance(other, Infinite):
            return False
        if isinstance(other, (int, float)):
            return True
        return NotImplemented


INF = Infinite.INF
Distance = Union[int, Infinite]


def parse_distance(text: str | int) -> Distance:
    if isinstance(text, int):
        return text
    return INF if text == "INF" else int(text)


@dataclass(frozen=True)
class WienerDecomposition:
    s1: int
    s2: int
    s3: int
    s4: int
    t1: int
    t2: int
    t3: int

    @property
    def total(self) -> int:
        return self.s1 + self.s2 + self.s3 + self.s4

    def as_dict(self) -> dict[str, int]:
        return {
            "s1": self.s1, "s2": self.s2, "s3": self.s3, "s4": self.s4,
            "t1": self.t1, "t2": self.t2, "t3": self.t3, "total": self.total,
        }


def _require_connected_case(fact: Factorization) -> None:
    if fact.k_total < 2:
        raise ValueError(
            f"closed form needs at least two distinct prime factors, n={fact.n} has {fact.k_total}"
        )


# ------------------------------------------------------------- closed forms


def distance_closed(v: Vertex | tuple[int, int], w: Vertex | tuple[int, int], ring: RingData) -> int:
    """Distance between two Cl2 vertices from the four-case rule."""
    _require_connected_case(ring.fact)
    (e, u), (f, x) = v, w
    if (e, u) == (f, x):
        return 0
    n = ring.n
    if e * f % n == 0 or u * x % n == 1:
        return 1
    if e == f:
        return 3 if e == 1 else 2
    return 2


def distance_case(v: tuple[int, int], w: tuple[int, int], n: int) -> int:
    """Which of the four distance cases a distinct pair falls in (1..4)."""
    (e, u), (f, x) = v, w
    if e * f % n == 0 or u * x % n == 1:
        return 1
    if e == f:
        return 4 if e == 1 else 2
    return 3


def diameter_closed(fact: Factorization) -> Distance:
    if fact.n < 2:
        raise ValueError(f"n must be >= 2, got {fact.n}")
    if fact.n == 2:
        return 0  # single vertex (1,1)
    return 3 if fact.k_total >= 2 else INF


def _bracket(k: int) -> int:
    return 2 ** (2 * k - 1) - 2 ** (k + 1) - (2 ** (k - 2) - 1) * (2**k + 2)


def _wiener_numerator(phi: int, k: int, r: int) -> int:
    K = 2**k
    return phi * phi * (2 * K * K - 5 * K + 5) - phi * (K * K - K + 3) + K * r


def wiener_closed(fact: Factorization) -> Distance:
    """Published closed form for W(Cl2(Z_n)), evaluated exactly."""
    if fact.n < 2:
        raise ValueError(f"n must be >= 2, got {fact.n}")
    if fact.n == 2:
        return 0
    if fact.k_total < 2:
        return INF
    num = _wiener_numerator(euler_phi(fact), fact.k_total, count_self_inverse_closed(fact))
    assert num % 2 == 0, "bracket must be even"
    return num // 2


def wiener_decomposition_closed(fact: Factorization) -> WienerDecomposition:
    """Published per-class partial sums S1..S4 and T1..T3."""
    _require_connected_case(fact)
    phi = euler_phi(fact)
    k = fact.k_total
    r = count_self_inverse_closed(fact)
    K = 2**k
    s1 = (3 * phi * phi - 5 * phi + 2 * r) // 2
    s2 = (2 ** (k - 1) - 1) * (2 * phi * phi - 3 * phi + r)
    s3 = (K - 2) * (2 * phi * phi - phi)
    b = _bracket(k)
    t1 = phi * phi * (K - 2) // 2
    t2 = 2 * phi * b
    t3 = (4 * phi * phi - 4 * phi) * b
    return WienerDecomposition(s1, s2, s3, t1 + t2 + t3, t1, t2, t3)


def orthogonal_pair_count(k: int) -> int:
    """Unordered pairs {e, f} of nontrivial idempotents with e*f = 0.

    Idempotents of Z_n correspond to subsets of the k primes and products to
    intersections, so this counts pairs of disjoint nonempty subsets.
    """
    return (3**k - 2 ** (k + 1) + 1) // 2


def wiener_decomposition_corrected(fact: Factorization) -> WienerDecomposition:
    """Partial sums with every orthogonal block pair counted.

    S1..S3 coincide with the published ones. For two distinct nontrivial
    blocks, orthogonal blocks contribute phi**2 pairs at distance 1; the rest
    contribute phi pairs at distance 1 (u*v = 1) and phi**2 - phi at distance 2.
    """
    _require_connected_case(fact)
    pub = wiener_decomposition_closed(fact)
    phi = euler_phi(fact)
    k = fact.k_total
    nontrivial = 2**k - 2
    orth = orthogonal_pair_count(k)
    other = nontrivial * (nontrivial - 1) // 2 - orth
    t1 = orth * phi * phi
    t2 = other * phi
    t3 = other * 2 * (phi * phi - phi)
    return WienerDecomposition(pub.s1, pub.s2, pub.s3, t1 + t2 + t3, t1, t2, t3)


def wiener_closed_corrected(fact: Factorization) -> Distance:
    if fact.n < 2:
        raise ValueError(f"n must be >= 2, got {fact.n}")
    if fact.n == 2:
        return 0
    if fact.k_total < 2:
        return INF
    return wiener_decomposition_corrected(fact).total


class ParityCase(str, Enum):
    ODD = "odd"
    M1 = "m1"
    M2 = "m2"
    M3 = "m3+"

    def self_inverse_count(self, k: int) -> int:
        """r for an n with k distinct primes in this 2-adic case."""
        if self is ParityCase.ODD:
            return 2**k
        k_odd = k - 1
        return 2**k_odd * {ParityCase.M1: 1, ParityCase.M2: 2, ParityCase.M3: 4}[self]


def coefficient_table(k: int, parity_case: ParityCase | str) -> tuple[int, int, int]:
    """(a, b, c) with W = (a*x**2 - b*x + c) / 2 and x = phi(n), published form."""
    case = ParityCase(parity_case)
    if not 2 <= k <= 8:
        raise ValueError(f"k must be in [2, 8], got {k}")
    K = 2**k
    r = case.self_inverse_count(k)
    return 2 * K * K - 5 * K + 5, K * K - K + 3, K * r


def coefficient_table_corrected(k: int, parity_case: ParityCase | str) -> tuple[int, int, int]:
    case = ParityCase(parity_case)
    if not 2 <= k <= 8:
        raise ValueError(f"k must be in [2, 8], got {k}")
    K = 2**k
    r = case.self_inverse_count(k)
    pairs = (K - 2) * (K - 3) // 2
    orth = orthogonal_pair_count(k)
    a = 3 + 6 * (K - 2) + 4 * pairs - 2 * orth
    b = 5 + 5 * (K - 2) + 2 * (pairs - orth)
    return a, b, K * r


def evaluate_coefficients(coeffs: tuple[int, int, int], x: int) -> Fraction:
    a, b, c = coeffs
    return Fraction(a * x * x - b * x + c, 2)


# ---------------------------------------------------------------- oracles


def bfs_distances(g: CleanGraph, source: int) -> list[Distance]:
    """Single-source BFS over the explicit adjacency lists."""
    V = g.num_vertices
    if not 0 <= source < V:
        raise IndexError(f"vertex index {source} out of range for {V} vertices")
    dist = [-1] * V
    dist[source] = 0
    queue = deque([source])
    indptr, indices = g.indptr, g.indices
    while queue:
        x = queue.popleft()
        dx = dist[x] + 1
        for y in indices[indptr[x] : indptr[x + 1]].tolist():
            if dist[y] < 0:
                dist[y] = dx
                queue.append(y)
    return [d if d >= 0 else INF for d in dist]


def distance_rows(g: CleanGraph, max_cells: int = 4_000_000):
    """Yield ``(start, rows)`` chunks of the all-pairs distance matrix.

    Rows are int64 with -1 for unreachable vertices. Each chunk runs a
    level-synchronous breadth-first search from all of its sources at once:
    the frontier matrix is pushed through the sparse adjacency matrix one
    level per step.
    """
    V = g.num_vertices
    if V == 0:
        return
    At = g.csr_matrix().T.tocsr().astype(np.float32)
    step = max(1, max_cells // V)
    for start in range(0, V, step):
        idx = np.arange(start, min(V, start + step))
        rows = np.full((idx.size, V), -1, dtype=np.int64)
        rows[np.arange(idx.size), idx] = 0
        frontier = np.zeros((idx.size, V), dtype=np.float32)
        frontier[np.arange(idx.size), idx] = 1.0
        level = 0
        while True:
            level += 1
            reached = np.asarray(At @ frontier.T).T > 0
            reached &= rows < 0
            if not reached.any():
                break
            rows[reached] = level
            frontier = reached.astype(np.float32)
        yield start, rows


def distance_matrix(g: CleanGraph) -> np.ndarray:
    V = g.num_vertices
    out = np.empty((V, V), dtype=np.int64)
    for start, rows in distance_rows(g):
        out[start : start + rows.shape[0]] = rows
    return out


def diameter(g: CleanGraph) -> Distance:
    best = 0
    for _, rows in distance_rows(g):
        if (rows < 0).any():
            return INF
        best = max(best, int(rows.max()))
    return best


def wiener_bruteforce(g: CleanGraph) -> Distance:
    total = 0
    for _, rows in distance_rows(g):
        if (rows < 0).any():
            return INF
        total += int(rows.sum())
    return total // 2


def wiener_decomposition_oracle(g: CleanGraph) -> WienerDecomposition:
    """BFS distances summed over the vertex-pair classes.

    Classes over unordered pairs: S1 both in the ``e = 1`` block; S2 both in
    one other block; S3 one in the ``e = 1`` block and one outside; S4 two
    different blocks other than ``e = 1``, split into T1 (e*f = 0),
    T2 (e*f != 0, u*v = 1) and T3 (the rest).
    """
    if g.include_zero_block:
        raise ValueError("decomposition is defined for Cl2 only")
    n = g.n
    V = g.num_vertices
    e = np.array([v.e for v in g.vertices], dtype=np.int64)
    u = np.array([v.u for v in g.vertices], dtype=np.int64)
    blk = np.array([g.block_of(i) for i in range(V)], dtype=np.int64)
    one = g.block_index(1)
    in_one = blk == one
    sums = dict.fromkeys(("s1", "s2", "s3", "t1", "t2", "t3"), 0)
    for start, rows in distance_rows(g):
        if (rows < 0).any():
            raise ValueError(f"Cl2(Z_{n}) is disconnected; decomposition undefined")
        for off in range(rows.shape[0]):
            i = start + off
            d = rows[off, i + 1 :]
            if d.size == 0:
                continue
            bj = blk[i + 1 :]
            same = bj == blk[i]
            if in_one[i]:
                sums["s1"] += int(d[same].sum())
                sums["s3"] += int(d[~same].sum())
                continue
            oj = in_one[i + 1 :]
            sums["s2"] += int(d[same].sum())
            sums["s3"] += int(d[oj].sum())
            cross = ~same & ~oj
            orth = (e[i] * e[i + 1 :]) % n == 0
            inv = (u[i] * u[i + 1 :]) % n == 1
            sums["t1"] += int(d[cross & orth].sum())
            sums["t2"] += int(d[cross & ~orth & inv].sum())
            sums["t3"] += int(d[cross & ~orth & ~inv].sum())
    t1, t2, t3 = sums["t1"], sums["t2"], sums["t3"]
    return WienerDecomposition(sums["s1"], sums["s2"], sums["s3"], t1 + t2 + t3, t1, t2, t3)
