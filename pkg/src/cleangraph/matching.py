"""Maximum matchings of Cl2(Z_n).

``maximum_matching`` is a general-graph oracle (Edmonds' augmenting paths
with blossom contraction). ``construct_perfect_matching`` builds an explicit
perfect matching from the block structure alone, and ``verify_matching``
checks any candidate against the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .graph import CleanGraph, SizeLimitError, adjacent
from .ring import Factorization, euler_phi

DEFAULT_MATCHING_CAP = 5_000


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, pairs) -> Matching:
        return cls(frozenset((min(i, j), max(i, j)) for i, j in pairs))

    @property
    def size(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


class MatchingCheck(NamedTuple):
    valid: bool
    perfect: bool


def _greedy(adj: Sequence[Sequence[int]], mate: list[int]) -> None:
    # lowest degree first leaves fewer vertices for the augmenting phase
    order = sorted(range(len(adj)), key=lambda v: len(adj[v]))
    for v in order:
        if mate[v] != -1:
            continue
        for w in adj[v]:
            if mate[w] == -1 and w != v:
                mate[v], mate[w] = w, v
                break


def max_cardinality_matching(adj: Sequence[Sequence[int]], greedy: bool = True) -> list[int]:
    """Edmonds' blossom algorithm on adjacency lists.

    Returns ``mate`` with ``mate[v]`` the partner of ``v`` or -1. ``greedy``
    seeds the search with a maximal matching; the result size is the same.
    """
    V = len(adj)
    mate = [-1] * V
    if greedy:
        _greedy(adj, mate)
    parent = [-1] * V
    base = list(range(V))
    used = [False] * V

    def lca(a: int, b: int) -> int:
        seen = [False] * V
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_path(root: int) -> int:
        for i in range(V):
            used[i] = False
            parent[i] = -1
            base[i] = i
        used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    # odd cycle: contract the blossom onto its base
                    cur = lca(v, to)
                    blossom = [False] * V
                    mark_path(v, cur, to, blossom)
                    mark_path(to, cur, v, blossom)
                    for i in range(V):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        return to
                    used[mate[to]] = True
                    queue.append(mate[to])
        return -1

    for root in range(V):
        if mate[root] != -1 or not adj[root]:
            continue
        v = find_path(root)
        while v != -1:
            pv = parent[v]
            nxt = mate[pv]
            mate[v], mate[pv] = pv, v
            v = nxt
    return mate


def maximum_matching(g: CleanGraph, cap: int = DEFAULT_MATCHING_CAP) -> Matching:
    if g.num_vertices > cap:
        raise SizeLimitError(
            f"maximum matching on {g.num_vertices} vertices exceeds the cap of {cap}"
        )
    mate = max_cardinality_matching(g.adjacency_lists())
    return Matching.from_pairs((v, w) for v, w in enumerate(mate) if w > v)


def matching_number_closed(fact: Factorization) -> int:
    """phi(n) * (2**k - 1) / 2, i.e. half the vertex count."""
    if fact.k_total < 2:
        raise ValueError(
            f"matching number formula needs at least two distinct primes, n={fact.n} has {fact.k_total}"
        )
    total = euler_phi(fact) * (2**fact.k_total - 1)
    assert total % 2 == 0
    return total // 2


def construct_perfect_matching(g: CleanGraph) -> Matching:
    """Deterministic perfect matching of Cl2(Z_n) for k >= 2.

    1. Inside every block pair each non-self-inverse unit with its inverse.
    2. With e the smallest nontrivial idempotent, pair the self-inverse units
       ascending as (u, w) and match (e, u) with (1 - e, w).
    3. For each self-inverse u the vertices (f, u) left over form a clique
       (u*u = 1); match them consecutively by ascending idempotent.
    """
    if g.include_zero_block:
        raise ValueError("construction is defined for Cl2 only")
    ring = g.ring
    if ring.fact.k_total < 2:
        raise ValueError(
            f"Cl2(Z_{g.n}) has no nontrivial idempotent; (1,1) is isolated and no perfect matching exists"
        )
    n = g.n
    idx = g.index_of
    pairs: list[tuple[int, int]] = []

    for e in g.block_idempotents:
        for u in ring.non_self_inverse_units:
            v = ring.inverse(u)
            if u < v:
                pairs.append((idx((e, u)), idx((e, v))))

    star = min(e for e in g.block_idempotents if e != 1)
    comp = (1 - star) % n
    sinv = list(ring.self_inverse_units)
    used: dict[int, int] = {}
    for a, b in zip(sinv[0::2], sinv[1::2]):
        pairs.append((idx((star, a)), idx((comp, b))))
        used[a], used[b] = star, comp

    for u in sinv:
        rest = [e for e in g.block_idempotents if e != used[u]]
        for e, f in zip(rest[0::2], rest[1::2]):
            pairs.append((idx((e, u)), idx((f, u))))

    return Matching.from_pairs(pairs)


def verify_matching(g: CleanGraph, m: Matching) -> MatchingCheck:
    seen: set[int] = set()
    for i, j in m.pairs:
        if i == j or i in seen or j in seen:
            return MatchingCheck(False, False)
        try:
            if not adjacent(g, i, j):
                return MatchingCheck(False, False)
        except IndexError:
            return MatchingCheck(False, False)
        seen.update((i, j))
    return MatchingCheck(True, 2 * m.size == g.num_vertices)


def matching_csv(g: CleanGraph, m: Matching) -> str:
    lines = ["e1,u1,e2,u2"]
    for i, j in m.sorted_pairs():
        a, b = g.vertices[i], g.vertices[j]
        lines.append(f"{a.e},{a.u},{b.e},{b.u}")
    return "\n".join(lines) + "\n"
