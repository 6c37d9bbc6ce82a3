"""Commutation graphs, minimum clique covers and clique ordering.

Terms are vertices; an edge joins two terms whose Pauli strings commute.
Each clique of a cover can be exponentiated exactly term by term, so the
cover fixes where Trotter error can arise, and the order of the cliques
decides how much of it does.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pauli import Hamiltonian, commutes

EXACT_COVER_CEILING = 30


@dataclass(frozen=True)
class CommutationGraph:
    size: int
    adjacency: tuple[frozenset, ...]

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.size) for j in self.adjacency[i] if i < j}

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def is_clique(self, members: Iterable[int]) -> bool:
        members = list(members)
        return all(self.has_edge(a, b) for a, b in itertools.combinations(members, 2))


def build_graph(h: Hamiltonian) -> CommutationGraph:
    """Commutation graph of ``h``; coefficients play no part."""
    strings = h.strings
    k = len(strings)
    adj = [set() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if commutes(strings[i], strings[j]):
                adj[i].add(j)
                adj[j].add(i)
    return CommutationGraph(k, tuple(frozenset(a) for a in adj))


def maximal_cliques(adjacency: Sequence[frozenset], vertices: Iterable[int] | None = None) -> list[frozenset]:
    """All maximal cliques of the subgraph induced by ``vertices`` (Bron-Kerbosch with pivoting)."""
    if vertices is None:
        vertices = range(len(adjacency))
    vertices = frozenset(vertices)
    found: list[frozenset] = []

    def expand(r: frozenset, p: set, x: set) -> None:
        if not p and not x:
            found.append(r)
            return
        # pivot with most neighbours in p, lowest index on ties
        pivot = min(p | x, key=lambda u: (-len(adjacency[u] & p), u))
        for v in sorted(p - adjacency[pivot]):
            nbrs = adjacency[v] & vertices
            expand(r | {v}, p & nbrs, x & nbrs)
            p.discard(v)
            x.add(v)

    expand(frozenset(), set(vertices), set())
    return found


def _clique_order_key(c: frozenset):
    return (-len(c), sorted(c))


@dataclass(frozen=True)
class CliqueCover:
    """Disjoint commuting cliques covering every term, as sorted index tuples."""

    cliques: tuple[tuple[int, ...], ...]
    mode: str = ""

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def __getitem__(self, i):
        return self.cliques[i]

    def clique_of(self) -> dict[int, int]:
        return {v: ci for ci, c in enumerate(self.cliques) for v in c}

    def validate(self, g: CommutationGraph) -> None:
        """Raise ``ValueError`` unless the cover partitions the graph into cliques."""
        seen: list[int] = [v for c in self.cliques for v in c]
        if sorted(seen) != list(range(g.size)):
            raise ValueError("cliques are not a partition of the vertex set")
        for c in self.cliques:
            if not g.is_clique(c):
                raise ValueError(f"clique {c} contains a non-commuting pair")


def _canonical(cliques: Iterable[Iterable[int]], mode: str) -> CliqueCover:
    cs = [tuple(sorted(c)) for c in cliques if c]
    cs.sort(key=lambda c: c[0])
    return CliqueCover(tuple(cs), mode)


def _independent_lower_bound(adjacency, vertices: set) -> int:
    # Pairwise non-commuting terms need distinct cliques.
    chosen: list[int] = []
    for v in sorted(vertices, key=lambda u: (len(adjacency[u] & vertices), u)):
        if all(v not in adjacency[c] for c in chosen):
            chosen.append(v)
    return len(chosen)


def _exact_cover(g: CommutationGraph) -> list[frozenset]:
    greedy = _greedy_cover(g)
    # Bound at len(greedy) + 1 so an optimum the same size as the greedy cover
    # is still reached in search order (largest cliques first).
    adj = g.adjacency
    best: list[frozenset] | None = None
    limit = len(greedy) + 1

    def run(uncovered: frozenset, chosen: list[frozenset]) -> None:
        nonlocal best, limit
        if not uncovered:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
                limit = len(chosen)
            return
        if len(chosen) + _independent_lower_bound(adj, set(uncovered)) >= limit:
            return
        # Branch on the vertex with the fewest maximal cliques in what is left.
        # Any optimal cover can be rewritten so the clique holding that vertex
        # is maximal in the remaining subgraph, so the search stays exhaustive.
        options = None
        for v in sorted(uncovered):
            local = maximal_cliques(adj, uncovered & (adj[v] | {v}))
            if options is None or len(local) < len(options[1]):
                options = (v, local)
                if len(local) == 1:
                    break
        for c in sorted(options[1], key=_clique_order_key):
            chosen.append(c)
            run(uncovered - c, chosen)
            chosen.pop()

    run(frozenset(range(g.size)), [])
    return best


def _greedy_cover(g: CommutationGraph) -> list[frozenset]:
    left = frozenset(range(g.size))
    cover = []
    while left:
        c = min(maximal_cliques(g.adjacency, left), key=_clique_order_key)
        cover.append(c)
        left = left - c
    return cover


def min_clique_cover(g: CommutationGraph, mode: str = "exact", ceiling: int = EXACT_COVER_CEILING) -> CliqueCover:
    """Partition the graph into commuting cliques.

    ``exact`` returns a minimum-size cover by branch and bound over maximal
    cliques and refuses graphs above ``ceiling`` vertices. ``greedy``
    repeatedly removes the largest maximal clique of what remains.
    """
    if mode == "greedy":
        cover = _canonical(_greedy_cover(g), "greedy")
    elif mode == "exact":
        if g.size > ceiling:
            raise ValueError(f"exact clique cover refused: {g.size} terms exceeds ceiling {ceiling}")
        cover = _canonical(_exact_cover(g), "exact")
    else:
        raise ValueError(f"unknown cover mode {mode!r}")
    cover.validate(g)
    return cover


def clique_cover(h: Hamiltonian, mode: str = "auto") -> CliqueCover:
    """Cover ``h``'s commutation graph; ``auto`` is exact up to the ceiling, greedy beyond."""
    g = build_graph(h)
    if mode == "auto":
        mode = "exact" if g.size <= EXACT_COVER_CEILING else "greedy"
    return min_clique_cover(g, mode)


# -- clique ordering -------------------------------------------------------


def pair_scores(h: Hamiltonian, cover: CliqueCover) -> list[list[float]]:
    """``S[a][b]`` = sum of ``|c_i c_j|`` over non-commuting pairs between cliques ``a`` and ``b``."""
    m = len(cover)
    strings, coeffs = h.strings, h.coefficients
    s = [[0.0] * m for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            vals = [
                abs(coeffs[i] * coeffs[j])
                for i in cover[a]
                for j in cover[b]
                if not commutes(strings[i], strings[j])
            ]
            s[a][b] = s[b][a] = math.fsum(vals)
    return s


def inter_clique_edges(g: CommutationGraph, cover: CliqueCover) -> list[list[int]]:
    m = len(cover)
    e = [[0] * m for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            n = sum(1 for i in cover[a] for j in cover[b] if g.has_edge(i, j))
            e[a][b] = e[b][a] = n
    return e


def permutation_score(order: Sequence[int], scores: Sequence[Sequence[float]]) -> float:
    # fsum keeps the value independent of summation order, so reversed
    # permutations tie exactly.
    return math.fsum(scores[a][b] for a, b in zip(order, order[1:]))


def candidate_permutations(edges: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Root-to-leaf paths of the greedily grown trees, one tree per root clique.

    Each root branches to every other clique; below that, a path keeps
    stepping to the unvisited clique sharing the most commutation edges with
    the current one (lowest index on ties). Paths never revisit a clique.
    """
    m = len(edges)
    out: list[tuple[int, ...]] = []
    seen = set()
    for root in range(m):
        firsts = [c for c in range(m) if c != root] or [None]
        for first in firsts:
            path = [root] if first is None else [root, first]
            left = set(range(m)) - set(path)
            while left:
                cur = path[-1]
                nxt = min(left, key=lambda c: (-edges[cur][c], c))
                path.append(nxt)
                left.remove(nxt)
            t = tuple(path)
            if t not in seen:
                seen.add(t)
                out.append(t)
    return out


@dataclass(frozen=True)
class CliquePermutation:
    order: tuple[int, ...]
    score: float
    candidates: int = 0
    scored: dict = field(default_factory=dict, compare=False, repr=False)


def permutation_heuristic(h: Hamiltonian, cover: CliqueCover, g: CommutationGraph | None = None) -> CliquePermutation:
    """Choose a clique order with a small commutator-magnitude proxy.

    Candidates come from :func:`candidate_permutations`; each is scored by the
    summed ``|c_i c_j|`` of non-commuting pairs between consecutive cliques,
    and the lowest score wins (lexicographically smallest order on ties).
    """
    if g is None:
        g = build_graph(h)
    scores = pair_scores(h, cover)
    cands = candidate_permutations(inter_clique_edges(g, cover))
    scored = {c: permutation_score(c, scores) for c in cands}
    best = min(cands, key=lambda c: (scored[c], c))
    return CliquePermutation(best, scored[best], len(cands), scored)


def cover_report(h: Hamiltonian, cover: CliqueCover, perm: CliquePermutation | None = None) -> str:
    """Plain-text listing of clique membership and, if given, the chosen order."""
    lines = [f"cliques {len(cover)} mode {cover.mode}"]
    for ci, c in enumerate(cover):
        members = " ".join(f"{h[i].string}({h[i].coefficient:+.6g})" for i in c)
        lines.append(f"clique {ci} size {len(c)}: {members}")
    if perm is not None:
        lines.append(f"order {' '.join(map(str, perm.order))} score {perm.score:.12g} candidates {perm.candidates}")
    return "\n".join(lines) + "\n"
