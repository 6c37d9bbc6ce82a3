import itertools
import time

import networkx as nx
import numpy as np
import pytest

from termorder.clique import (
    CliqueCover,
    CommutationGraph,
    build_graph,
    candidate_permutations,
    clique_cover,
    cover_report,
    inter_clique_edges,
    maximal_cliques,
    min_clique_cover,
    pair_scores,
    permutation_heuristic,
    permutation_score,
)
from termorder.pauli import load_fixture, parse_hamiltonian

from conftest import random_hamiltonian


def _random_graph(rng, k, density):
    adj = [set() for _ in range(k)]
    for i, j in itertools.combinations(range(k), 2):
        if rng.random() < density:
            adj[i].add(j)
            adj[j].add(i)
    return CommutationGraph(k, tuple(frozenset(a) for a in adj))


def _to_nx(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.size))
    out.add_edges_from(g.edges)
    return out


def _min_cover_size_brute(g):
    # A clique cover of g is a proper colouring of its complement.
    comp = [set(range(g.size)) - g.adjacency[v] - {v} for v in range(g.size)]

    def colourable(m):
        colour = [-1] * g.size

        def place(v):
            if v == g.size:
                return True
            for c in range(m):
                if all(colour[u] != c for u in comp[v]):
                    colour[v] = c
                    if place(v + 1):
                        return True
            colour[v] = -1
            return False

        return place(0)

    return next(m for m in range(1, g.size + 1) if colourable(m))


def test_bron_kerbosch_matches_networkx(rng):
    for _ in range(40):
        g = _random_graph(rng, int(rng.integers(1, 14)), rng.uniform(0.2, 0.9))
        ours = {frozenset(c) for c in maximal_cliques(g.adjacency)}
        theirs = {frozenset(c) for c in nx.find_cliques(_to_nx(g))}
        assert ours == theirs


def test_h2_two_cliques():
    h = load_fixture("h2")
    start = time.perf_counter()
    cover = clique_cover(h, "exact")
    assert time.perf_counter() - start < 1.0
    assert len(cover) == 2
    groups = {frozenset(h[i].string for i in c) for c in cover}
    z_family = frozenset(s for s in h.strings if set(s) <= {"Z", "I"})
    xy_family = frozenset(s for s in h.strings if set(s) <= {"X", "Y"})
    assert groups == {z_family, xy_family}
    assert len(z_family) == 10 and len(xy_family) == 4


def test_hc_cover():
    cover = clique_cover(load_fixture("hc"))
    assert cover.cliques == ((0, 1, 2), (3, 4))


def test_lih_minimum_is_four():
    h = load_fixture("lih_synthetic")
    g = build_graph(h)
    cover = min_clique_cover(g, "exact")
    assert len(cover) == 4
    assert _min_cover_size_brute(g) == 4


def test_exact_is_minimum_and_never_worse_than_greedy(rng):
    for _ in range(40):
        g = _random_graph(rng, int(rng.integers(1, 11)), rng.uniform(0.2, 0.8))
        exact = min_clique_cover(g, "exact")
        greedy = min_clique_cover(g, "greedy")
        assert len(exact) <= len(greedy)
        assert len(exact) == _min_cover_size_brute(g)


def test_cover_is_partition_of_cliques(rng):
    for _ in range(20):
        h = random_hamiltonian(rng, 3, int(rng.integers(2, 12)))
        g = build_graph(h)
        cover = clique_cover(h)
        cover.validate(g)
        assert [c[0] for c in cover] == sorted(c[0] for c in cover)


def test_validate_rejects_bad_cover():
    g = build_graph(parse_hamiltonian("1 XI\n1 ZI\n1 IZ"))
    with pytest.raises(ValueError, match="non-commuting"):
        CliqueCover(((0, 1), (2,))).validate(g)
    with pytest.raises(ValueError, match="partition"):
        CliqueCover(((0,), (2,))).validate(g)


def test_exact_refuses_large_graphs():
    g = CommutationGraph(31, tuple(frozenset() for _ in range(31)))
    with pytest.raises(ValueError, match="ceiling"):
        min_clique_cover(g, "exact")


def test_auto_falls_back_to_greedy(rng):
    h = random_hamiltonian(rng, 5, 35)
    assert clique_cover(h, "auto").mode == "greedy"


def test_pair_scores_symmetric():
    h = load_fixture("lih_synthetic")
    cover = clique_cover(h)
    s = pair_scores(h, cover)
    m = len(cover)
    assert all(s[a][b] == s[b][a] for a in range(m) for b in range(m))
    assert all(s[a][a] == 0 for a in range(m))


def test_score_invariant_under_reversal():
    h = load_fixture("lih_synthetic")
    s = pair_scores(h, clique_cover(h))
    for perm in itertools.permutations(range(4)):
        assert permutation_score(perm, s) == permutation_score(perm[::-1], s)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_candidate_count_bound(m):
    edges = [[(a * 7 + b * 3) % 5 if a != b else 0 for b in range(m)] for a in range(m)]
    edges = [[max(edges[a][b], edges[b][a]) for b in range(m)] for a in range(m)]
    cands = candidate_permutations(edges)
    assert len(cands) <= m * m + m
    for c in cands:
        assert sorted(c) == list(range(m))


def test_heuristic_on_lih():
    h = load_fixture("lih_synthetic")
    cover = clique_cover(h)
    s = pair_scores(h, cover)
    perm = permutation_heuristic(h, cover)
    all_scores = [permutation_score(p, s) for p in itertools.permutations(range(len(cover)))]
    assert perm.score <= np.mean(all_scores)
    assert perm.score == min(perm.scored.values())
    assert perm.candidates <= len(cover) ** 2 + len(cover)


def test_heuristic_prefers_low_commutator_neighbours():
    # Three mutually anticommuting singletons; the small X term belongs in the middle.
    h = parse_hamiltonian("1.0 Z\n0.01 X\n5.0 Y")
    cover = clique_cover(h)
    assert len(cover) == 3
    perm = permutation_heuristic(h, cover)
    s = pair_scores(h, cover)
    assert perm.score == min(permutation_score(p, s) for p in itertools.permutations(range(len(cover))))
    assert perm.order[1] == 1


def test_inter_clique_edges_counts():
    h = load_fixture("hc")
    g = build_graph(h)
    cover = clique_cover(h)
    e = inter_clique_edges(g, cover)
    expected = sum(1 for i in cover[0] for j in cover[1] if g.has_edge(i, j))
    assert e[0][1] == e[1][0] == expected


def test_cover_report_lists_cliques():
    h = load_fixture("h2")
    cover = clique_cover(h)
    text = cover_report(h, cover, permutation_heuristic(h, cover))
    assert text.startswith("cliques 2 mode exact")
    assert text.count("clique ") == 2
    assert "order" in text
