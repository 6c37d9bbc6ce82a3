import itertools

import pytest

from termorder.clique import clique_cover
from termorder.ordering import (
    STRATEGIES,
    OrderingPlan,
    canonical_strategy,
    make_plan,
    order_deplete_groups,
    order_lexicographic,
    order_magnitude,
    order_max_commute,
    order_random,
)
from termorder.pauli import load_fixture, parse_hamiltonian
from termorder.tsp import path_total_cnots


def test_lexicographic():
    h = parse_hamiltonian("1 IZ\n1 XI\n1 ZX\n1 YY\n1 XX")
    plan = order_lexicographic(h)
    assert [h[i].string for i in plan.term_order] == ["XX", "XI", "YY", "ZX", "IZ"]


def test_magnitude_ties_go_lexicographic():
    h = parse_hamiltonian("0.5 IZ\n-2 ZI\n0.5 XX\n1 YY")
    plan = order_magnitude(h)
    assert [h[i].string for i in plan.term_order] == ["ZI", "YY", "XX", "IZ"]


def test_random_is_seeded():
    h = load_fixture("lih_synthetic")
    assert order_random(h, 5) == order_random(h, 5)
    assert order_random(h, 5).term_order != order_random(h, 6).term_order


def test_random_reaches_all_permutations():
    h = parse_hamiltonian("1 ZI\n1 IZ\n1 XX\n1 YY")
    seen = {order_random(h, s).term_order for s in range(1000)}
    assert seen == set(itertools.permutations(range(4)))


def test_deplete_groups_round_robin():
    # cliques: {ZI, IZ, ZZ} (|c| 3, 2, 1) and {XX, YY} (|c| 2.5, 0.5)
    h = parse_hamiltonian("3 ZI\n2 IZ\n1 ZZ\n2.5 XX\n0.5 YY")
    cover = clique_cover(h)
    plan = order_deplete_groups(h, cover)
    assert [h[i].string for i in plan.term_order] == ["ZI", "XX", "IZ", "YY", "ZZ"]


def test_max_commute_blocks_commute():
    for name in ("h2", "lih_synthetic", "xz9"):
        h = load_fixture(name)
        for strategy in ("max_commute_lex", "max_commute_tsp", "max_commute_tsp_approx"):
            plan = make_plan(h, strategy)
            plan.check_cliques(h)
            assert len(plan.blocks()) == len(clique_cover(h))


def test_max_commute_tsp_minimises_inside_cliques():
    h = load_fixture("lih_synthetic")
    cover = clique_cover(h)
    plan = order_max_commute(h, cover, None, "tsp_exact")
    for block in plan.blocks():
        strings = [h[i].string for i in block]
        inner = path_total_cnots(range(len(block)), strings)
        if len(block) <= 6:
            best = min(path_total_cnots(p, strings) for p in itertools.permutations(range(len(block))))
            assert inner == best


def test_clique_order_respected():
    h = load_fixture("lih_synthetic")
    cover = clique_cover(h)
    plan = order_max_commute(h, cover, (3, 1, 0, 2), "lex")
    assert [set(b) for b in plan.blocks()] == [set(cover[c]) for c in (3, 1, 0, 2)]
    with pytest.raises(ValueError, match="permutation"):
        order_max_commute(h, cover, (0, 1, 1, 2))


def test_global_tsp_ignores_cliques():
    h = load_fixture("xz9")
    plan = make_plan(h, "tsp")
    assert plan.clique_boundaries is None
    assert path_total_cnots(plan.term_order, h.strings) == 62
    assert path_total_cnots(make_plan(h, "mctsp").term_order, h.strings) > 62


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_single_term_identity_permutation(strategy):
    h = parse_hamiltonian("0.7 XZY")
    assert make_plan(h, strategy).term_order == (0,)


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_every_strategy_is_a_permutation(strategy):
    h = load_fixture("h2")
    plan = make_plan(h, strategy, seed=11)
    assert sorted(plan.term_order) == list(range(len(h)))


def test_aliases():
    assert canonical_strategy("lex") == "lexicographic"
    assert canonical_strategy("MCTSP") == "max_commute_tsp"
    assert canonical_strategy("max-commute-tsp") == "max_commute_tsp"
    assert canonical_strategy("tsp") == "tsp"
    with pytest.raises(ValueError, match="unknown strategy"):
        canonical_strategy("alphabetical")


def test_plan_text_round_trip():
    h = load_fixture("lih_synthetic")
    for plan in (make_plan(h, "mctsp"), order_random(h, 42), make_plan(h, "lex")):
        assert OrderingPlan.from_text(plan.to_text()) == plan


def test_plan_validation():
    with pytest.raises(ValueError, match="permutation"):
        OrderingPlan("x", (0, 0, 1))
    with pytest.raises(ValueError, match="boundaries"):
        OrderingPlan("x", (0, 1, 2), (0, 2))


def test_check_cliques_catches_bad_block():
    h = parse_hamiltonian("1 XI\n1 ZI")
    with pytest.raises(ValueError, match="do not commute"):
        OrderingPlan("x", (0, 1), (0, 2)).check_cliques(h)
