"""Term-ordering strategies.

Every strategy returns an :class:`OrderingPlan`: a permutation of term
indices plus, for the clique-structured strategies, the offsets at which
each commuting clique starts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tsp
from .clique import CliqueCover, CliquePermutation, build_graph, clique_cover, permutation_heuristic
from .pauli import Hamiltonian, commutes, lex_key

log = logging.getLogger(__name__)

RNG_NAME = "numpy.random.PCG64"

STRATEGIES = (
    "unordered",
    "lexicographic",
    "magnitude",
    "random",
    "deplete_groups",
    "tsp",
    "max_commute_lex",
    "max_commute_tsp",
    "max_commute_tsp_approx",
)

ALIASES = {
    "lex": "lexicographic",
    "mag": "magnitude",
    "depletegroups": "deplete_groups",
    "deplete": "deplete_groups",
    "mclex": "max_commute_lex",
    "mctsp": "max_commute_tsp",
    "max-commute-tsp": "max_commute_tsp",
    "max-commute-lex": "max_commute_lex",
    "mctsp_approx": "max_commute_tsp_approx",
}


@dataclass(frozen=True)
class OrderingPlan:
    strategy: str
    term_order: tuple[int, ...]
    clique_boundaries: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        order = tuple(int(i) for i in self.term_order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"term_order is not a permutation: {order}")
        object.__setattr__(self, "term_order", order)
        if self.clique_boundaries is not None:
            b = tuple(int(x) for x in self.clique_boundaries)
            if b[0] != 0 or b[-1] != len(order) or list(b) != sorted(set(b)):
                raise ValueError(f"bad clique boundaries {b} for {len(order)} terms")
            object.__setattr__(self, "clique_boundaries", b)

    def __len__(self) -> int:
        return len(self.term_order)

    def blocks(self) -> list[tuple[int, ...]]:
        """Term indices grouped by clique (one block when there are no boundaries)."""
        if self.clique_boundaries is None:
            return [self.term_order]
        b = self.clique_boundaries
        return [self.term_order[b[i] : b[i + 1]] for i in range(len(b) - 1)]

    def check_cliques(self, h: Hamiltonian) -> None:
        if self.clique_boundaries is None:
            return
        for block in self.blocks():
            for x in block:
                for y in block:
                    if not commutes(h[x].string, h[y].string):
                        raise ValueError(f"terms {x} and {y} share a block but do not commute")

    def to_text(self) -> str:
        tag = self.strategy if self.seed is None else f"{self.strategy}({self.seed})"
        lines = [f"strategy {tag}", "order " + " ".join(map(str, self.term_order))]
        if self.clique_boundaries is not None:
            lines.append("boundaries " + " ".join(map(str, self.clique_boundaries)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OrderingPlan":
        fields = dict(line.split(" ", 1) for line in text.strip().splitlines())
        tag = fields["strategy"]
        seed = None
        if tag.endswith(")"):
            tag, seed_text = tag[:-1].split("(")
            seed = int(seed_text)
        order = tuple(int(x) for x in fields["order"].split())
        bounds = fields.get("boundaries")
        bounds = tuple(int(x) for x in bounds.split()) if bounds else None
        return cls(tag, order, bounds, seed)


def order_unordered(h: Hamiltonian) -> OrderingPlan:
    return OrderingPlan("unordered", tuple(range(len(h))))


def order_lexicographic(h: Hamiltonian) -> OrderingPlan:
    """Sort strings position by position with X < Y < Z < I."""
    order = sorted(range(len(h)), key=lambda i: lex_key(h[i].string))
    return OrderingPlan("lexicographic", tuple(order))


def _magnitude_key(h: Hamiltonian, i: int):
    return (-abs(h[i].coefficient), lex_key(h[i].string))


def order_magnitude(h: Hamiltonian) -> OrderingPlan:
    """Largest ``|coefficient|`` first; ties go lexicographically."""
    order = sorted(range(len(h)), key=lambda i: _magnitude_key(h, i))
    return OrderingPlan("magnitude", tuple(order))


def order_random(h: Hamiltonian, seed: int) -> OrderingPlan:
    rng = np.random.Generator(np.random.PCG64(seed))
    return OrderingPlan("random", tuple(int(i) for i in rng.permutation(len(h))), seed=seed)


def order_deplete_groups(h: Hamiltonian, cover: CliqueCover) -> OrderingPlan:
    """Round-robin over cliques, taking each clique's largest remaining term per round.

    Within a round the picked terms are emitted largest ``|coefficient|``
    first, clique index breaking ties; emptied cliques are skipped.
    """
    queues = [sorted(c, key=lambda i: _magnitude_key(h, i)) for c in cover]
    order: list[int] = []
    while any(queues):
        picked = [(q.pop(0), ci) for ci, q in enumerate(queues) if q]
        picked.sort(key=lambda pc: (-abs(h[pc[0]].coefficient), pc[1]))
        order.extend(i for i, _ in picked)
    return OrderingPlan("deplete_groups", tuple(order))


def order_tsp(h: Hamiltonian, mode: str = "exact") -> OrderingPlan:
    """One cancellation-optimal path over all terms, ignoring commutation.

    Only sound when the Trotter error of an arbitrary order is acceptable;
    the clique-structured strategies keep the path inside commuting groups.
    """
    sol = tsp.solve_path(h.strings, mode)
    return OrderingPlan("tsp", sol.order)


def _intra_order(h: Hamiltonian, members: Sequence[int], intra: str) -> list[int]:
    members = list(members)
    if intra == "lex":
        return sorted(members, key=lambda i: lex_key(h[i].string))
    if len(members) == 1:
        return members
    strings = [h[i].string for i in members]
    if intra == "tsp_exact":
        sol = tsp.solve_path(strings, "exact")
    elif intra == "tsp_approx":
        sol = tsp.solve_path(strings, "approx")
    else:
        raise ValueError(f"unknown intra-clique method {intra!r}")
    return [members[j] for j in sol.order]


def order_max_commute(
    h: Hamiltonian,
    cover: CliqueCover,
    perm: CliquePermutation | Sequence[int] | None = None,
    intra: str = "tsp_exact",
) -> OrderingPlan:
    """Lay cliques out in ``perm`` order and order terms inside each clique.

    ``intra`` is ``tsp_exact`` (falls back to 2-opt above the exact ceiling),
    ``tsp_approx`` or ``lex``.
    """
    if perm is None:
        clique_order = tuple(range(len(cover)))
    elif isinstance(perm, CliquePermutation):
        clique_order = perm.order
    else:
        clique_order = tuple(perm)
    if sorted(clique_order) != list(range(len(cover))):
        raise ValueError("clique order is not a permutation of the cover")
    order: list[int] = []
    bounds = [0]
    for ci in clique_order:
        order.extend(_intra_order(h, cover[ci], intra))
        bounds.append(len(order))
    tag = {"lex": "max_commute_lex", "tsp_exact": "max_commute_tsp", "tsp_approx": "max_commute_tsp_approx"}[intra]
    plan = OrderingPlan(tag, tuple(order), tuple(bounds))
    plan.check_cliques(h)
    return plan


def canonical_strategy(name: str) -> str:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key.startswith("random"):
        return "random"
    if key not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")
    return key


def make_plan(
    h: Hamiltonian,
    strategy: str,
    *,
    seed: int = 0,
    cover: CliqueCover | None = None,
    cover_mode: str = "auto",
    use_heuristic: bool = True,
) -> OrderingPlan:
    """Build a plan by strategy name (aliases such as ``lex`` and ``mctsp`` accepted)."""
    name = canonical_strategy(strategy)
    if name == "unordered":
        return order_unordered(h)
    if name == "lexicographic":
        return order_lexicographic(h)
    if name == "magnitude":
        return order_magnitude(h)
    if name == "random":
        return order_random(h, seed)
    if name == "tsp":
        return order_tsp(h)
    if cover is None:
        cover = clique_cover(h, cover_mode)
    if name == "deplete_groups":
        return order_deplete_groups(h, cover)
    perm = permutation_heuristic(h, cover, build_graph(h)) if use_heuristic else None
    intra = {"max_commute_lex": "lex", "max_commute_tsp": "tsp_exact", "max_commute_tsp_approx": "tsp_approx"}[name]
    return order_max_commute(h, cover, perm, intra)
