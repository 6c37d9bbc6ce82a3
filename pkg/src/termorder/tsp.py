"""CNOT-distance path solving for ordering terms inside a commuting group.

With every CNOT targeting one shared ancilla, two consecutive term circuits
cancel the CNOT pair on each qubit where both strings carry the same
non-identity character. What survives between the two central rotations is
counted by :func:`cnot_distance`, which is a metric on Pauli strings. The
cheapest order is then a shortest Hamiltonian path under that metric.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import _check_widths, hamming_weight

log = logging.getLogger(__name__)

EXACT_CEILING = 16


def cnot_distance(a: str, b: str) -> int:
    """CNOTs left in the transition zone between ``a`` and ``b`` after cancellation.

    Each differing position costs 1, or 2 when neither character is ``I``.
    """
    _check_widths(a, b)
    total = 0
    for x, y in zip(a, b):
        if x != y:
            total += 1 if (x == "I" or y == "I") else 2
    return total


class DistanceMatrix:
    """Symmetric integer CNOT distances between ``k`` strings."""

    def __init__(self, values, strings: Sequence[str] | None = None, check: bool = True):
        d = np.asarray(values, dtype=np.int64)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
            raise ValueError(f"distance matrix must be square and non-empty, got shape {d.shape}")
        self.values = d
        self.values.setflags(write=False)
        self.strings = list(strings) if strings is not None else None
        if check:
            check_metric(d)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, ij):
        return int(self.values[ij])

    def path_cost(self, order: Sequence[int]) -> int:
        return int(sum(self.values[a, b] for a, b in zip(order, order[1:])))

    def to_text(self) -> str:
        lines = []
        if self.strings is not None:
            lines += [f"# {i} {s}" for i, s in enumerate(self.strings)]
        lines += [" ".join(str(int(x)) for x in row) for row in self.values]
        return "\n".join(lines) + "\n"


def check_metric(d: np.ndarray, sample_limit: int = 64, samples: int = 20000, seed: int = 0) -> None:
    """Raise ``ValueError`` if ``d`` violates zero diagonal, symmetry or the triangle inequality.

    The triangle check is exhaustive up to ``sample_limit`` points and sampled beyond.
    """
    d = np.asarray(d)
    if np.any(np.diag(d) != 0):
        raise ValueError("distance matrix has a non-zero diagonal")
    if np.any(d != d.T):
        raise ValueError("distance matrix is not symmetric")
    if np.any(d < 0):
        raise ValueError("distance matrix has negative entries")
    k = d.shape[0]
    if k <= sample_limit:
        # d[i,j] + d[j,l] >= d[i,l] for all i, j, l
        viol = d[:, :, None] + d[None, :, :] < d[:, None, :]
        if viol.any():
            i, j, l = map(int, np.argwhere(viol)[0])
            raise ValueError(f"triangle inequality violated at ({i}, {j}, {l})")
    else:
        rng = np.random.default_rng(seed)
        i, j, l = rng.integers(0, k, size=(3, samples))
        if np.any(d[i, j] + d[j, l] < d[i, l]):
            raise ValueError("triangle inequality violated on a sampled triple")


def build_distance_matrix(strings: Sequence[str]) -> DistanceMatrix:
    strings = list(strings)
    if not strings:
        raise ValueError("need at least one string")
    k = len(strings)
    d = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            d[i, j] = d[j, i] = cnot_distance(strings[i], strings[j])
    return DistanceMatrix(d, strings)


def path_total_cnots(order: Sequence[int], strings: Sequence[str]) -> int:
    """Post-cancellation CNOT count of the ancilla-star circuit for ``order``."""
    if not order:
        return 0
    seq = [strings[i] for i in order]
    inner = sum(cnot_distance(a, b) for a, b in zip(seq, seq[1:]))
    return hamming_weight(seq[0]) + inner + hamming_weight(seq[-1])


@dataclass(frozen=True)
class PathSolution:
    order: tuple[int, ...]
    transition_cost: int
    total_cnots: int | None = None
    method: str = ""

    def to_text(self) -> str:
        return (
            f"method {self.method}\norder {' '.join(map(str, self.order))}\n"
            f"transition_cost {self.transition_cost}\ntotal_cnots {self.total_cnots}\n"
        )


def _solution(m: DistanceMatrix, order, method: str) -> PathSolution:
    order = tuple(int(i) for i in order)
    if len(order) > 1 and order[0] > order[-1]:
        # canonical orientation; reversal has the same cost
        order = order[::-1]
    total = None
    if m.strings is not None:
        total = path_total_cnots(order, m.strings)
    return PathSolution(order, m.path_cost(order), total, method)


def solve_path_exact(m: DistanceMatrix, ceiling: int = EXACT_CEILING) -> PathSolution:
    """Shortest Hamiltonian path by Held-Karp dynamic programming.

    A virtual node joined to every string at zero cost turns the path into a
    cycle, so the DP starts anywhere for free and the cycle is cut at the
    virtual node. ``O(k^2 2^k)`` time, ``O(k 2^k)`` memory.
    """
    k = m.size
    if k > ceiling:
        raise ValueError(f"exact path solve refused: {k} strings exceeds ceiling {ceiling}")
    if k == 1:
        return _solution(m, [0], "exact")
    d = m.values
    full = 1 << k
    big = np.iinfo(np.int64).max // 4
    # best[mask, j]: cheapest path from the virtual node covering `mask`, ending at j
    best = np.full((full, k), big, dtype=np.int64)
    parent = np.full((full, k), -1, dtype=np.int64)
    for j in range(k):
        best[1 << j, j] = 0
    bits = [1 << j for j in range(k)]
    for mask in range(1, full):
        row = best[mask]
        if row.min() >= big:
            continue
        members = [j for j in range(k) if mask & bits[j]]
        # candidates[i, j] = row[i] + d[i, j], i restricted to members
        cand = row[members][:, None] + d[members, :]
        for j in range(k):
            if mask & bits[j]:
                continue
            col = cand[:, j]
            a = int(np.argmin(col))
            nxt = mask | bits[j]
            if col[a] < best[nxt, j]:
                best[nxt, j] = col[a]
                parent[nxt, j] = members[a]
    last_row = best[full - 1]
    end = int(np.argmin(last_row))
    order = []
    mask, j = full - 1, end
    while j >= 0:
        order.append(j)
        pj = int(parent[mask, j])
        mask ^= bits[j]
        j = pj
    order.reverse()
    return _solution(m, order, "exact")


def _two_opt_cycle(d: np.ndarray, tour: list[int]) -> list[int]:
    k = len(tour)
    improved = True
    while improved:
        improved = False
        for i in range(k - 1):
            for j in range(i + 2, k if i > 0 else k - 1):
                a, b = tour[i], tour[i + 1]
                c, e = tour[j], tour[(j + 1) % k]
                if d[a, c] + d[b, e] < d[a, b] + d[c, e]:
                    tour[i + 1 : j + 1] = reversed(tour[i + 1 : j + 1])
                    improved = True
    return tour


def _two_opt_path(d: np.ndarray, path: list[int]) -> list[int]:
    # Segment reversals on an open path, including ones touching either end.
    k = len(path)
    improved = True
    while improved:
        improved = False
        for i in range(k - 1):
            for j in range(i + 1, k):
                if j - i < 1 or (i == 0 and j == k - 1):
                    continue
                left = d[path[i - 1], path[i]] if i > 0 else 0
                right = d[path[j], path[j + 1]] if j < k - 1 else 0
                new_left = d[path[i - 1], path[j]] if i > 0 else 0
                new_right = d[path[i], path[j + 1]] if j < k - 1 else 0
                if new_left + new_right < left + right:
                    path[i : j + 1] = reversed(path[i : j + 1])
                    improved = True
    return path


def _nearest_neighbour(d: np.ndarray, start: int) -> list[int]:
    k = d.shape[0]
    tour = [start]
    left = set(range(k)) - {start}
    while left:
        cur = tour[-1]
        nxt = min(left, key=lambda j: (d[cur, j], j))
        tour.append(nxt)
        left.remove(nxt)
    return tour


def _christofides_cycle(d: np.ndarray) -> list[int]:
    import networkx as nx

    k = d.shape[0]
    g = nx.Graph()
    for i in range(k):
        for j in range(i + 1, k):
            g.add_edge(i, j, weight=int(d[i, j]))
    cycle = nx.approximation.christofides(g, weight="weight")
    return [int(v) for v in cycle[:-1]]


def _cut_most_expensive(d: np.ndarray, tour: list[int]) -> list[int]:
    k = len(tour)
    costs = [d[tour[i], tour[(i + 1) % k]] for i in range(k)]
    cut = int(np.argmax(costs))
    return tour[cut + 1 :] + tour[: cut + 1]


def solve_path_approx(m: DistanceMatrix, method: str = "2opt") -> PathSolution:
    """Approximate shortest Hamiltonian path.

    Builds a closed tour (nearest neighbour from every start, improved by
    2-opt; or Christofides with ``method="christofides"``), deletes its most
    expensive edge, then polishes the open path with 2-opt. Three or fewer
    strings are solved exactly.
    """
    k = m.size
    if k <= 3:
        sol = solve_path_exact(m)
        return PathSolution(sol.order, sol.transition_cost, sol.total_cnots, "approx")
    d = m.values
    if method == "christofides":
        tours = [_christofides_cycle(d)]
    elif method == "2opt":
        tours = [_two_opt_cycle(d, _nearest_neighbour(d, s)) for s in range(k)]
    else:
        raise ValueError(f"unknown approximate method {method!r}")
    best = None
    for tour in tours:
        path = _two_opt_path(d, _cut_most_expensive(d, list(tour)))
        cost = m.path_cost(path)
        if best is None or cost < best[0]:
            best = (cost, path)
    return _solution(m, best[1], f"approx-{method}")


def solve_path_brute(m: DistanceMatrix) -> PathSolution:
    """Enumerate every order; only for tiny inputs and cross-checks."""
    best = None
    for perm in itertools.permutations(range(m.size)):
        if m.size > 1 and perm[0] > perm[-1]:
            continue
        cost = m.path_cost(perm)
        if best is None or cost < best[0]:
            best = (cost, perm)
    return _solution(m, best[1], "brute")


def solve_path(strings: Sequence[str], mode: str = "exact", ceiling: int = EXACT_CEILING) -> PathSolution:
    """Order ``strings`` for cancellation; exact mode falls back to 2-opt above ``ceiling``."""
    m = build_distance_matrix(strings)
    if mode == "exact":
        if m.size > ceiling:
            log.info("%d strings exceed the exact ceiling %d; using 2-opt", m.size, ceiling)
            return solve_path_approx(m)
        return solve_path_exact(m, ceiling)
    if mode in ("approx", "2opt"):
        return solve_path_approx(m)
    if mode == "christofides":
        return solve_path_approx(m, "christofides")
    raise ValueError(f"unknown path mode {mode!r}")
