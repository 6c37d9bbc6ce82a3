"""
Fidelity of grouped versus random term orders
=============================================

H_C = IZ + ZI + ZZ + XX + YY splits into two commuting cliques. Keeping each
clique together makes a single Trotter step exact; interleaving them does not.
"""

import numpy as np

from termorder import assemble, circuit_unitary, exact_unitary, load_fixture, make_plan, process_fidelity
from termorder.ordering import order_random

h = load_fixture("hc")
grouped = make_plan(h, "max_commute_tsp")
shuffled = order_random(h, 3)
print("grouped order ", [h[i].string for i in grouped.term_order])
print("shuffled order", [h[i].string for i in shuffled.term_order])

print(f"{'t':>5} {'grouped':>10} {'shuffled':>10}")
for t in np.linspace(0, 5, 11):
    exact = exact_unitary(h, t)
    f_g = process_fidelity(exact, circuit_unitary(assemble(grouped, h, t, 1, "star_ancilla")))
    f_s = process_fidelity(exact, circuit_unitary(assemble(shuffled, h, t, 1, "star_ancilla")))
    print(f"{t:5.2f} {f_g:10.6f} {f_s:10.6f}")

# Sweep all 24 clique orders of the synthetic LiH fixture and compare the
# time-averaged fidelity with the heuristic's choice.
from termorder import bench

cfg = bench.load_config(None, {"hamiltonians": "lih_synthetic", "strategies": "mctsp", "r": 10,
                               "t_max": 1.0, "t_step": 0.02, "enumerate": True})
_, summary = bench.cmd_fidelity(cfg)
summary.sort(key=lambda row: -row["normalized_fidelity"])
print(f"\n{'clique order':>14} {'proxy':>8} {'avg F':>10}")
for row in summary:
    mark = "  <- heuristic" if row["heuristic_pick"] else ""
    print(f"{row['clique_order']:>14} {row['proxy_score']:8.4f} {row['normalized_fidelity']:10.7f}{mark}")
