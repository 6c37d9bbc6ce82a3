"""
Ordering terms so CNOTs cancel
==============================

With every CNOT aimed at one shared ancilla, neighbouring term circuits
cancel the CNOT pairs on qubits where both strings carry the same letter.
Ordering the terms is then a shortest-path problem under a CNOT distance.
"""

from termorder import assemble, build_distance_matrix, cancel_gates, cnot_count, load_fixture, make_plan
from termorder.tsp import solve_path_approx, solve_path_exact

for name in ("hpqrs8", "xz9"):
    h = load_fixture(name)
    m = build_distance_matrix(h.strings)
    print(f"\n{name}: {len(h)} strings of width {h.width}")
    print(m.to_text())

    exact = solve_path_exact(m)
    approx = solve_path_approx(m)
    print(f"exact path   {exact.order}  transitions {exact.transition_cost}  total {exact.total_cnots}")
    print(f"2-opt path   {approx.order}  transitions {approx.transition_cost}  total {approx.total_cnots}")

    # The circuit agrees with the cost model once the cancellation pass has run.
    for strategy in ("lex", "tsp"):
        c = assemble(make_plan(h, strategy), h, t=1.0, r=1, arch="star_ancilla")
        print(f"  {strategy:4s} CNOTs before {cnot_count(c):4d}  after {cnot_count(cancel_gates(c)):4d}")
