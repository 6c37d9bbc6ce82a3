"""
Grouping Pauli terms into commuting cliques
===========================================

Load the 14-term H2 Hamiltonian, build its commutation graph and split it
into as few mutually commuting cliques as possible.
"""

from termorder import build_graph, clique_cover, load_fixture
from termorder.clique import cover_report, permutation_heuristic

h = load_fixture("h2")
print(f"{len(h)} terms on {h.width} qubits")

# Vertices are terms, edges join commuting pairs.
g = build_graph(h)
print(f"{len(g.edges)} commuting pairs out of {len(h) * (len(h) - 1) // 2}")

# The exact cover is a branch and bound over maximal cliques.
cover = clique_cover(h, "exact")
print(cover_report(h, cover, permutation_heuristic(h, cover)))

# A bigger, synthetic example with four cliques. The heuristic picks the
# clique order with the smallest summed |c_i c_j| between neighbours.
lih = load_fixture("lih_synthetic")
lcover = clique_cover(lih)
perm = permutation_heuristic(lih, lcover)
print(f"lih_synthetic: {len(lcover)} cliques, sizes {[len(c) for c in lcover]}")
print(f"heuristic tried {perm.candidates} clique orders, picked {perm.order} (score {perm.score:.4g})")
for order, score in sorted(perm.scored.items(), key=lambda kv: kv[1])[:5]:
    print("  ", order, f"{score:.4g}")
