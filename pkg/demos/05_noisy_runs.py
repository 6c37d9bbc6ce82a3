"""
Shot sampling under depolarizing noise
======================================

Each CNOT is followed, with probability p, by a random two-qubit Pauli on
its qubits. The sampled outcome distribution is compared with the exact one
by Hellinger distance.
"""

from termorder import bench, make_plan
from termorder.sim import distribution_csv, run_noisy, NoiseConfig

cfg = bench.load_config(None, {
    "hamiltonians": "h2,lih_synthetic",
    "strategies": "lex,mctsp",
    "r": 4,
    "shots": 2000,
    "initial_states": "entangled_pair,equal_superposition",
})
rows = bench.cmd_noisy(cfg)
print(bench.rows_to_csv(rows, bench.NOISY_COLUMNS))

for tag in cfg.initial_states:
    means = bench.mean_infidelity_by_p(rows, tag)
    print(tag, " ".join(f"p={p:g}: {v:.3f}" for p, v in means.items()))

# Fewer CNOTs after cancellation means fewer places for an error to land.
h = bench.resolve_hamiltonian("h2")[1]
for strategy in ("lex", "tsp"):
    plan = make_plan(h, strategy)
    _, circ = bench.compile_circuit(h, plan, cfg)
    psi0 = bench.initial_state("entangled_pair", h.width)
    counts = run_noisy(circ, psi0, NoiseConfig(0.02, 2000, 0))
    print(f"\n{strategy}: {sum(g.name == 'CNOT' for g in circ.gates)} CNOTs")
    print(distribution_csv(counts, h.width))
