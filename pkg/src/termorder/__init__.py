"""Ordering and compiling Trotterized Pauli-sum evolution circuits.

Terms are grouped into commuting cliques, cliques are ordered to keep
commutator weight low, and terms inside a clique are ordered so that
neighbouring CNOTs cancel. A dense simulator checks the results.
"""

from .pauli import (
    Hamiltonian,
    HamiltonianParseError,
    PauliTerm,
    commutes,
    fixture_names,
    format_hamiltonian,
    hamming_weight,
    load_fixture,
    load_hamiltonian,
    parse_hamiltonian,
)
from .clique import (
    CliqueCover,
    CommutationGraph,
    build_graph,
    clique_cover,
    maximal_cliques,
    min_clique_cover,
    permutation_heuristic,
)
from .ordering import STRATEGIES, OrderingPlan, make_plan
from .tsp import DistanceMatrix, PathSolution, build_distance_matrix, cnot_distance, path_total_cnots, solve_path
from .circuit import Circuit, Gate, assemble, cancel_gates, cnot_count, synthesize_term
from .sim import (
    NoiseConfig,
    SimReport,
    circuit_unitary,
    exact_unitary,
    hellinger,
    normalized_fidelity,
    process_fidelity,
    run_noisy,
)

__version__ = "0.1.0"
