"""Dense simulation: exact evolution, circuit unitaries, noisy sampling, metrics.

Basis index ``i`` of an ``n``-qubit register has qubit ``q`` as bit ``q``
(qubit 0 least significant), which matches :mod:`termorder.pauli`: the
matrix of a string is the Kronecker product of its characters left to right.
Bitstrings are printed most significant qubit first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from .circuit import Circuit, Gate
from .pauli import Hamiltonian

DENSE_CEILING = 11

RNG_NAME = "numpy.random.PCG64"

_SQ2 = 1 / math.sqrt(2)
PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
FIXED_GATES = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "X": PAULI["X"],
}


def gate_matrix(g: Gate) -> np.ndarray:
    if g.name == "RZ":
        return np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])
    if g.name == "CNOT":
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    return FIXED_GATES[g.name]


def pauli_matrix(p: str) -> np.ndarray:
    return reduce(np.kron, (PAULI[c] for c in p))


def hamiltonian_matrix(h: Hamiltonian) -> np.ndarray:
    if h.width > DENSE_CEILING:
        raise ValueError(f"dense simulation refused: {h.width} qubits exceeds ceiling {DENSE_CEILING}")
    dim = 2**h.width
    m = np.zeros((dim, dim), dtype=complex)
    for term in h:
        m += term.coefficient * pauli_matrix(term.string)
    return m


def expm_hermitian(a: np.ndarray, scale: complex) -> np.ndarray:
    """``exp(scale * a)`` for Hermitian ``a`` through its eigendecomposition."""
    w, v = np.linalg.eigh(a)
    return (v * np.exp(scale * w)) @ v.conj().T


def exact_unitary(h: Hamiltonian, t: float) -> np.ndarray:
    """``exp(-i H t)``."""
    return expm_hermitian(hamiltonian_matrix(h), -1j * t)


def pauli_exponential(p: str, angle: float) -> np.ndarray:
    """``exp(-i * angle * P)`` in closed form (``P**2 = I``)."""
    dim = 2 ** len(p)
    return math.cos(angle) * np.eye(dim) - 1j * math.sin(angle) * pauli_matrix(p)


def trotter_unitary(h: Hamiltonian, order: Sequence[int], t: float, r: int = 1) -> np.ndarray:
    """Product formula built from closed-form term exponentials, no circuits involved."""
    dt = t / r
    step = np.eye(2**h.width, dtype=complex)
    for i in order:
        # later terms act later: left-multiply
        step = pauli_exponential(h[i].string, h[i].coefficient * dt) @ step
    return np.linalg.matrix_power(step, r)


def check_unitary(u: np.ndarray, tol: float = 1e-9) -> None:
    err = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    if err > tol:
        raise ValueError(f"matrix is not unitary (max deviation {err:.3g})")


# -- gate application on batched state tensors --------------------------------
# Arrays have shape (2,)*n + (batch,); qubit q lives on axis n - 1 - q.


def _axis(n: int, q: int) -> int:
    return n - 1 - q


def _apply_single(psi: np.ndarray, n: int, q: int, m: np.ndarray) -> np.ndarray:
    ax = _axis(n, q)
    lo = [slice(None)] * psi.ndim
    hi = [slice(None)] * psi.ndim
    lo[ax], hi[ax] = 0, 1
    a, b = psi[tuple(lo)], psi[tuple(hi)]
    out = np.empty_like(psi)
    out[tuple(lo)] = m[0, 0] * a + m[0, 1] * b
    out[tuple(hi)] = m[1, 0] * a + m[1, 1] * b
    return out


def _apply_cnot(psi: np.ndarray, n: int, c: int, t: int) -> np.ndarray:
    ac, at = _axis(n, c), _axis(n, t)
    out = psi.copy()
    idx = [slice(None)] * psi.ndim
    idx[ac] = 1
    sub = psi[tuple(idx)]
    out[tuple(idx)] = np.flip(sub, axis=at if at < ac else at - 1)
    return out


def apply_gate(psi: np.ndarray, n: int, g: Gate) -> np.ndarray:
    if g.name == "CNOT":
        return _apply_cnot(psi, n, *g.qubits)
    return _apply_single(psi, n, g.qubits[0], gate_matrix(g))


def _run(psi: np.ndarray, n: int, gates: Sequence[Gate]) -> np.ndarray:
    for g in gates:
        psi = apply_gate(psi, n, g)
    return psi


def simulate_statevector(c: Circuit, psi0: np.ndarray | None = None) -> np.ndarray:
    """Final state of the full register (ancilla included) from ``psi0`` on the data qubits."""
    n = c.width
    data = embed_data_state(c, psi0)
    out = _run(data.reshape((2,) * n + (1,)), n, c.gates)
    return out.reshape(-1)


def embed_data_state(c: Circuit, psi0: np.ndarray | None) -> np.ndarray:
    nd = c.num_data
    if psi0 is None:
        psi0 = np.zeros(2**nd, dtype=complex)
        psi0[0] = 1.0
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (2**nd,):
        raise ValueError(f"initial state has shape {psi0.shape}, expected ({2**nd},)")
    if c.ancilla is None:
        return psi0
    if c.ancilla != c.width - 1:
        raise ValueError("the ancilla must be the highest-index qubit")
    # ancilla is the most significant bit: |0>_anc (x) psi is psi padded with zeros
    return np.concatenate([psi0, np.zeros_like(psi0)])


def circuit_unitary(c: Circuit, tol: float = 1e-9) -> np.ndarray:
    """Unitary of ``c`` on its data qubits.

    With an ancilla, the block with the ancilla in ``|0>`` on input and
    output is returned; a non-unitary block means the ancilla leaked.
    """
    n = c.width
    if c.num_data > DENSE_CEILING:
        raise ValueError(f"dense simulation refused: {c.num_data} qubits exceeds ceiling {DENSE_CEILING}")
    dim_d = 2**c.num_data
    cols = np.zeros((2**n, dim_d), dtype=complex)
    cols[np.arange(dim_d), np.arange(dim_d)] = 1.0
    out = _run(cols.reshape((2,) * n + (dim_d,)), n, c.gates).reshape(2**n, dim_d)
    u = out[:dim_d, :]
    try:
        check_unitary(u, tol)
    except ValueError as exc:
        raise ValueError(f"circuit block is not unitary; ancilla not returned to |0>? ({exc})") from None
    return u


# -- fidelity metrics -------------------------------------------------------


def process_fidelity(exact: np.ndarray, approx: np.ndarray) -> float:
    """``|Tr(exact approx^dagger)| / dim``; insensitive to global phase."""
    if exact.shape != approx.shape:
        raise ValueError(f"dimension mismatch {exact.shape} vs {approx.shape}")
    f = abs(np.trace(exact @ approx.conj().T)) / exact.shape[0]
    return float(min(f, 1.0))


def normalized_fidelity(samples: Sequence[tuple[float, float]], t_prime: float | None = None) -> float:
    """Time average of ``F(t)`` over ``[0, t']`` by the trapezoid rule.

    ``samples`` are ``(t, F)`` pairs sorted by ``t`` starting at 0; ``t'``
    defaults to the last sample time and is interpolated if between samples.
    """
    if not samples:
        raise ValueError("no fidelity samples")
    ts = np.array([s[0] for s in samples], dtype=float)
    fs = np.array([s[1] for s in samples], dtype=float)
    if np.any(np.diff(ts) < 0):
        raise ValueError("samples must be sorted by time")
    if t_prime is None:
        t_prime = ts[-1]
    if t_prime > ts[-1] + 1e-12:
        raise ValueError("t' lies beyond the last sample")
    if t_prime <= ts[0]:
        return float(fs[0])
    keep = ts < t_prime
    t_in = np.append(ts[keep], t_prime)
    f_in = np.append(fs[keep], np.interp(t_prime, ts, fs))
    area = np.sum(np.diff(t_in) * (f_in[1:] + f_in[:-1]) / 2)
    return float(area / (t_prime - t_in[0]))


def operator_norm_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b, 2))


# -- noisy sampling ---------------------------------------------------------


@dataclass(frozen=True)
class NoiseConfig:
    p: float = 0.0
    shots: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability {self.p} outside [0, 1]")
        if self.shots < 1:
            raise ValueError("shots must be positive")


def bitstrings(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2**n)]


def born_probabilities(psi: np.ndarray, n_data: int) -> np.ndarray:
    """Outcome probabilities of the data qubits (any higher qubits traced out)."""
    probs = np.abs(psi.reshape(-1, 2**n_data)) ** 2
    return probs.sum(axis=0)


def _apply_pauli_errors(psi, n, qubits, codes):
    # codes[s] in 0..15: high two bits = Pauli on qubits[0], low two on qubits[1];
    # 0=I 1=X 2=Y 3=Z. Y is applied as XZ; the lost phase is global per shot.
    for which, q in enumerate(qubits):
        pc = (codes >> 2) if which == 0 else (codes & 3)
        ax = _axis(n, q)
        xmask = (pc == 1) | (pc == 2)
        zmask = (pc == 3) | (pc == 2)
        if zmask.any():
            idx = [slice(None)] * psi.ndim
            idx[ax] = 1
            idx[-1] = zmask
            psi[tuple(idx)] *= -1
        if xmask.any():
            idx = [slice(None)] * psi.ndim
            idx[-1] = xmask
            psi[tuple(idx)] = np.flip(psi[tuple(idx)], axis=ax)
    return psi


def run_noisy(c: Circuit, initial: np.ndarray | None, noise: NoiseConfig) -> dict[str, int]:
    """Sample data-qubit outcomes under two-qubit depolarizing noise on every CNOT.

    After each CNOT, with probability ``p`` one of the 16 two-qubit Paulis is
    applied uniformly at random to its control and target, which averages to
    full depolarization of the pair. All random draws are made up front, in
    the same shape whatever ``p`` is, so sweeps over ``p`` with one seed share
    their random numbers. Returns counts keyed by bitstring.
    """
    n = c.width
    nd = c.num_data
    rng = np.random.Generator(np.random.PCG64(noise.seed))
    cnots = [i for i, g in enumerate(c.gates) if g.name == "CNOT"]
    u = rng.random((noise.shots, len(cnots)))
    kinds = rng.integers(0, 16, size=(noise.shots, len(cnots)))
    meas = rng.random(noise.shots)
    codes = np.where(u < noise.p, kinds, 0)
    # shots with identical error patterns evolve identically
    patterns, inverse = np.unique(codes, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    batch = patterns.shape[0]
    psi = np.repeat(embed_data_state(c, initial)[:, None], batch, axis=1).reshape((2,) * n + (batch,))
    k = 0
    for i, g in enumerate(c.gates):
        psi = apply_gate(psi, n, g)
        if g.name == "CNOT":
            col = patterns[:, k]
            if col.any():
                psi = _apply_pauli_errors(psi, n, g.qubits, col)
            k += 1
    probs = np.abs(psi.reshape(-1, 2**nd, batch)) ** 2
    probs = probs.sum(axis=0)  # (2**nd, batch)
    cdf = np.cumsum(probs, axis=0)
    cdf /= cdf[-1:, :]
    per_shot = cdf[:, inverse]  # (2**nd, shots)
    outcomes = np.minimum((per_shot < meas[None, :]).sum(axis=0), 2**nd - 1)
    counts = np.bincount(outcomes, minlength=2**nd)
    labels = bitstrings(nd)
    return {labels[i]: int(counts[i]) for i in range(2**nd) if counts[i]}


def counts_to_probs(counts: Mapping[str, int], n: int) -> np.ndarray:
    total = sum(counts.values())
    out = np.zeros(2**n)
    for key, v in counts.items():
        out[int(key, 2)] = v / total
    return out


def hellinger(p, q, tol: float = 1e-9) -> tuple[float, float]:
    """Hellinger distance and the fidelity-style infidelity ``1 - (1 - H^2)^2``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions over different outcome sets")
    for name, d in (("P", p), ("Q", q)):
        if np.any(d < -tol) or abs(d.sum() - 1.0) > tol:
            raise ValueError(f"{name} is not a normalized distribution (sum {d.sum():.12g})")
    p, q = np.clip(p, 0, None), np.clip(q, 0, None)
    dist = float(np.linalg.norm(np.sqrt(p) - np.sqrt(q)) / math.sqrt(2))
    dist = min(dist, 1.0)
    return dist, 1.0 - (1.0 - dist**2) ** 2


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def distribution_csv(counts: Mapping[str, int], n: int) -> str:
    total = sum(counts.values())
    lines = ["bitstring,count,probability"]
    for label in bitstrings(n):
        c = counts.get(label, 0)
        lines.append(f"{label},{c},{c / total:.10g}")
    return "\n".join(lines) + "\n"


@dataclass
class SimReport:
    hamiltonian: str
    strategy: str
    process_fidelity: float | None = None
    normalized_fidelity: float | None = None
    cnots_pre: int | None = None
    cnots_post: int | None = None
    hellinger_distance: float | None = None
    hellinger_infidelity: float | None = None
    seed: int | None = None
    generator: str = RNG_NAME
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("process_fidelity", "normalized_fidelity", "hellinger_distance", "hellinger_infidelity"):
            v = getattr(self, name)
            if v is not None and not -1e-12 <= v <= 1 + 1e-12:
                raise ValueError(f"{name}={v} outside [0, 1]")
        for name in ("cnots_pre", "cnots_post"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} is negative")
