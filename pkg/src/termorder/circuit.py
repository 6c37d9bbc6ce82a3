"""Gate-level circuits for Trotterized Pauli evolution, plus a cancellation pass.

Each term ``c * P`` becomes ``exp(-i c dt P)``: basis changes onto Z, a CNOT
entangler collecting parity, ``Rz(2 c dt)``, then everything mirrored.
Three entangler layouts are supported:

``ladder``
    CNOTs chained between successive qubits of the support.
``star``
    every CNOT targets the highest-index qubit of the support.
``star_ancilla``
    every CNOT targets one shared scratch qubit (index ``N``), which also
    carries the rotation. It costs ``2 * weight`` CNOTs per term before
    cancellation but lets neighbouring terms cancel on every shared character.
"""

from __future__ import annotations

import heapq
import math
from itertools import islice
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pauli import Hamiltonian, PauliTerm, char_on, support

ARCHITECTURES = ("ladder", "star", "star_ancilla")

SINGLE_QUBIT = {"H", "S", "SDG", "RZ", "X"}
DIAGONAL = {"S", "SDG", "RZ"}
INVERSE = {"H": "H", "S": "SDG", "SDG": "S", "X": "X", "CNOT": "CNOT"}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if self.name == "CNOT":
            if len(qubits) != 2 or qubits[0] == qubits[1]:
                raise ValueError(f"CNOT needs distinct control and target, got {qubits}")
        elif self.name in SINGLE_QUBIT:
            if len(qubits) != 1:
                raise ValueError(f"{self.name} acts on one qubit, got {qubits}")
        else:
            raise ValueError(f"unknown gate {self.name!r}")
        if self.name == "RZ":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("RZ needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.name} takes no angle")
        if any(q < 0 for q in qubits):
            raise ValueError("negative qubit index")

    def to_text(self) -> str:
        if self.name == "RZ":
            return f"RZ {self.angle:.10g} {self.qubits[0]}"
        return " ".join([self.name, *map(str, self.qubits)])

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        parts = line.split()
        name = parts[0].upper()
        if name == "RZ":
            return cls("RZ", (int(parts[2]),), float(parts[1]))
        return cls(name, tuple(int(p) for p in parts[1:]))


def H(q):
    return Gate("H", (q,))


def S(q):
    return Gate("S", (q,))


def SDG(q):
    return Gate("SDG", (q,))


def X(q):
    return Gate("X", (q,))


def RZ(theta, q):
    return Gate("RZ", (q,), theta)


def CNOT(c, t):
    return Gate("CNOT", (c, t))


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    trotter_number: int = 1
    time: float = 0.0
    ancilla: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.width < 1:
            raise ValueError("circuit width must be positive")
        if self.trotter_number < 1:
            raise ValueError("trotter number must be at least 1")
        for g in gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"gate {g.to_text()} outside width {self.width}")
        if self.ancilla is not None and not 0 <= self.ancilla < self.width:
            raise ValueError("ancilla index outside the circuit")

    @property
    def num_data(self) -> int:
        return self.width - (1 if self.ancilla is not None else 0)

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.width, tuple(gates), self.trotter_number, self.time, self.ancilla, dict(self.meta))

    def to_text(self) -> str:
        lines = [f"WIDTH {self.width}", f"TROTTER {self.trotter_number}", f"TIME {self.time:.10g}"]
        if self.ancilla is not None:
            lines.append(f"ANCILLA {self.ancilla}")
        lines += [g.to_text() for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        header = {}
        gates = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key = line.split()[0].upper()
            if key in ("WIDTH", "TROTTER", "TIME", "ANCILLA"):
                header[key] = line.split()[1]
            else:
                gates.append(Gate.from_text(line))
        anc = header.get("ANCILLA")
        return cls(
            int(header["WIDTH"]),
            tuple(gates),
            int(header.get("TROTTER", 1)),
            float(header.get("TIME", 0.0)),
            int(anc) if anc is not None else None,
        )


def cnot_count(c: Circuit | Sequence[Gate]) -> int:
    gates = c.gates if isinstance(c, Circuit) else c
    return sum(1 for g in gates if g.name == "CNOT")


def _basis_in(p: str, qubits: Sequence[int]) -> list[Gate]:
    out = []
    for q in qubits:
        ch = char_on(p, q)
        if ch == "X":
            out.append(H(q))
        elif ch == "Y":
            out += [SDG(q), H(q)]
    return out


def _basis_out(p: str, qubits: Sequence[int]) -> list[Gate]:
    out = []
    for q in qubits:
        ch = char_on(p, q)
        if ch == "X":
            out.append(H(q))
        elif ch == "Y":
            out += [H(q), S(q)]
    return out


def synthesize_term(term: PauliTerm, dt: float, arch: str = "ladder") -> list[Gate]:
    """Gates implementing ``exp(-i * coefficient * dt * P)`` exactly.

    For ``star_ancilla`` the scratch qubit is index ``term.width`` and must
    start in ``|0>``; it is returned there.
    """
    p = term.string
    qs = support(p)
    if not qs:
        raise ValueError("cannot synthesize the identity term")
    theta = 2.0 * term.coefficient * dt
    if arch == "ladder":
        ent = [CNOT(a, b) for a, b in zip(qs, qs[1:])]
        pivot = qs[-1]
    elif arch == "star":
        pivot = qs[-1]
        ent = [CNOT(q, pivot) for q in qs[:-1]]
    elif arch == "star_ancilla":
        pivot = term.width
        ent = [CNOT(q, pivot) for q in qs]
    else:
        raise ValueError(f"unknown architecture {arch!r}; choose from {ARCHITECTURES}")
    return _basis_in(p, qs) + ent + [RZ(theta, pivot)] + ent[::-1] + _basis_out(p, qs)


def assemble(plan, h: Hamiltonian, t: float, r: int = 1, arch: str = "ladder") -> Circuit:
    """First-order Trotter circuit: the plan's terms at ``dt = t / r``, repeated ``r`` times."""
    if r < 1:
        raise ValueError("trotter number must be at least 1")
    order = plan.term_order if hasattr(plan, "term_order") else tuple(plan)
    dt = t / r
    step: list[Gate] = []
    for i in order:
        step += synthesize_term(h[i], dt, arch)
    n = h.width
    ancilla = n if arch == "star_ancilla" else None
    width = n + 1 if ancilla is not None else n
    meta = {"arch": arch, "strategy": getattr(plan, "strategy", "custom")}
    return Circuit(width, tuple(step * r), r, float(t), ancilla, meta)


# -- cancellation ----------------------------------------------------------


def _commutes(g: Gate, other: Gate) -> bool:
    """Conservative commutation whitelist; False means 'assume blocking'."""
    if g.name == "CNOT" and other.name == "CNOT":
        (c1, t1), (c2, t2) = g.qubits, other.qubits
        return c1 != t2 and t1 != c2
    if g.name == "CNOT" or other.name == "CNOT":
        cx, single = (g, other) if g.name == "CNOT" else (other, g)
        c, t = cx.qubits
        q = single.qubits[0]
        if q == c:
            return single.name in DIAGONAL
        if q == t:
            return single.name == "X"
        return True
    # both single-qubit, same wire
    if g.qubits != other.qubits:
        return True
    return g.name in DIAGONAL and other.name in DIAGONAL


def _cancel_pass(gates: list[Gate]) -> tuple[list[Gate], bool]:
    alive = [True] * len(gates)
    # per-qubit list of gate positions keeps the forward scan local
    on_qubit: dict[int, list[int]] = {}
    for i, g in enumerate(gates):
        for q in g.qubits:
            on_qubit.setdefault(q, []).append(i)
    cursor = {q: 0 for q in on_qubit}
    changed = False
    for i, g in enumerate(gates):
        for q in g.qubits:
            cursor[q] += 1
        if not alive[i] or g.name not in INVERSE:
            continue
        # candidates: later gates touching any of g's qubits, in circuit order
        later = heapq.merge(*(islice(on_qubit[q], cursor[q], None) for q in g.qubits))
        last = -1
        for j in later:
            if j == last:
                continue
            last = j
            if not alive[j]:
                continue
            other = gates[j]
            if other.name == INVERSE[g.name] and other.qubits == g.qubits:
                alive[i] = alive[j] = False
                changed = True
                break
            if not _commutes(g, other):
                break
    return [g for g, a in zip(gates, alive) if a], changed


def cancel_gates(c: Circuit) -> Circuit:
    """Remove inverse pairs until nothing changes.

    A gate cancels against a later copy of its inverse (H-H, S-SDG, X-X,
    identical CNOTs) when every gate in between that shares a qubit with it
    commutes with it. The commutation table is deliberately small: CNOTs
    with no control/target crossing, diagonal gates on a CNOT control, X on
    a CNOT target. Hadamards block. The circuit's unitary is unchanged.
    """
    gates = list(c.gates)
    changed = True
    while changed:
        gates, changed = _cancel_pass(gates)
    return c.with_gates(gates)
