"""Pauli strings, weighted terms and Hamiltonian text files.

A Pauli string is stored as a plain ``str`` over ``"XYZI"``. Character ``j``
of a width-``N`` string acts on qubit ``N - 1 - j`` (the rightmost character
is qubit 0), so the matrix of a string is the Kronecker product of its
characters read left to right and a printed bitstring lines up with the
string it was measured under.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

PAULI_CHARS = "XYZI"

# Lexicographic rank used for sorting: X < Y < Z < I.
LEX_RANK = {c: i for i, c in enumerate(PAULI_CHARS)}


class HamiltonianParseError(ValueError):
    """Raised for malformed Hamiltonian text."""


def _check_string(s: str) -> str:
    if not s:
        raise ValueError("empty Pauli string")
    bad = set(s) - set(PAULI_CHARS)
    if bad:
        raise ValueError(f"illegal Pauli character(s) {''.join(sorted(bad))!r} in {s!r}")
    return s


def _check_widths(a: str, b: str) -> None:
    if len(a) != len(b):
        raise ValueError(f"width mismatch: {a!r} ({len(a)}) vs {b!r} ({len(b)})")


def commutes(a: str, b: str) -> bool:
    """Return True if Pauli strings ``a`` and ``b`` commute.

    Two strings commute iff they carry different non-identity characters on
    an even number of positions.
    """
    _check_widths(a, b)
    clashes = sum(1 for x, y in zip(a, b) if x != y and x != "I" and y != "I")
    return clashes % 2 == 0


def hamming_weight(p: str) -> int:
    """Number of non-identity characters in ``p``."""
    return sum(1 for c in p if c != "I")


def lex_key(p: str) -> tuple[int, ...]:
    return tuple(LEX_RANK[c] for c in p)


def qubit_of(position: int, width: int) -> int:
    """Qubit index acted on by character ``position`` of a width-``width`` string."""
    return width - 1 - position


def support(p: str) -> list[int]:
    """Qubits on which ``p`` acts non-trivially, ascending."""
    n = len(p)
    return sorted(qubit_of(j, n) for j, c in enumerate(p) if c != "I")


def char_on(p: str, qubit: int) -> str:
    return p[len(p) - 1 - qubit]


@dataclass(frozen=True)
class PauliTerm:
    """A real coefficient attached to a Pauli string."""

    coefficient: float
    string: str

    def __post_init__(self):
        _check_string(self.string)
        c = float(self.coefficient)
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")
        object.__setattr__(self, "coefficient", c)

    @property
    def width(self) -> int:
        return len(self.string)

    @property
    def is_identity(self) -> bool:
        return hamming_weight(self.string) == 0


@dataclass(frozen=True)
class Hamiltonian:
    """An ordered collection of weighted Pauli terms of one common width.

    Input order is kept: it is the "unordered" baseline every ordering
    strategy is compared against.
    """

    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("Hamiltonian has no terms")
        width = terms[0].width
        seen = set()
        for term in terms:
            if term.width != width:
                raise ValueError(
                    f"inconsistent widths: {term.string!r} has width {term.width}, expected {width}"
                )
            if term.is_identity:
                raise ValueError("the all-identity term only contributes a global phase and is excluded")
            if term.coefficient == 0.0:
                raise ValueError(f"zero coefficient on {term.string!r}")
            if term.string in seen:
                raise ValueError(f"duplicate Pauli string {term.string!r}")
            seen.add(term.string)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[float, str]]) -> "Hamiltonian":
        """Build from ``(coefficient, string)`` pairs, merging duplicates."""
        return cls(tuple(_merge(PauliTerm(c, s) for c, s in pairs)))

    @property
    def width(self) -> int:
        return self.terms[0].width

    @property
    def strings(self) -> list[str]:
        return [t.string for t in self.terms]

    @property
    def coefficients(self) -> list[float]:
        return [t.coefficient for t in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def reordered(self, order: Sequence[int]) -> "Hamiltonian":
        return Hamiltonian(tuple(self.terms[i] for i in order))

    def subset(self, indices: Iterable[int]) -> "Hamiltonian":
        return Hamiltonian(tuple(self.terms[i] for i in indices))


def _merge(terms: Iterable[PauliTerm]) -> list[PauliTerm]:
    # Merge duplicates in first-seen order; an exact zero sum drops the string.
    sums: dict[str, float] = {}
    for term in terms:
        sums[term.string] = sums.get(term.string, 0.0) + term.coefficient
    return [PauliTerm(c, s) for s, c in sums.items() if c != 0.0]


def parse_hamiltonian(text: str, *, drop_identity: bool = True) -> Hamiltonian:
    """Parse ``<coefficient> <pauli-string>`` lines into a Hamiltonian.

    Blank lines and lines starting with ``#`` are ignored, as is anything
    after a ``#`` on a term line. Repeated strings are summed. All-identity
    terms only shift the global phase and are dropped (logged); with
    ``drop_identity=False`` they are an error instead.
    """
    raw: list[PauliTerm] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        fields = body.split()
        if len(fields) != 2:
            raise HamiltonianParseError(
                f"line {lineno}: expected '<coefficient> <pauli-string>', got {line.strip()!r}"
            )
        coeff_text, string = fields
        try:
            coeff = float(coeff_text)
        except ValueError:
            raise HamiltonianParseError(f"line {lineno}: malformed coefficient {coeff_text!r}") from None
        if not math.isfinite(coeff):
            raise HamiltonianParseError(f"line {lineno}: non-finite coefficient {coeff_text!r}")
        if coeff == 0.0:
            raise HamiltonianParseError(f"line {lineno}: zero coefficient")
        string = string.upper()
        try:
            _check_string(string)
        except ValueError as exc:
            raise HamiltonianParseError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(string)
        elif len(string) != width:
            raise HamiltonianParseError(
                f"line {lineno}: inconsistent width {len(string)} (expected {width})"
            )
        if hamming_weight(string) == 0:
            if drop_identity:
                log.info("line %d: dropping identity term %s %s", lineno, coeff_text, string)
                continue
            raise HamiltonianParseError(
                f"line {lineno}: identity term {string!r} is excluded (global phase only)"
            )
        raw.append(PauliTerm(coeff, string))
    if not raw:
        raise HamiltonianParseError("no terms in input")
    merged = _merge(raw)
    if not merged:
        raise HamiltonianParseError("all terms cancelled to zero")
    return Hamiltonian(tuple(merged))


def format_hamiltonian(h: Hamiltonian) -> str:
    # repr() round-trips floats exactly.
    return "".join(f"{term.coefficient!r} {term.string}\n" for term in h.terms)


def load_hamiltonian(path, **kwargs) -> Hamiltonian:
    return parse_hamiltonian(Path(path).read_text(), **kwargs)


def load_directory(directory, pattern: str = "*.ham") -> dict[str, Hamiltonian]:
    """Load every ``.ham`` file in ``directory`` keyed by file stem, sorted by name."""
    paths = sorted(Path(directory).glob(pattern))
    return {p.stem: load_hamiltonian(p) for p in paths}


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture, e.g. ``fixture_path("h2")``."""
    path = Path(__file__).parent / "data" / f"{name}.ham"
    if not path.exists():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return path


def load_fixture(name: str) -> Hamiltonian:
    return load_hamiltonian(fixture_path(name))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in (Path(__file__).parent / "data").glob("*.ham"))
