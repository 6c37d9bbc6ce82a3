import numpy as np
import pytest
from hypothesis import strategies as st

from termorder.pauli import Hamiltonian, PauliTerm


def random_string(rng, n, allow_identity=False):
    while True:
        s = "".join(rng.choice(list("XYZI"), size=n))
        if allow_identity or set(s) != {"I"}:
            return s


def random_hamiltonian(rng, n, k):
    """Up to ``k`` distinct non-identity strings on ``n`` qubits, coefficients ``0.1 <= |c| <= 1``."""
    k = min(k, 4**n - 1)
    seen = {}
    tries = 0
    while len(seen) < k:
        tries += 1
        if tries > 10000:
            raise RuntimeError("could not draw enough distinct strings")
        s = random_string(rng, n)
        if s in seen:
            continue
        seen[s] = float(rng.choice([-1, 1]) * rng.uniform(0.1, 1.0))
    return Hamiltonian(tuple(PauliTerm(c, s) for s, c in seen.items()))


def pauli_strings(min_width=1, max_width=6):
    return st.integers(min_width, max_width).flatmap(
        lambda n: st.text(alphabet="XYZI", min_size=n, max_size=n)
    )


def same_width_pair(max_width=6):
    return st.integers(1, max_width).flatmap(
        lambda n: st.tuples(*[st.text(alphabet="XYZI", min_size=n, max_size=n)] * 2)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_clique(rng, n, k):
    """Up to ``k`` distinct, pairwise commuting strings (drawn greedily)."""
    from termorder.pauli import commutes

    chosen = []
    for _ in range(200 * k):
        s = random_string(rng, n)
        if s not in chosen and all(commutes(s, c) for c in chosen):
            chosen.append(s)
            if len(chosen) == k:
                break
    return chosen


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
