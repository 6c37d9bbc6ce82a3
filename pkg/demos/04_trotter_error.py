"""
First-order Trotter error
=========================

For a Hamiltonian with non-commuting terms the r-step product formula has an
error that shrinks like 1/r. Doubling r should roughly halve it.
"""

import numpy as np

from termorder import assemble, circuit_unitary, exact_unitary, parse_hamiltonian
from termorder.sim import operator_norm_error

h = parse_hamiltonian("""
0.8 XXI
-0.5 IZZ
0.3 YIY
0.6 ZII
-0.4 IXI
""")

exact = exact_unitary(h, 1.0)
prev = None
print(f"{'r':>4} {'error':>12} {'ratio':>7}")
for r in (4, 8, 16, 32, 64, 128):
    err = operator_norm_error(exact, circuit_unitary(assemble(range(len(h)), h, 1.0, r, "ladder")))
    ratio = "" if prev is None else f"{prev / err:7.3f}"
    print(f"{r:4d} {err:12.3e} {ratio}")
    prev = err

# The same circuit built with the other entanglers gives the same unitary.
u = {arch: circuit_unitary(assemble(range(len(h)), h, 1.0, 8, arch)) for arch in ("ladder", "star", "star_ancilla")}
print("max difference ladder vs star_ancilla:", np.abs(u["ladder"] - u["star_ancilla"]).max())
