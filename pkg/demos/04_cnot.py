"""
Free evolution in the square well as a gate
===========================================

The well's levels are n(n+2), which has the parity of n, so evolving for
t = pi multiplies level n by (-1)^n. Whether that acts as CNOT depends on
how two qubits are written onto levels 0, 1, 2, 4.
"""

import numpy as np

from h10sim.gates import CNOT, coded_gate, truth_table

np.set_printoptions(precision=3, suppress=True)

for coding in ("superposed", "eigen"):
    print(coding, "coding, gate on |00>, |01>, |10>, |11>:")
    print(coded_gate(5, coding).real)
    print("is CNOT:", truth_table(5, coding)["is_cnot"])

# The first coding puts the two +1 and -1 eigenvectors of CNOT on levels of
# mixed parity, so (-1)^n yields a controlled phase instead.
print(np.allclose(coded_gate(5, "eigen"), CNOT))
