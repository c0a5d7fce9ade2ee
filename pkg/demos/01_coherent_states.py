"""
Barut-Girardello states and the 1/2 bound
=========================================

The halting test reads P_max > 1/2 as "the ground state of H_D has been
reached". That is only sound if no single Fock level starts with more than
half the probability. For |z| > 1.6 this holds.
"""

import numpy as np

from h10sim.fock import bg_state, bg_vacuum_overlap, max_basis_overlap, su11_generators

d = 64
K_minus = su11_generators(d)[0].matrix

# the state is an eigenvector of K_-, up to the truncation tail
z = 2.0
state = bg_state(z, d)
print("norm^2", state.norm_sq)
print("||(K_- - z)|z>||", np.linalg.norm(K_minus @ state.amps - z * state.amps))

# the vacuum carries the largest weight for small |z|; its closed form
# crosses 1/2 just below |z| = 1.6
for r in (0.5, 1.0, 1.5, 1.6, 1.61, 2.0, 3.0):
    n, p = max_basis_overlap(bg_state(r, d))
    print(f"|z|={r:4.2f}  argmax n={n}  P={p:.5f}  closed form |<z|0>|^2={bg_vacuum_overlap(r):.5f}")
