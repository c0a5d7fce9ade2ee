"""
One adiabatic sweep, watched closely
====================================

D = x - 2 on 16 levels. The run starts in the coherent state |z=2> and ends
near |2>, the unique root. Longer sweeps track the ground state better.
"""

import numpy as np

from h10sim import (
    Schedule,
    build_codec,
    build_initial_hamiltonian,
    build_initial_state,
    build_problem_hamiltonian,
    evolve,
    gap_scan,
    parse_polynomial,
)

p = parse_polynomial("x - 2")
codec = build_codec(1, 16)
hI = build_initial_hamiltonian([2.0], "su11", codec)
hD = build_problem_hamiltonian(p, codec)
psi0 = build_initial_state([2.0], "su11", codec)

# The gap never closes on this grid, so the adiabatic theorem applies.
gaps = gap_scan(hI, hD, np.linspace(0, 1, 21))
print("smallest gap along the path:", gaps.min_gap)

target = np.eye(16)[2]
for T in (25, 50, 100, 200):
    final, trace = evolve(hI, hD, psi0, Schedule.for_time(T, 20))
    print(f"T={T:4d}  fidelity with |2> = {final.fidelity(target):.4f}  P_max trace end = {trace[-1].p_max:.4f}")

# checkpoint trace of the longest run
for tp in trace[::3]:
    print(f"  t={tp.t:7.2f}  P_max={tp.p_max:.4f} at n={tp.argmax[0]}")
