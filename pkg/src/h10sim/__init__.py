"""Truncated-Fock-space simulator of the adiabatic Hilbert's-tenth-problem
procedure, for the harmonic-oscillator and infinite-square-well algebras."""
from .adiabatic import DecideConfig, RunReport, Schedule, Verdict, decide, evolve, gap_scan, ground_state, measure_pmax
from .fock import AlgebraKind, bessel_I, bg_state, glauber_state, max_basis_overlap
from .gates import cnot_inf, decode_2qubit, encode_2qubit, isw_propagator
from .hamiltonians import (
    StateVector,
    apply_hamiltonian,
    build_codec,
    build_initial_hamiltonian,
    build_initial_state,
    build_problem_hamiltonian,
    materialize_dense,
)
from .poly import Polynomial, brute_force_search, evaluate, parse_polynomial

__version__ = "0.1.0"
