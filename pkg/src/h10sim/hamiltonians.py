"""k-mode tensor-product Hamiltonians for the adiabatic decision procedure.

The problem Hamiltonian is diagonal, entry D(n1, ..., nk)^2, held as exact ints.
The initial Hamiltonian is a Kronecker sum of single-mode terms
(R - conj(c))(L - c), applied mode by mode so the d^k x d^k matrix is never
formed on the main path.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .fock import AlgebraKind, ModeOperator, coherent_state, ladder_pair
from .poly import Polynomial, evaluate

# Upper bound on d**k for any codec; beyond this the state vector alone is unwieldy.
MAX_TOTAL_DIM = 1 << 26
DENSE_CAP = 4096


class DenseCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MultiIndexCodec:
    """Row-major mixed-radix codec: mode 1 is the slowest-varying digit."""

    k: int
    d: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one mode")
        if self.d < 2:
            raise ValueError("per-mode dimension must be >= 2")
        if self.d**self.k > MAX_TOTAL_DIM:
            raise OverflowError(f"d^k = {self.d}^{self.k} exceeds {MAX_TOTAL_DIM}")

    @property
    def total(self) -> int:
        return self.d**self.k

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.d,) * self.k

    def encode(self, idx: Sequence[int]) -> int:
        if len(idx) != self.k:
            raise ValueError(f"expected {self.k} indices, got {len(idx)}")
        out = 0
        for n in idx:
            if not 0 <= n < self.d:
                raise ValueError(f"index {n} outside 0..{self.d - 1}")
            out = out * self.d + int(n)
        return out

    def decode(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.total:
            raise ValueError(f"flat index {i} outside 0..{self.total - 1}")
        digits = []
        for _ in range(self.k):
            i, r = divmod(i, self.d)
            digits.append(r)
        return tuple(reversed(digits))

    def all_indices(self) -> np.ndarray:
        """(total, k) array whose row i is decode(i)."""
        return np.indices(self.shape).reshape(self.k, -1).T


def build_codec(k: int, d: int) -> MultiIndexCodec:
    return MultiIndexCodec(int(k), int(d))


@dataclass(frozen=True, eq=False)
class StateVector:
    codec: MultiIndexCodec
    amps: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).ravel()
        if a.size != self.codec.total:
            raise ValueError(f"state has {a.size} amplitudes, codec expects {self.codec.total}")
        object.__setattr__(self, "amps", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def fidelity(self, other: "StateVector | np.ndarray") -> float:
        b = other.amps if isinstance(other, StateVector) else np.asarray(other)
        return float(abs(np.vdot(b, self.amps)) ** 2)


@dataclass(frozen=True, eq=False)
class ProblemHamiltonian:
    codec: MultiIndexCodec
    diag: tuple[int, ...]

    @cached_property
    def diag_float(self) -> np.ndarray:
        arr = np.array([float(v) for v in self.diag])
        arr.flags.writeable = False
        return arr

    @property
    def min_value(self) -> int:
        return min(self.diag)

    def minimizers(self) -> list[int]:
        m = self.min_value
        return [i for i, v in enumerate(self.diag) if v == m]

    @property
    def ground_degenerate(self) -> bool:
        return len(self.minimizers()) > 1

    def checksum(self) -> str:
        h = hashlib.sha256()
        for v in self.diag:
            h.update(str(v).encode())
            h.update(b",")
        return h.hexdigest()


def build_problem_hamiltonian(p: Polynomial, codec: MultiIndexCodec) -> ProblemHamiltonian:
    """diag[i] = D(decode(i))^2 as exact integers.

    Both number operators have spectrum 0..d-1, so the result does not depend on
    the algebra.
    """
    if p.k != codec.k:
        raise ValueError(f"polynomial has k={p.k}, codec has k={codec.k}")
    diag = tuple(evaluate(p, codec.decode(i)) ** 2 for i in range(codec.total))
    return ProblemHamiltonian(codec, diag)


@dataclass(frozen=True, eq=False)
class InitialHamiltonian:
    codec: MultiIndexCodec
    params: tuple[complex, ...]
    algebra: AlgebraKind
    mode_terms: tuple[ModeOperator, ...] = field(repr=False)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Kronecker-sum matvec, O(k d^(k+1))."""
        psi = np.asarray(v, dtype=complex).reshape(self.codec.shape)
        out = np.zeros_like(psi)
        for i, term in enumerate(self.mode_terms):
            out += np.moveaxis(np.tensordot(term.matrix, psi, axes=([1], [i])), 0, i)
        return out.reshape(-1)

    def dense(self) -> np.ndarray:
        d, k = self.codec.d, self.codec.k
        eye = np.eye(d)
        total = np.zeros((d**k, d**k), dtype=complex)
        for i, term in enumerate(self.mode_terms):
            m = np.ones((1, 1))
            for j in range(k):
                m = np.kron(m, term.matrix if j == i else eye)
            total += m
        return total

    def sparse(self) -> sp.csr_matrix:
        """Kronecker sum as a sparse matrix; each mode term is tridiagonal."""
        cached = self.__dict__.get("_sparse")
        if cached is None:
            cached = sp.csr_matrix((self.codec.total, self.codec.total), dtype=complex)
            d, k = self.codec.d, self.codec.k
            for i, term in enumerate(self.mode_terms):
                left = sp.identity(d**i, format="csr")
                right = sp.identity(d ** (k - i - 1), format="csr")
                cached = cached + sp.kron(sp.kron(left, sp.csr_matrix(term.matrix)), right, format="csr")
            cached = cached.tocsr()
            object.__setattr__(self, "_sparse", cached)
        return cached

    def spectral_bound(self) -> float:
        """Upper bound on the largest eigenvalue (terms are PSD)."""
        return float(sum(np.abs(t.matrix).sum(axis=1).max() for t in self.mode_terms))


def _check_params(params: Sequence[complex], codec: MultiIndexCodec) -> tuple[complex, ...]:
    params = tuple(complex(c) for c in params)
    if len(params) != codec.k:
        raise ValueError(f"need {codec.k} coherent-state parameters, got {len(params)}")
    return params


def build_initial_hamiltonian(
    params: Sequence[complex], algebra: AlgebraKind | str, codec: MultiIndexCodec
) -> InitialHamiltonian:
    algebra = AlgebraKind.parse(algebra)
    params = _check_params(params, codec)
    lowering, raising = ladder_pair(algebra, codec.d)
    eye = np.eye(codec.d)
    terms = []
    for c in params:
        left = raising.matrix - np.conj(c) * eye
        right = lowering.matrix - c * eye
        terms.append(ModeOperator(left @ right))
    return InitialHamiltonian(codec, params, algebra, tuple(terms))


def build_initial_state(
    params: Sequence[complex], algebra: AlgebraKind | str, codec: MultiIndexCodec
) -> StateVector:
    """Product of per-mode coherent states, renormalized to unit norm."""
    params = _check_params(params, codec)
    psi = np.ones(1, dtype=complex)
    for c in params:
        psi = np.kron(psi, coherent_state(c, algebra, codec.d).amps)
    return StateVector(codec, psi / np.linalg.norm(psi))


def _check_state(hI: InitialHamiltonian, hD: ProblemHamiltonian, v) -> np.ndarray:
    if hI.codec != hD.codec:
        raise ValueError("initial and problem Hamiltonians use different codecs")
    amps = v.amps if isinstance(v, StateVector) else np.asarray(v, dtype=complex)
    if amps.size != hI.codec.total:
        raise ValueError(f"vector has {amps.size} entries, expected {hI.codec.total}")
    return amps


def apply_hamiltonian(hI: InitialHamiltonian, hD: ProblemHamiltonian, s: float, v):
    """H_A(s) v = (1-s) H_I v + s H_D v without forming H_A.

    Returns the same kind of object it was given (StateVector or array).
    """
    amps = _check_state(hI, hD, v)
    out = s * hD.diag_float * amps
    if s != 1:
        out = out + (1.0 - s) * hI.apply(amps)
    if isinstance(v, StateVector):
        return StateVector(v.codec, out)
    return out


def materialize_dense(hI: InitialHamiltonian, hD: ProblemHamiltonian, s: float, cap: int = DENSE_CAP) -> np.ndarray:
    if hI.codec != hD.codec:
        raise ValueError("initial and problem Hamiltonians use different codecs")
    if hI.codec.total > cap:
        raise DenseCapExceeded(f"d^k = {hI.codec.total} exceeds dense cap {cap}")
    return (1.0 - s) * hI.dense() + s * np.diag(hD.diag_float).astype(complex)


def hamiltonian_summary(hI: InitialHamiltonian, hD: ProblemHamiltonian) -> dict:
    """Provenance record; no matrix data."""
    return {
        "k": hI.codec.k,
        "d": hI.codec.d,
        "algebra": hI.algebra.value,
        "params": [[c.real, c.imag] for c in hI.params],
        "diag_sha256": hD.checksum(),
        "diag_min": str(hD.min_value),
    }
