"""Truncated single-mode Fock space.

Two dynamical algebras act on the same occupation-number basis |0>, ..., |d-1>:

* Weyl-Heisenberg (harmonic oscillator): a|n> = sqrt(n)|n-1>.
* su(1,1) (infinite square well): K-|n> = sqrt(n(n+2))|n-1>,
  K3|n> = (2n+3)|n>.

Energies use the unit scale hbar^2/(2 m l^2) = 1, so the well Hamiltonian is
diag(n(n+2)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

STRUCTURES = ("diagonal", "raising", "lowering", "general")

# hbar^2 / (2 m l^2); only rescales time.
ISW_ENERGY_UNIT = 1.0


class AlgebraKind(enum.Enum):
    WEYL_HEISENBERG = "wh"
    SU11 = "su11"

    @classmethod
    def parse(cls, value: "AlgebraKind | str") -> "AlgebraKind":
        if isinstance(value, cls):
            return value
        v = str(value).lower().replace("-", "").replace("_", "").replace("(", "").replace(")", "").replace(",", "")
        if v in ("wh", "weylheisenberg", "sho"):
            return cls.WEYL_HEISENBERG
        if v in ("su11", "isw"):
            return cls.SU11
        raise ValueError(f"unknown algebra {value!r}")


def _check_dim(d: int, minimum: int = 2) -> int:
    d = int(d)
    if d < minimum:
        raise ValueError(f"truncation dimension must be >= {minimum}, got {d}")
    return d


def _pairs(arr: np.ndarray) -> list:
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _unpairs(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


@dataclass(frozen=True, eq=False)
class ModeOperator:
    """A d x d operator on one truncated mode, tagged with its band structure."""

    matrix: np.ndarray
    structure: str = "general"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("mode operator must be square")
        if m.shape[0] < 2:
            raise ValueError("mode operator needs dim >= 2")
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure tag {self.structure!r}")
        if self.structure != "general":
            band = {"diagonal": 0, "raising": -1, "lowering": 1}[self.structure]
            if np.any(m - np.diag(np.diag(m, band), band)):
                raise ValueError(f"entries outside the {self.structure} band")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "ModeOperator":
        swap = {"raising": "lowering", "lowering": "raising"}
        return ModeOperator(self.matrix.conj().T, swap.get(self.structure, self.structure))

    def __matmul__(self, other):
        if isinstance(other, ModeOperator):
            return ModeOperator(self.matrix @ other.matrix)
        if isinstance(other, ModeState):
            return ModeState(self.matrix @ other.amps)
        return self.matrix @ other

    def to_json(self) -> dict:
        return {"dim": self.dim, "structure": self.structure, "entries": _pairs(self.matrix)}

    @classmethod
    def from_json(cls, obj: dict) -> "ModeOperator":
        return cls(_unpairs(obj["entries"]), obj["structure"])


@dataclass(frozen=True, eq=False)
class ModeState:
    """Amplitudes on a truncated mode. Not necessarily unit norm."""

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex).ravel()
        a.flags.writeable = False
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def tail_mass(self) -> float:
        """Probability lost to truncation, 1 - ||amps||^2."""
        return 1.0 - self.norm_sq

    def normalized(self) -> "ModeState":
        return ModeState(self.amps / math.sqrt(self.norm_sq))

    def to_json(self) -> dict:
        return {"dim": self.dim, "amps": _pairs(self.amps)}

    @classmethod
    def from_json(cls, obj: dict) -> "ModeState":
        return cls(_unpairs(obj["amps"]))


def basis_state(n: int, d: int) -> ModeState:
    v = np.zeros(d, dtype=complex)
    v[n] = 1.0
    return ModeState(v)


# -- Weyl-Heisenberg ----------------------------------------------------------

def wh_ladder(d: int) -> tuple[ModeOperator, ModeOperator]:
    """(a, a^dagger) truncated to d levels."""
    d = _check_dim(d)
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)
    lowering = ModeOperator(a, "lowering")
    return lowering, lowering.dagger()


def wh_number(d: int) -> ModeOperator:
    d = _check_dim(d)
    return ModeOperator(np.diag(np.arange(d, dtype=float)), "diagonal")


# -- su(1,1) ----------------------------------------------------------------

def su11_generators(d: int) -> tuple[ModeOperator, ModeOperator, ModeOperator]:
    """(K-, K+, K3) in the Bargmann index 3/2 representation of the well."""
    d = _check_dim(d)
    n = np.arange(1, d, dtype=float)
    k_minus = ModeOperator(np.diag(np.sqrt(n * (n + 2)), 1), "lowering")
    k3 = ModeOperator(np.diag(2.0 * np.arange(d) + 3.0), "diagonal")
    return k_minus, k_minus.dagger(), k3


def su11_number(d: int) -> ModeOperator:
    """(K3 - 3)/2, which has spectrum 0, 1, ..., d-1."""
    k3 = su11_generators(d)[2]
    return ModeOperator((k3.matrix - 3.0 * np.eye(k3.dim)) / 2.0, "diagonal")


def isw_hamiltonian(d: int) -> ModeOperator:
    d = _check_dim(d)
    n = np.arange(d, dtype=float)
    return ModeOperator(ISW_ENERGY_UNIT * np.diag(n * (n + 2)), "diagonal")


def ladder_pair(algebra: AlgebraKind | str, d: int) -> tuple[ModeOperator, ModeOperator]:
    """(lowering, raising) for the requested algebra."""
    algebra = AlgebraKind.parse(algebra)
    if algebra is AlgebraKind.SU11:
        k_minus, k_plus, _ = su11_generators(d)
        return k_minus, k_plus
    return wh_ladder(d)


def number_operator(algebra: AlgebraKind | str, d: int) -> ModeOperator:
    if AlgebraKind.parse(algebra) is AlgebraKind.SU11:
        return su11_number(d)
    return wh_number(d)


# -- special functions and coherent states -----------------------------------

def bessel_I(order: int, x: float) -> float:
    """Modified Bessel function of the first kind by its power series.

    Summation stops once a term drops below 1e-17 of the running sum (after the
    terms have started to decrease).
    """
    if order < 0 or int(order) != order:
        raise ValueError("order must be a non-negative integer")
    if x < 0:
        raise ValueError("x must be non-negative")
    order = int(order)
    if x == 0:
        return 1.0 if order == 0 else 0.0
    half = x / 2.0
    q = half * half
    term = math.exp(order * math.log(half) - math.lgamma(order + 1))
    total = term
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + order))
        total += term
        if m * (m + order) > q and term < 1e-17 * total:
            return total


def _log_factorial(n: np.ndarray) -> np.ndarray:
    return np.array([math.lgamma(k + 1.0) for k in n])


def _coherent_amps(z: complex, log_mag: np.ndarray, n: np.ndarray) -> np.ndarray:
    phase = np.exp(1j * n * np.angle(z))
    return np.exp(log_mag) * phase


def glauber_state(alpha: complex, d: int, normalize: bool = False) -> ModeState:
    """Harmonic-oscillator coherent state truncated to d levels."""
    d = _check_dim(d)
    alpha = complex(alpha)
    if alpha == 0:
        return basis_state(0, d)
    n = np.arange(d)
    r = abs(alpha)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * _log_factorial(n)
    state = ModeState(_coherent_amps(alpha, log_mag, n))
    return state.normalized() if normalize else state


def bg_normalizer(z: complex) -> float:
    """|z| / sqrt(I_2(2|z|)); tends to sqrt(2) as z -> 0."""
    r = abs(complex(z))
    if r == 0:
        return math.sqrt(2.0)
    return r / math.sqrt(bessel_I(2, 2.0 * r))


def bg_state(z: complex, d: int, normalize: bool = False) -> ModeState:
    """Barut-Girardello coherent state of the well, an eigenvector of K-."""
    d = _check_dim(d)
    z = complex(z)
    if z == 0:
        return basis_state(0, d)
    n = np.arange(d)
    r = abs(z)
    log_mag = (
        math.log(bg_normalizer(z))
        + n * math.log(r)
        - 0.5 * (_log_factorial(n) + _log_factorial(n + 2))
    )
    state = ModeState(_coherent_amps(z, log_mag, n))
    return state.normalized() if normalize else state


def coherent_state(param: complex, algebra: AlgebraKind | str, d: int, normalize: bool = False) -> ModeState:
    if AlgebraKind.parse(algebra) is AlgebraKind.SU11:
        return bg_state(param, d, normalize)
    return glauber_state(param, d, normalize)


def bg_vacuum_overlap(z: complex) -> float:
    """Closed form |<z|0>|^2 = |z|^2 / (2 I_2(2|z|))."""
    r = abs(complex(z))
    if r == 0:
        return 1.0
    return r * r / (2.0 * bessel_I(2, 2.0 * r))


def argmax_prob(probs: np.ndarray, rtol: float = 1e-12) -> int:
    """Index of the largest entry; near-ties (within rtol) go to the smaller index."""
    probs = np.asarray(probs)
    top = probs.max()
    return int(np.flatnonzero(probs >= top * (1.0 - rtol))[0])


def max_basis_overlap(s: ModeState) -> tuple[int, float]:
    probs = np.abs(s.amps) ** 2
    n = argmax_prob(probs)
    return n, float(probs[n])
