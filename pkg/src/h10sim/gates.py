"""Free evolution in the infinite square well as diagonal phase gates, and the
two-qubit codification on Fock levels {0, 1, 2, 4} used to build CNOT^inf.

Two codings of the rotated two-qubit basis

    e1 = |00>,  e2 = |01>,  e3 = (|10> + |11>)/sqrt2,  e4 = (|11> - |10>)/sqrt2

are provided:

``"superposed"`` e1 -> |0>, e2 -> |2>, e3 -> (|4> + |1>)/sqrt2, e4 -> (|4> - |1>)/sqrt2
``"eigen"``      e1 -> |0>, e2 -> |2>, e3 -> |4>,               e4 -> |1>

Under the superposed coding the parity gate (-1)^n swaps the images of e3 and e4,
which acts as diag(1, 1, -1, 1) on |00>, |01>, |10>, |11>. That is a
controlled phase, not CNOT. The eigen coding sends the -1 eigenvector e4 of
CNOT to an odd level and the +1 eigenvectors to even levels, so the parity
gate reproduces CNOT exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import ISW_ENERGY_UNIT, ModeState

CODED_LEVELS = (0, 1, 2, 4)
MIN_DIM = 5
CNOT_TIME = math.pi

_S = 1 / math.sqrt(2)
# rows: e1..e4 expressed in the computational basis |00>, |01>, |10>, |11>
ROTATED_BASIS = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, _S, _S],
        [0, 0, -_S, _S],
    ]
)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

# columns: image of e1..e4 on levels 0..4
_CODINGS = {
    "superposed": np.array(
        [
            [1, 0, 0, 0],
            [0, 0, _S, -_S],
            [0, 1, 0, 0],
            [0, 0, 0, 0],
            [0, 0, _S, _S],
        ]
    ),
    "eigen": np.array(
        [
            [1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 1, 0, 0],
            [0, 0, 0, 0],
            [0, 0, 1, 0],
        ]
    ),
}


def _check_dim(d: int) -> int:
    if d < MIN_DIM:
        raise ValueError(f"the coding uses level 4, so d must be >= {MIN_DIM}, got {d}")
    return int(d)


@dataclass(frozen=True, eq=False)
class DiagonalUnitary:
    """diag(exp(-i theta_n))."""

    phases: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float).ravel()
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)

    @property
    def dim(self) -> int:
        return self.phases.size

    @property
    def entries(self) -> np.ndarray:
        return np.exp(-1j * self.phases)

    def matrix(self) -> np.ndarray:
        return np.diag(self.entries)

    def __matmul__(self, other):
        if isinstance(other, DiagonalUnitary):
            return DiagonalUnitary(self.phases + other.phases)
        if isinstance(other, ModeState):
            return ModeState(self.entries * other.amps)
        return self.entries * np.asarray(other)


def isw_propagator(t: float, d: int) -> DiagonalUnitary:
    """exp(-i H t) for H = diag(n(n+2)), reduced mod 2 pi."""
    n = np.arange(d)
    energies = ISW_ENERGY_UNIT * n * (n + 2)
    return DiagonalUnitary(np.mod(energies * float(t), 2 * math.pi))


def cnot_inf(d: int) -> DiagonalUnitary:
    """The propagator at t = pi; n(n+2) has the parity of n, so entries are (-1)^n."""
    d = _check_dim(d)
    n = np.arange(d)
    return DiagonalUnitary(math.pi * ((n * (n + 2)) % 2))


@dataclass(frozen=True, eq=False)
class CodedTwoQubit:
    """Coordinates in the rotated basis e1..e4."""

    amps4: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amps4, dtype=complex).ravel()
        if a.size != 4:
            raise ValueError("a two-qubit state has 4 amplitudes")
        object.__setattr__(self, "amps4", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps4))

    @classmethod
    def from_computational(cls, c) -> "CodedTwoQubit":
        """From amplitudes on |00>, |01>, |10>, |11>."""
        return cls(ROTATED_BASIS @ np.asarray(c, dtype=complex))

    def computational(self) -> np.ndarray:
        return ROTATED_BASIS.T @ self.amps4


def coding_matrix(d: int, coding: str = "superposed") -> np.ndarray:
    """d x 4 isometry from rotated coordinates to Fock amplitudes."""
    d = _check_dim(d)
    try:
        base = _CODINGS[coding]
    except KeyError:
        raise ValueError(f"unknown coding {coding!r}; choose from {sorted(_CODINGS)}") from None
    out = np.zeros((d, 4), dtype=complex)
    out[:5] = base
    return out


def encode_2qubit(q: CodedTwoQubit, d: int, coding: str = "superposed") -> ModeState:
    if abs(q.norm - 1.0) > 1e-12:
        raise ValueError(f"two-qubit state must be normalized, norm={q.norm}")
    return ModeState(coding_matrix(d, coding) @ q.amps4)


def decode_2qubit(s: ModeState, coding: str = "superposed") -> tuple[CodedTwoQubit, float]:
    """Project onto the coded subspace; leakage is the probability left outside it."""
    c = coding_matrix(s.dim, coding)
    coords = c.conj().T @ s.amps
    leakage = max(0.0, s.norm_sq - float(np.vdot(coords, coords).real))
    return CodedTwoQubit(coords), leakage


def coded_gate(d: int = MIN_DIM, coding: str = "superposed") -> np.ndarray:
    """decode o cnot_inf o encode as a 4x4 matrix on |00>, |01>, |10>, |11>."""
    u = cnot_inf(d)
    cols = []
    for basis in np.eye(4):
        q = CodedTwoQubit.from_computational(basis)
        out, _ = decode_2qubit(u @ encode_2qubit(q, d, coding), coding)
        cols.append(out.computational())
    return np.array(cols).T


def truth_table(d: int = MIN_DIM, coding: str = "superposed", atol: float = 1e-10) -> dict:
    """Compare the coded gate with |x, y> -> |x, x xor y> on computational inputs."""
    gate = coded_gate(d, coding)
    rows = {}
    for x in (0, 1):
        for y in (0, 1):
            col = gate[:, 2 * x + y]
            expected = 2 * x + (x ^ y)
            rows[f"{x}{y}"] = {
                "expected": f"{x}{x ^ y}",
                "output": {f"{i >> 1}{i & 1}": [float(a.real), float(a.imag)] for i, a in enumerate(col) if abs(a) > atol},
                "ok": bool(np.allclose(col, np.eye(4)[expected], atol=atol)),
            }
    return {"coding": coding, "rows": rows, "is_cnot": bool(np.allclose(gate, CNOT, atol=atol))}


def basis_mappings(d: int = MIN_DIM, coding: str = "superposed") -> list[dict]:
    """Images of the four rotated basis vectors before and after cnot_inf."""
    u = cnot_inf(d)
    labels = ["|00>", "|01>", "(|10>+|11>)/sqrt2", "(|11>-|10>)/sqrt2"]
    out = []
    for label, q in zip(labels, np.eye(4)):
        coded = encode_2qubit(CodedTwoQubit(q), d, coding)
        evolved = u @ coded
        decoded, leak = decode_2qubit(evolved, coding)
        out.append({
            "input": label,
            "coded": _fock_label(coded.amps),
            "after_cnot_inf": _fock_label(evolved.amps),
            "decoded_rotated": [[float(a.real), float(a.imag)] for a in decoded.amps4],
            "leakage": leak,
        })
    return out


def _fock_label(amps: np.ndarray, atol: float = 1e-12) -> str:
    parts = []
    for n, a in enumerate(amps):
        if abs(a) > atol:
            parts.append(f"{a.real:+.6g}|{n}>")
    return " ".join(parts)
