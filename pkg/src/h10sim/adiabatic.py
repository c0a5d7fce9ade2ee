"""Schrodinger evolution along H_A(s) = (1-s) H_I + s H_D, the P_max halting
loop, and dense spectral diagnostics for small instances.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import jv

from .fock import AlgebraKind, argmax_prob
from .hamiltonians import (
    DENSE_CAP,
    InitialHamiltonian,
    MultiIndexCodec,
    ProblemHamiltonian,
    StateVector,
    build_codec,
    build_initial_hamiltonian,
    build_initial_state,
    build_problem_hamiltonian,
    materialize_dense,
)
from .poly import Polynomial, evaluate

try:
    from . import _kernels
except ImportError:  # pragma: no cover - numba missing
    _kernels = None

log = logging.getLogger(__name__)

# |z| must exceed this for the su(1,1) halting criterion to be sound.
SU11_MIN_MODULUS = 1.6
# max_n e^{-r^2} r^{2n}/n! < 1/2 iff r^2 > ln 2.
WH_MIN_MODULUS = math.sqrt(math.log(2.0))

DEFAULT_PARAM = {AlgebraKind.SU11: 2.0, AlgebraKind.WEYL_HEISENBERG: 3.0}
DEGENERACY_TOL = 1e-9
NORM_ABORT = 1e-6


class IntegrationError(RuntimeError):
    pass


class HaltingBoundError(ValueError):
    """Coherent-state parameter too small for P_max > 1/2 to be meaningful."""


class Verdict(str, enum.Enum):
    SOLUTION_EXISTS = "SolutionExists"
    NO_SOLUTION = "NoSolution"
    INCONCLUSIVE = "Inconclusive"


class TracePoint(NamedTuple):
    t: float
    p_max: float
    argmax: tuple[int, ...]
    norm: float


@dataclass(frozen=True)
class Schedule:
    T: float
    steps: int
    checkpoints: tuple[float, ...] = tuple(np.linspace(0.0, 1.0, 16))

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("total time T must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step")
        cps = tuple(float(c) for c in self.checkpoints)
        if any(c < 0 or c > 1 for c in cps) or list(cps) != sorted(cps):
            raise ValueError("checkpoints must be sorted fractions in [0, 1]")
        object.__setattr__(self, "checkpoints", cps)

    @classmethod
    def for_time(cls, T: float, steps_per_unit_time: float, **kw) -> "Schedule":
        return cls(T, max(1, math.ceil(steps_per_unit_time * T)), **kw)

    @property
    def dt(self) -> float:
        return self.T / self.steps


# -- matrix-free propagator ---------------------------------------------------

_CHECK_AT = frozenset({2, 4, 6, 8, 10, 12, 14, 16, 19, 22, 25, 28, 32, 36, 40})


def expm_krylov(
    matvec: Callable[[np.ndarray], np.ndarray],
    v: np.ndarray,
    dt: float,
    tol: float = 1e-10,
    max_dim: int = 40,
) -> np.ndarray:
    """exp(-i dt H) v for Hermitian H given only as a matvec.

    Lanczos with full reorthogonalization. The result is ||v|| times an
    orthonormal combination of Krylov vectors with unitary coefficients, so the
    norm is preserved whatever the truncation. If the error estimate does not
    reach ``tol`` within ``max_dim`` vectors the step is split in two.
    """
    beta0 = np.linalg.norm(v)
    if beta0 == 0:
        return v.copy()
    max_dim = min(max_dim, v.size)
    basis = np.empty((max_dim, v.size), dtype=complex)
    basis[0] = v / beta0
    tri = np.zeros((max_dim, max_dim))
    for j in range(max_dim):
        w = matvec(basis[j])
        a = np.vdot(basis[j], w).real
        tri[j, j] = a
        w -= a * basis[j]
        if j:
            w -= tri[j, j - 1] * basis[j - 1]
        w -= basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
        b = np.linalg.norm(w)
        m = j + 1
        breakdown = b <= 1e-13 * max(1.0, abs(a))
        if breakdown or m in _CHECK_AT or m == max_dim:
            evals, evecs = np.linalg.eigh(tri[:m, :m])
            coeff = evecs @ (np.exp(-1j * dt * evals) * evecs[0])
            if breakdown or b * abs(coeff[-1]) < tol:
                return beta0 * (coeff @ basis[:m])
        if m < max_dim:
            basis[m] = w / b
            tri[m, j] = tri[j, m] = b
    half = expm_krylov(matvec, v, dt / 2, tol / 2, max_dim)
    return expm_krylov(matvec, half, dt / 2, tol / 2, max_dim)


def _hamiltonian_matvec(hI: InitialHamiltonian, hD: ProblemHamiltonian, s: float):
    diag = hD.diag_float
    if s == 1:
        return lambda x: diag * x
    hi = hI.sparse()
    return lambda x: s * diag * x + (1.0 - s) * (hi @ x)


def chebyshev_coefficients(dt: float, lo: float, hi: float, tol: float = 1e-10) -> tuple[np.ndarray, float, float, complex]:
    """Expansion of exp(-i dt H) for a spectrum inside [lo, hi].

    Returns (coeffs, center, half_width, phase) with
    exp(-i dt H) = phase * sum_k coeffs[k] T_k((H - center) / half_width).
    Terms are kept until |J_k| falls below tol * 1e-6, past the Bessel
    turning point, so the truncation error is far under ``tol``.
    """
    center = 0.5 * (hi + lo)
    half_width = max(0.5 * (hi - lo), 1e-12)
    x = dt * half_width
    kmax = int(x + 10.0 * x ** (1.0 / 3.0) + 40.0)
    j = jv(np.arange(kmax), x)
    cutoff = tol * 1e-6
    beyond = np.flatnonzero((np.arange(kmax) > x) & (np.abs(j) < cutoff))
    kmax = int(beyond[0]) + 1 if beyond.size else kmax
    k = np.arange(kmax)
    coeffs = (2.0 - (k == 0)) * (-1j) ** k * j[:kmax]
    return coeffs.astype(complex), center, half_width, complex(np.exp(-1j * dt * center))


def expm_chebyshev(
    matvec: Callable[[np.ndarray], np.ndarray],
    v: np.ndarray,
    dt: float,
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> np.ndarray:
    """exp(-i dt H) v by Chebyshev expansion; needs the spectrum of H inside [lo, hi]."""
    coeffs, center, half_width, phase = chebyshev_coefficients(dt, lo, hi, tol)
    scaled = lambda x: (matvec(x) - center * x) / half_width  # noqa: E731
    prev, cur = v, scaled(v)
    out = coeffs[0] * prev + (coeffs[1] * cur if coeffs.size > 1 else 0)
    for c in coeffs[2:]:
        prev, cur = cur, 2.0 * scaled(cur) - prev
        out = out + c * cur
    return phase * out


def spectral_interval(hI: InitialHamiltonian, hD: ProblemHamiltonian) -> tuple[float, float]:
    """Interval containing the spectrum of H_A(s) for every s in [0, 1].

    Both endpoints are positive semidefinite and H_A(s) is a convex
    combination, so [0, max(||H_I||, max H_D)] suffices; a small margin covers
    rounding.
    """
    top = max(hI.spectral_bound(), float(hD.diag_float.max()), 1.0)
    return -1e-6 * top, top * (1 + 1e-6)


def _advance(hI, hD, psi, n_total, start, stop, dt, tol):
    lo, hi = spectral_interval(hI, hD)
    coeffs, center, half_width, phase = chebyshev_coefficients(dt, lo, hi, tol)
    if _kernels is not None:
        m = hI.sparse()
        return _kernels.midpoint_steps(
            m.indptr, m.indices, m.data, hD.diag_float, psi, n_total, start, stop,
            center, half_width, coeffs, phase,
        )
    for step in range(start, stop):
        s_mid = (step + 0.5) / n_total
        psi = expm_chebyshev(_hamiltonian_matvec(hI, hD, s_mid), psi, dt, lo, hi, tol)
    return psi


# -- evolution and measurement ------------------------------------------------

def measure_pmax(psi: StateVector) -> tuple[float, tuple[int, ...]]:
    """Largest occupation-number probability and its multi-index."""
    probs = psi.probabilities()
    i = argmax_prob(probs)
    return float(probs[i]), psi.codec.decode(i)


def evolve(
    hI: InitialHamiltonian,
    hD: ProblemHamiltonian,
    psi0: StateVector,
    sched: Schedule,
    tol: float = 1e-10,
    on_checkpoint: Callable[[float, StateVector], None] | None = None,
) -> tuple[StateVector, list[TracePoint]]:
    """Midpoint-exponential integration of i d/dt psi = H_A(t/T) psi over [0, T]."""
    if hI.codec != hD.codec or psi0.codec != hI.codec:
        raise ValueError("codec mismatch between Hamiltonians and initial state")
    n = sched.steps
    dt = sched.dt
    marks: dict[int, list[float]] = {}
    for f in sched.checkpoints:
        marks.setdefault(round(f * n), []).append(f)

    trace: list[TracePoint] = []

    def record(step: int, amps: np.ndarray):
        state = StateVector(psi0.codec, amps)
        p, idx = measure_pmax(state)
        nrm = state.norm
        for f in marks.get(step, ()):
            trace.append(TracePoint(f * sched.T, p, idx, nrm))
            if on_checkpoint is not None:
                on_checkpoint(f, state)
        if abs(nrm - 1.0) > NORM_ABORT:
            raise IntegrationError(
                f"norm drift {abs(nrm - 1.0):.3e} at step {step}/{n} (dt={dt:.4g}); "
                "reduce the step size or the Krylov tolerance"
            )

    psi = psi0.amps.copy()
    if 0 in marks:
        record(0, psi)
    stops = sorted(m for m in marks if m > 0)
    if not stops or stops[-1] != n:
        stops.append(n)
    start = 0
    for stop in stops:
        psi = _advance(hI, hD, psi, n, start, stop, dt, tol)
        if stop in marks:
            record(stop, psi)
        start = stop
    final = StateVector(psi0.codec, psi)
    drift = abs(final.norm - 1.0)
    if drift > NORM_ABORT:
        raise IntegrationError(f"final norm drift {drift:.3e} (dt={dt:.4g})")
    return final, trace


# -- dense diagnostics --------------------------------------------------------

@dataclass
class GapTrace:
    grid: list[float]
    e0: list[float]
    e1: list[float]

    @property
    def gaps(self) -> list[float]:
        return [b - a for a, b in zip(self.e0, self.e1)]

    @property
    def min_gap(self) -> float:
        return min(self.gaps)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "e0", "e1", "gap"])
        for s, a, b, g in zip(self.grid, self.e0, self.e1, self.gaps):
            w.writerow([repr(float(s)), repr(float(a)), repr(float(b)), repr(float(g))])
        return buf.getvalue()


def _spectrum(hI, hD, s, cap=DENSE_CAP):
    if s == 1:
        if hD.codec.total > cap:
            materialize_dense(hI, hD, s, cap)  # raises
        order = np.argsort(hD.diag_float, kind="stable")
        evecs = np.eye(hD.codec.total, dtype=complex)[:, order]
        return hD.diag_float[order], evecs
    return np.linalg.eigh(materialize_dense(hI, hD, s, cap))


def gap_scan(hI: InitialHamiltonian, hD: ProblemHamiltonian, grid: Sequence[float], cap: int = DENSE_CAP) -> GapTrace:
    """Two lowest eigenvalues of the dense H_A(s) at each grid point."""
    if hI.codec.total < 2:
        raise ValueError("need at least two levels for a gap")
    e0, e1 = [], []
    for s in grid:
        if s == 1:
            evals = _spectrum(hI, hD, 1.0, cap)[0]
        else:
            evals = np.linalg.eigvalsh(materialize_dense(hI, hD, s, cap))
        e0.append(float(evals[0]))
        e1.append(float(evals[1]))
    return GapTrace([float(s) for s in grid], e0, e1)


def ground_state(hI: InitialHamiltonian, hD: ProblemHamiltonian, s: float, cap: int = DENSE_CAP) -> tuple[float, StateVector]:
    evals, evecs = _spectrum(hI, hD, s, cap)
    return float(evals[0]), StateVector(hI.codec, evecs[:, 0])


def ground_multiplicity(hI, hD, s: float, tol: float = DEGENERACY_TOL, cap: int = DENSE_CAP) -> int:
    evals = _spectrum(hI, hD, s, cap)[0]
    return int(np.sum(evals - evals[0] <= tol))


def excited_populations(hI, hD, s: float, psi: StateVector, tol: float = DEGENERACY_TOL) -> tuple[float, float]:
    """(total, largest single level) population outside the ground eigenspace of H_A(s)."""
    evals, evecs = _spectrum(hI, hD, s)
    weights = np.abs(evecs.conj().T @ psi.amps) ** 2
    excited = weights[evals - evals[0] > tol]
    if excited.size == 0:
        return 0.0, 0.0
    return float(excited.sum()), float(excited.max())


# -- the halting loop ---------------------------------------------------------

@dataclass
class DecideConfig:
    d: int = 32
    params: Sequence[complex] | None = None
    T0: float = 10.0
    T_growth: float = 2.0
    T_cap: float = 1e4
    steps_per_unit_time: float = 20.0
    tol: float = 1e-10
    monitor_excited: bool = True

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if not self.T0 > 0:
            raise ValueError("T0 must be positive")
        if not self.T_growth > 1:
            raise ValueError("T growth factor must exceed 1")
        if self.steps_per_unit_time <= 0:
            raise ValueError("steps_per_unit_time must be positive")


@dataclass
class RunReport:
    verdict: Verdict
    witness: tuple[int, ...] | None
    p_max_trace: list[TracePoint]
    final_T: float
    box: tuple[int, int]
    degeneracy_flag: bool
    norm_drift: float
    attempts: list[dict] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "p_max_trace": [
                {"t": tp.t, "p_max": tp.p_max, "argmax": list(tp.argmax), "norm": tp.norm}
                for tp in self.p_max_trace
            ],
            "final_T": self.final_T,
            "box": {"k": self.box[0], "d": self.box[1]},
            "degeneracy_flag": self.degeneracy_flag,
            "norm_drift": self.norm_drift,
            "attempts": self.attempts,
            "diagnostics": self.diagnostics,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, obj: dict | str) -> "RunReport":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            verdict=Verdict(obj["verdict"]),
            witness=tuple(obj["witness"]) if obj["witness"] is not None else None,
            p_max_trace=[
                TracePoint(tp["t"], tp["p_max"], tuple(tp["argmax"]), tp["norm"])
                for tp in obj["p_max_trace"]
            ],
            final_T=obj["final_T"],
            box=(obj["box"]["k"], obj["box"]["d"]),
            degeneracy_flag=obj["degeneracy_flag"],
            norm_drift=obj["norm_drift"],
            attempts=obj.get("attempts", []),
            diagnostics=obj.get("diagnostics", {}),
        )

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "p_max", "argmax", "norm"])
        for tp in self.p_max_trace:
            w.writerow([repr(float(tp.t)), repr(float(tp.p_max)), ";".join(map(str, tp.argmax)), repr(float(tp.norm))])
        return buf.getvalue()


def read_trace_csv(text: str) -> list[TracePoint]:
    rows = csv.DictReader(io.StringIO(text))
    return [
        TracePoint(float(r["t"]), float(r["p_max"]), tuple(int(x) for x in r["argmax"].split(";")), float(r["norm"]))
        for r in rows
    ]


def check_params(params: Sequence[complex], algebra: AlgebraKind) -> None:
    bound = SU11_MIN_MODULUS if algebra is AlgebraKind.SU11 else WH_MIN_MODULUS
    for c in params:
        if not abs(complex(c)) > bound:
            raise HaltingBoundError(
                f"|{complex(c)}| <= {bound:.4g}: initial P_max could exceed 1/2, "
                f"so the halting test is unsound for algebra {algebra.value}"
            )


def resolve_params(params: Sequence[complex] | None, algebra: AlgebraKind, k: int) -> tuple[complex, ...]:
    """Default and broadcast coherent-state parameters to k modes."""
    if params is None or len(params) == 0:
        params = [DEFAULT_PARAM[algebra]]
    params = tuple(complex(c) for c in params)
    if len(params) == 1:
        params = params * k
    if len(params) != k:
        raise ValueError(f"got {len(params)} parameters for {k} variables")
    return params


def decide(p: Polynomial, algebra: AlgebraKind | str, cfg: DecideConfig | None = None) -> RunReport:
    """Run the adiabatic halting loop and return a verdict on D = 0.

    Each attempt restarts from the coherent product state. A proposed witness is
    accepted only after exact evaluation of D; runs that never reach
    P_max > 1/2 before the T cap are Inconclusive.
    """
    algebra = AlgebraKind.parse(algebra)
    cfg = cfg or DecideConfig()
    params = resolve_params(cfg.params, algebra, p.k)
    check_params(params, algebra)
    codec = build_codec(p.k, cfg.d)
    box = (codec.k, codec.d)
    base_diag = {"algebra": algebra.value, "params": [[c.real, c.imag] for c in params],
                 "polynomial": p.to_json()}

    if p.is_zero:
        witness = (0,) * p.k
        return RunReport(Verdict.SOLUTION_EXISTS, witness, [], 0.0, box, True, 0.0,
                         diagnostics={**base_diag, "short_circuit": "zero polynomial"})

    hD = build_problem_hamiltonian(p, codec)
    hI = build_initial_hamiltonian(params, algebra, codec)
    psi0 = build_initial_state(params, algebra, codec)
    p0, idx0 = measure_pmax(psi0)
    degenerate = hD.ground_degenerate
    dense_ok = codec.total <= DENSE_CAP and cfg.monitor_excited

    attempts: list[dict] = []
    trace: list[TracePoint] = []
    max_drift = 0.0
    T = float(cfg.T0)
    verdict, witness = Verdict.INCONCLUSIVE, None
    while T <= cfg.T_cap:
        sched = Schedule.for_time(T, cfg.steps_per_unit_time)
        excited = {"total": 0.0, "single": 0.0}

        def monitor(f, state):
            if dense_ok:
                tot, single = excited_populations(hI, hD, f, state)
                excited["total"] = max(excited["total"], tot)
                excited["single"] = max(excited["single"], single)

        final, trace = evolve(hI, hD, psi0, sched, cfg.tol, on_checkpoint=monitor)
        drift = abs(final.norm - 1.0)
        max_drift = max(max_drift, drift)
        pmax, idx = measure_pmax(final)
        attempt = {"T": T, "steps": sched.steps, "p_max": pmax, "argmax": list(idx), "norm_drift": drift}
        if dense_ok:
            attempt["max_excited_population"] = excited["total"]
            attempt["max_single_excited_population"] = excited["single"]
        attempts.append(attempt)
        log.info("T=%g P_max=%.6f at %s", T, pmax, idx)
        if pmax > 0.5:
            witness = idx
            verdict = Verdict.SOLUTION_EXISTS if evaluate(p, idx) == 0 else Verdict.NO_SOLUTION
            break
        T *= cfg.T_growth

    final_T = attempts[-1]["T"] if attempts else 0.0
    return RunReport(
        verdict=verdict,
        witness=witness,
        p_max_trace=trace,
        final_T=final_T,
        box=box,
        degeneracy_flag=degenerate,
        norm_drift=max_drift,
        attempts=attempts,
        diagnostics={**base_diag, "initial_p_max": p0, "initial_argmax": list(idx0),
                     "hd_min": str(hD.min_value), "hd_minimizers": len(hD.minimizers())},
    )
