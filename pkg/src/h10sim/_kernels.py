"""Compiled Chebyshev propagator for H(s) = (1-s) H_I + s diag(H_D), with H_I in
CSR form. Same expansion as ``adiabatic.expm_chebyshev`` without the per-call
Python overhead that dominates at small dimension.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _csr_diag_matvec(indptr, indices, data, diag, x, out):
    for r in range(x.size):
        acc = diag[r] * x[r]
        for p in range(indptr[r], indptr[r + 1]):
            acc += data[p] * x[indices[p]]
        out[r] = acc


@njit(cache=True)
def chebyshev_step(indptr, indices, data, diag, s, center, half_width, coeffs, phase, v):
    """phase * sum_k coeffs[k] T_k((H(s) - center)/half_width) v."""
    n = v.size
    # scaled operator ((1-s) H_I + s D - center) / half_width
    sdata = data * ((1.0 - s) / half_width)
    sdiag = (s * diag - center) / half_width
    prev = v.copy()
    cur = np.empty(n, dtype=np.complex128)
    nxt = np.empty(n, dtype=np.complex128)
    _csr_diag_matvec(indptr, indices, sdata, sdiag, prev, cur)
    out = coeffs[0] * prev + coeffs[1] * cur
    for k in range(2, coeffs.size):
        _csr_diag_matvec(indptr, indices, sdata, sdiag, cur, nxt)
        ck = coeffs[k]
        for r in range(n):
            t = 2.0 * nxt[r] - prev[r]
            nxt[r] = t
            out[r] += ck * t
        prev, cur, nxt = cur, nxt, prev
    return phase * out


@njit(cache=True)
def midpoint_steps(indptr, indices, data, diag, psi, n_total, start, stop, center, half_width, coeffs, phase):
    """Advance psi over steps [start, stop) of an n_total-step midpoint schedule."""
    for step in range(start, stop):
        s = (step + 0.5) / n_total
        psi = chebyshev_step(indptr, indices, data, diag, s, center, half_width, coeffs, phase, psi)
    return psi
