"""Compiled inner loops (numba) with pure-numpy fallbacks.

Everything here is plumbing for the heavy generators: divisor-power sieves
for Eisenstein series and Dirichlet convolution of coefficient arrays.  The
fallbacks keep small-scale use (tests, M <= 1e5) working even if the JIT is
unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _sigma_pow_jit(M, k):
    out = np.zeros(M + 1, dtype=np.float64)
    for d in range(1, M + 1):
        dk = float(d) ** k
        for n in range(d, M + 1, d):
            out[n] += dk
    return out


def sigma_pow_float(M, k):
    """sigma_k(n) = sum of d^k over d|n, as float64 for n = 0..M (0 at n=0)."""
    M = int(M)
    if _HAVE_NUMBA and M > 200_000:
        return _sigma_pow_jit(M, int(k))
    out = np.zeros(M + 1, dtype=np.float64)
    for d in range(1, M + 1):
        out[d::d] += float(d) ** k
    return out


def sigma_pow_exact(M, k):
    """Exact integer sigma_k(n) for n = 0..M as a Python list."""
    out = [0] * (M + 1)
    for d in range(1, M + 1):
        dk = d**k
        for n in range(d, M + 1, d):
            out[n] += dk
    return out


@njit(cache=True)
def _dirichlet_convolve_jit(a, b):
    M = a.shape[0] - 1
    out = np.zeros(M + 1, dtype=np.complex128)
    for d in range(1, M + 1):
        ad = a[d]
        if ad == 0:
            continue
        for q in range(1, M // d + 1):
            out[d * q] += ad * b[q]
    return out


def dirichlet_convolve(a, b):
    """Dirichlet convolution c[m] = sum_{d|m} a[d] b[m/d].

    Inputs are complex arrays indexed 0..M with index 0 unused (kept zero).
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("arrays must share truncation length")
    if _HAVE_NUMBA and a.shape[0] > 5000:
        return _dirichlet_convolve_jit(a, b)
    M = a.shape[0] - 1
    out = np.zeros(M + 1, dtype=np.complex128)
    for d in range(1, M + 1):
        if a[d] != 0:
            q = np.arange(1, M // d + 1)
            out[d * q] += a[d] * b[q]
    return out
