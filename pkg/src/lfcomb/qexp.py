"""q-expansions of the level-1 cusp forms, exact and large-scale float.

The unique normalized cusp forms in weights 12, 16, 18, 20, 22, 26 are built
from the discriminant form and the Eisenstein series E4, E6:

    weight 12: Delta = q prod (1-q^n)^24
    weight 16: Delta*E4        weight 18: Delta*E6
    weight 20: Delta*E4^2      weight 22: Delta*E4*E6
    weight 26: Delta*E4^2*E6

Two engines:

* exact: coefficients as Python integers.  Delta comes from Jacobi's
  identity prod(1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}; the sparse cube
  is squared to a dense array and then squared twice more via Kronecker
  substitution (each polynomial packed into one big integer, multiplied by
  gmpy2/GMP, unpacked).  Exact arithmetic end to end; floats appear only
  when the caller normalizes.

* float64: the same ladder through scipy's fftconvolve.  The FFT error is
  absolute (it scales with the largest coefficients, not the local ones),
  so small-index coefficients are garbage; callers must discard indices
  below a validated floor.  `hybrid_coefficients` splices the exact
  zone over the float zone and is the supported entry point for large M.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import fftconvolve

from .fastops import sigma_pow_exact, sigma_pow_float

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover
    _mpz = int

SUPPORTED_WEIGHTS = (12, 16, 18, 20, 22, 26)

# n <= EXACT_FLOOR always comes from the exact engine in hybrid tables; above
# it the float ladder's absolute FFT error is negligible relative to n^(k-1)/2
# growth (validated in tests against the exact engine at the boundary).
EXACT_FLOOR = 1_000_000


def _pack_signed(coeffs, width):
    pos = bytearray(len(coeffs) * width)
    neg = bytearray(len(coeffs) * width)
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * width : (i + 1) * width] = int(c).to_bytes(width, "little")
        elif c < 0:
            neg[i * width : (i + 1) * width] = int(-c).to_bytes(width, "little")
    return _mpz(int.from_bytes(bytes(pos), "little")), _mpz(
        int.from_bytes(bytes(neg), "little")
    )


def _unpack_unsigned(z, count, width):
    z = int(z)
    raw = z.to_bytes((z.bit_length() + 7) // 8 + width, "little")
    need = count * width
    if len(raw) < need:
        raw += b"\0" * (need - len(raw))
    return [int.from_bytes(raw[i * width : (i + 1) * width], "little") for i in range(count)]


def poly_mul_exact(a, b, M, width):
    """c = a*b truncated to degree M, exact integers.

    Kronecker substitution at x = 2^(8*width); `width` bytes must fit every
    coefficient of |a|*|b|*(M+1) (column sums of one sign class).
    """
    ap, an = _pack_signed(a, width)
    bp, bn = _pack_signed(b, width)
    pos = ap * bp + an * bn
    neg = ap * bn + an * bp
    P = _unpack_unsigned(pos, M + 1, width)
    N = _unpack_unsigned(neg, M + 1, width)
    return [p - n for p, n in zip(P, N)]


def eta3_coeffs(M):
    """prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}, dense to degree M."""
    out = [0] * (M + 1)
    k = 0
    while k * (k + 1) // 2 <= M:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _eta6_exact(M):
    J = eta3_coeffs(M)
    nz = [(i, c) for i, c in enumerate(J) if c]
    out = [0] * (M + 1)
    for i, ci in nz:
        for j, cj in nz:
            if i + j > M:
                break
            out[i + j] += ci * cj
    return out


def delta_coeffs_exact(M):
    """tau(n) for n = 1..M as exact integers (index 0 unused, zero)."""
    M = int(M)
    J2 = _eta6_exact(M)
    # widths: |eta^12| ~ n^{5/2+eps}, |eta^24| ~ n^{11/2+eps}; 16/32 bytes
    # hold the packed column sums comfortably up to M = 2e6.
    if M > 2_000_000:
        raise ValueError("exact engine capped at M = 2e6; use hybrid_coefficients")
    J4 = poly_mul_exact(J2, J2, M, 16)
    J8 = poly_mul_exact(J4, J4, M, 32)
    tau = [0] * (M + 1)
    for n in range(1, M + 1):
        tau[n] = J8[n - 1]
    return tau


def eisenstein_exact(weight, M):
    """Integer q-expansion of E4 or E6 to degree M."""
    if weight == 4:
        mult, k = 240, 3
    elif weight == 6:
        mult, k = -504, 5
    else:
        raise ValueError("only E4 and E6 are needed here")
    sig = sigma_pow_exact(M, k)
    out = [mult * s for s in sig]
    out[0] = 1
    return out


def cusp_form_coeffs_exact(weight, M):
    """a(n), n = 0..M, of the normalized weight-`weight` level-1 cusp form."""
    if weight not in SUPPORTED_WEIGHTS:
        raise ValueError(f"unsupported weight {weight}; choose from {SUPPORTED_WEIGHTS}")
    M = int(M)
    a = delta_coeffs_exact(M)
    # tau values ~ n^{11/2}; each E4/E6 multiplication adds ~n^{weight gap}
    # growth, widths sized for M <= 2e6.
    if weight == 12:
        return a
    if weight in (16, 20, 26):
        e4 = eisenstein_exact(4, M)
        a = poly_mul_exact(a, e4, M, 48)
        if weight in (20, 26):
            a = poly_mul_exact(a, e4, M, 48)
        if weight == 26:
            a = poly_mul_exact(a, eisenstein_exact(6, M), M, 64)
        return a
    # weights 18, 22
    e6 = eisenstein_exact(6, M)
    a = poly_mul_exact(a, e6, M, 48)
    if weight == 22:
        a = poly_mul_exact(a, eisenstein_exact(4, M), M, 64)
    return a


def _delta_coeffs_float(M):
    J = np.zeros(M + 1)
    k = 0
    while k * (k + 1) // 2 <= M:
        J[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    nz = np.flatnonzero(J)
    idx = (nz[:, None] + nz[None, :]).ravel()
    w = (J[nz][:, None] * J[nz][None, :]).ravel()
    keep = idx <= M
    J2 = np.bincount(idx[keep], weights=w[keep], minlength=M + 1)[: M + 1]
    J4 = fftconvolve(J2, J2)[: M + 1]
    J8 = fftconvolve(J4, J4)[: M + 1]
    tau = np.zeros(M + 1)
    tau[1:] = J8[:M]
    return tau


def _eisenstein_float(weight, M):
    if weight == 4:
        mult, k = 240.0, 3
    else:
        mult, k = -504.0, 5
    e = mult * sigma_pow_float(M, k)
    e[0] = 1.0
    return e


def cusp_form_coeffs_float(weight, M):
    """Float64 a(n) ladder; only trustworthy above the FFT error floor."""
    if weight not in SUPPORTED_WEIGHTS:
        raise ValueError(f"unsupported weight {weight}")
    a = _delta_coeffs_float(int(M))
    if weight in (16, 20, 26):
        e4 = _eisenstein_float(4, M)
        a = fftconvolve(a, e4)[: M + 1]
        if weight in (20, 26):
            a = fftconvolve(a, e4)[: M + 1]
        if weight == 26:
            a = fftconvolve(a, _eisenstein_float(6, M))[: M + 1]
    elif weight in (18, 22):
        a = fftconvolve(a, _eisenstein_float(6, M))[: M + 1]
        if weight == 22:
            a = fftconvolve(a, _eisenstein_float(4, M))[: M + 1]
    return a


def normalized_lambda_exact(weight, M):
    """lambda(n) = a(n) n^{-(weight-1)/2} as float64, from exact integers."""
    a = cusp_form_coeffs_exact(weight, M)
    n = np.arange(M + 1, dtype=np.float64)
    n[0] = 1.0
    out = np.fromiter((float(c) for c in a), dtype=np.float64, count=M + 1)
    return out / n ** ((weight - 1) / 2.0)


def hybrid_coefficients(weight, M, exact_floor=EXACT_FLOOR):
    """Normalized lambda(n), n = 0..M: exact below the floor, float above.

    The float ladder's absolute error (~1e25 on tau at M = 1e7) divided by
    n^{(weight-1)/2} is < 1e-7 for n > 1e6, so the splice point keeps every
    returned value accurate to better than 1e-7 absolute.
    """
    M = int(M)
    floor = min(int(exact_floor), M)
    lam = np.empty(M + 1, dtype=np.float64)
    lam[: floor + 1] = normalized_lambda_exact(weight, floor)
    if M > floor:
        a = cusp_form_coeffs_float(weight, M)
        n = np.arange(M + 1, dtype=np.float64)
        n[0] = 1.0
        lam_f = a / n ** ((weight - 1) / 2.0)
        lam[floor + 1 :] = lam_f[floor + 1 :]
    return lam
