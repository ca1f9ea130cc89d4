"""Truncated Dirichlet series, local logarithms, and Euler-product logs.

Every operation returns a value together with a TailBound that dominates the
omitted mass.  Bounds in use:

* 'rankin': sum_{m>M} |lambda(m)| m^{-sigma} <= M^{sigma'-sigma} zeta(sigma')^r
  minimized over a grid of sigma' in (1, sigma), with zeta(sigma') itself
  replaced by a certified upper bound.
* 'abel': for nonprincipal degree-1 characters, partial summation against
  bounded character sums gives |tail| <= (phi(q)/2) |s|/sigma M^{-sigma}.
* 'integral': integral comparison for positive terms, and the
  Rosser-Schoenfeld prime-sum tail for products over primes.
* 'geometric': truncation of a local logarithm's power series in p^{-s}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lfdata
from . import primes as pr


@dataclass(frozen=True)
class EvalPoint:
    """A point s = sigma + i t of the half-plane under study."""

    sigma: float
    t: float = 0.0

    @property
    def s(self):
        return complex(self.sigma, self.t)


def _as_complex(s):
    if isinstance(s, EvalPoint):
        return s.s
    return complex(s)


@dataclass
class TailBound:
    value: float
    method: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("tail bound must be nonnegative")

    def __add__(self, other):
        if isinstance(other, TailBound):
            return TailBound(self.value + other.value, "sum", {"of": (self.method, other.method)})
        return TailBound(self.value + float(other), self.method, self.params)


_RANKIN_GRID = np.geomspace(0.02, 0.98, 16)


def rankin_tail(M, sigma, degree):
    """Certified bound for sum_{m>M} d_r(m) m^{-sigma}, r = degree."""
    if sigma <= 1.0:
        raise ValueError("rankin tail needs sigma > 1")
    best = math.inf
    best_sp = None
    for g in _RANKIN_GRID:
        sp = 1.0 + (sigma - 1.0) * float(g)
        val = M ** (sp - sigma) * pr.zeta_upper_bound(sp) ** degree
        if val < best:
            best, best_sp = val, sp
    return TailBound(best, "rankin", {"M": M, "sigma_prime": best_sp, "degree": degree})


def dirichlet_sum(table, s, M=None, spec=None):
    """(sum_{m<=M} lambda(m) m^{-s}, tail bound), requires Re(s) > 1."""
    s = _as_complex(s)
    sigma = s.real
    if sigma <= 1.0:
        raise ValueError("dirichlet_sum requires sigma > 1")
    M = table.M if M is None else int(M)
    if M > table.M:
        raise ValueError("M beyond table truncation")
    lam = table.values_upto(M)
    m = np.arange(M + 1, dtype=np.float64)
    m[0] = 1.0
    value = complex(np.sum(lam[1:] * m[1:] ** (-s)))
    degree = getattr(table, "degree", 1)
    bound = rankin_tail(M, sigma, degree)
    if degree == 1 and table.period_values is not None and len(table.period_values) > 1:
        is_principal = bool(
            np.allclose(
                table.period_values[np.abs(table.period_values) > 0.5], 1.0, atol=1e-12
            )
        )
        if not is_principal:
            q_phi = int(np.sum(np.abs(table.period_values) > 0.5))
            abel = TailBound(
                (q_phi / 2.0) * abs(s) / sigma * M ** (-sigma),
                "abel",
                {"M": M, "phi(q)": q_phi},
            )
            if abel.value < bound.value:
                bound = abel
    if degree == 1 and table.period_values is not None:
        integral = TailBound(M ** (1.0 - sigma) / (sigma - 1.0), "integral", {"M": M})
        if integral.value < bound.value:
            bound = integral
    return value, bound


def default_kmax(p):
    """Series length making the local tail < 2^-64 at sigma >= 1."""
    return max(1, math.ceil(64.0 / math.log2(p)))


def local_log(factor, s, kmax=None):
    """log L_p(s) = sum_{k<=kmax} (sum_l alpha_l^k)/k p^{-ks}, plus tail bound."""
    s = _as_complex(s)
    sigma = s.real
    if sigma < 1.0:
        raise ValueError("local_log requires sigma >= 1")
    p = factor.prime
    roots = factor.roots
    if not roots:
        return 0j, TailBound(0.0, "geometric", {"p": p})
    amax = max(abs(a) for a in roots)
    x_abs = amax * p ** (-sigma)
    if x_abs >= 1.0:
        raise ValueError("local series diverges: |alpha| p^-sigma >= 1")
    kmax = default_kmax(p) if kmax is None else int(kmax)
    r = len(roots)
    ps = p ** (-s)
    total = 0j
    alpha_pow = [complex(a) for a in roots]
    x = ps
    for k in range(1, kmax + 1):
        power_sum = sum(alpha_pow)
        total += power_sum / k * x
        x *= ps
        alpha_pow = [ap * a for ap, a in zip(alpha_pow, roots)]
    q = max(x_abs, p ** (-sigma))
    tail = r * q ** (kmax + 1) / ((kmax + 1) * (1.0 - q))
    return total, TailBound(tail, "geometric", {"p": p, "kmax": kmax})


def product_log_tail(P, sigma, degree):
    """Bound on |sum_{p>P} log L_p(sigma+it)| for Ramanujan-normalized input."""
    t1 = pr.prime_power_sum_tail(P, sigma)
    t2 = pr.prime_power_sum_tail(P, 2.0 * sigma)
    return TailBound(
        degree * t1 + degree * t2 / (2.0 * (1.0 - 2.0 ** (-sigma))),
        "integral",
        {"P": P, "sigma": sigma},
    )


def euler_log_product(spec, table, s, prange, shifts=None, tail=True):
    """sum_{y_lo < p <= y_hi} log L_p(sigma + i(t + t_p)), with tail bound.

    `shifts` maps p -> t_p (default 0 everywhere); the tail bound covers
    p > y_hi and the per-prime series truncations.
    """
    s = _as_complex(s)
    sigma = s.real
    y_lo, y_hi = prange
    if sigma <= 1.0 and tail:
        raise ValueError("tail bound over p > y_hi requires sigma > 1")
    shifts = shifts or {}
    total = 0j
    trunc = 0.0
    for block in pr.prime_blocks(y_lo, y_hi):
        for p in block:
            p = int(p)
            if p > table.M and table.period_values is None:
                raise ValueError(f"table too short for p = {p}")
            factor = lfdata.euler_factor(spec, table, p)
            tp = float(shifts.get(p, 0.0))
            val, tb = local_log(factor, complex(sigma, s.imag + tp))
            total += val
            trunc += tb.value
    if tail:
        bound = product_log_tail(y_hi, sigma, spec.degree) + trunc
    else:
        bound = TailBound(trunc, "geometric", {})
    return total, bound


# ---------------------------------------------------------------------------
# vectorized prime-local evaluation (the workhorse behind witness/zero search)


class PrimeLocalData:
    """Per-prime local data for one L-function over primes <= pmax.

    Stores lambda(p) and, for degree 2, the local angle theta_p with
    cos(theta_p) = lambda(p)/2, so power sums are 2 cos(k theta_p).  Degree 1
    power sums are lambda(p)^k.  Everything is float/complex vectorized.
    """

    def __init__(self, spec, pmax, use_cache=True):
        self.spec = spec
        self.pmax = int(pmax)
        if spec.kind == "external-table":
            raise ValueError("wrap external tables with explicit arrays instead")
        self.p, lam = lfdata.prime_lambda_table(spec, pmax, use_cache=use_cache)
        self.lam = lam.astype(np.complex128)
        self.logp = np.log(self.p.astype(np.float64))
        if spec.degree == 2:
            c = np.clip(self.lam.real / 2.0, -1.0, 1.0)
            self.theta = np.arccos(c)
        else:
            self.theta = None

    def _kmax_limit(self, k):
        # primes needing a k-th power-series term: p^(kmax+1) > 2^64
        return 2.0 ** (64.0 / k)

    def power_sum(self, k, idx=slice(None)):
        """sum_l alpha_{p,l}^k over the slice of primes."""
        if self.spec.degree == 2:
            return 2.0 * np.cos(k * self.theta[idx]) + 0j
        return self.lam[idx] ** k

    def log_product(self, s, tp=None, lo=0.0, hi=None, kmin=1):
        """sum over primes in (lo, hi] of sum_{k>=kmin} ps_k/k p^{-k(s + i t_p)}.

        Returns (value, truncation bound).  `tp` is an array aligned with
        self.p (zeros if None).  kmin=2 gives the local-log error term
        log L_p - lambda(p) p^{-s} used by the witness solver.
        """
        s = _as_complex(s)
        hi = self.pmax if hi is None else hi
        i0, i1 = np.searchsorted(self.p, [lo, hi], side="right")
        if i0 == i1:
            return 0j, 0.0
        p = self.p[i0:i1].astype(np.float64)
        logp = self.logp[i0:i1]
        tpv = None if tp is None else np.asarray(tp)[i0:i1]
        total = 0j
        k = kmin
        trunc = 0.0
        while True:
            limit = self._kmax_limit(k)
            n = int(np.searchsorted(p, limit, side="right"))
            if n == 0:
                break
            ps_k = self.power_sum(k, slice(i0, i0 + n))
            phase = -k * s.imag * logp[:n]
            if tpv is not None:
                phase = phase - k * tpv[:n] * logp[:n]
            term = ps_k * np.exp(-k * s.real * logp[:n] + 1j * phase)
            total += complex(np.sum(term))
            k += 1
            if k > 64:
                break
        # per-prime geometric tails: each p truncated at kmax(p) with
        # (kmax+1) log2 p >= 64
        trunc = self.spec.degree * len(p) * 2.0 ** (-64.0 * s.real) / (1.0 - 0.5)
        return total, trunc

    def lambda_weighted_sum(self, sigma, unit_factors=None, lo=0.0, hi=None):
        """sum over (lo, hi] of lambda(p) u_p p^{-sigma} (u_p unimodular)."""
        hi = self.pmax if hi is None else hi
        i0, i1 = np.searchsorted(self.p, [lo, hi], side="right")
        w = self.p[i0:i1].astype(np.float64) ** (-float(sigma))
        vals = self.lam[i0:i1] * w
        if unit_factors is not None:
            vals = vals * np.asarray(unit_factors)[i0:i1]
        return complex(np.sum(vals))


def exp_with_error(log_value, log_error):
    """(exp(v), bound on |exp(v + e) - exp(v)| for |e| <= log_error)."""
    val = np.exp(log_value)
    err = abs(val) * (math.expm1(log_error) if log_error < 700 else math.inf)
    return val, err
