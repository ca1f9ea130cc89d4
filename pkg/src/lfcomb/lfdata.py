"""L-function identities and their Dirichlet coefficients.

Supported families:

* Dirichlet characters mod q (degree 1).  The unit group (Z/q)* is split
  into cyclic factors by CRT; each factor carries a fixed generator (least
  primitive root for odd prime powers; -1 and 5 for 2^e, e >= 3; 3 for 4).
  Character number `index` is the mixed-radix digit vector (k_1, ..., k_r)
  over the factor orders (s_1, ..., s_r), little-endian in the factor order
  listed by `unit_group`, and sends the i-th generator to e(k_i / s_i).
  Index 0 is the principal character.  This convention is frozen: tables,
  files and reports all refer to it.

* Level-1 holomorphic newforms of weight k in {12, 16, 18, 20, 22, 26}
  (degree 2, conductor 1), Ramanujan-normalized: lambda(m) = a(m) m^{-(k-1)/2}.

* External tables loaded from coefficient files; these must carry their
  Euler roots explicitly since ramified local factors cannot be inferred.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import primes as pr
from . import qexp

RAMANUJAN_SLACK = 1e-9


class TableError(ValueError):
    """A coefficient table violates its invariants."""


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class LFunctionSpec:
    kind: str  # 'dirichlet-character' | 'level1-newform' | 'external-table'
    degree: int
    conductor: int
    label: str
    modulus: int = 0
    index: int = 0
    weight: int = 0
    source: str = ""

    def __post_init__(self):
        if self.degree < 1 or self.conductor < 1:
            raise ValueError("degree and conductor must be positive")
        if self.kind == "dirichlet-character" and self.degree != 1:
            raise ValueError("character L-functions have degree 1")
        if self.kind == "level1-newform" and (self.degree, self.conductor) != (2, 1):
            raise ValueError("level-1 newforms have degree 2, conductor 1")


def character_spec(modulus, index):
    chi = DirichletCharacter(modulus, index)
    return LFunctionSpec(
        kind="dirichlet-character",
        degree=1,
        conductor=chi.conductor,
        label=f"chi_{modulus}_{index}",
        modulus=int(modulus),
        index=int(index),
    )


def newform_spec(weight):
    if weight not in qexp.SUPPORTED_WEIGHTS:
        raise ValueError(f"unsupported weight {weight}")
    return LFunctionSpec(
        kind="level1-newform",
        degree=2,
        conductor=1,
        label=f"f{weight}",
        weight=int(weight),
    )


# ---------------------------------------------------------------------------
# Dirichlet characters


def _primitive_root(p, e):
    """Least primitive root mod p^e for odd prime p."""
    phi = p - 1
    fac = []
    m = phi
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.append(m)
    g = 2
    while True:
        if all(pow(g, phi // f, p) != 1 for f in fac):
            break
        g += 1
    if e == 1:
        return g
    # lift: g works mod p^e unless g^(p-1) = 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _factorize(q):
    out = []
    m = q
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def unit_group(q):
    """Cyclic decomposition of (Z/q)*: list of (generator mod q, order).

    The 2-part factors come first, then odd primes in ascending order.
    Generators are lifted to mod q by CRT (congruent to 1 at other factors).
    """
    q = int(q)
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if q == 1:
        return []
    fac = _factorize(q)
    local = []  # (prime_power, [(gen mod p^e, order)])
    for p, e in fac:
        pe = p**e
        if p == 2:
            if e == 1:
                gens = []
            elif e == 2:
                gens = [(3, 2)]
            else:
                gens = [(pe - 1, 2), (5, 2 ** (e - 2))]
        else:
            gens = [(_primitive_root(p, e), pe // p * (p - 1))]
        local.append((pe, gens))
    out = []
    for pe, gens in local:
        rest = q // pe
        for g, order in gens:
            # CRT lift: = g mod pe, = 1 mod rest
            if rest == 1:
                out.append((g % q, order))
            else:
                inv = pow(pe, -1, rest)
                lifted = (g + pe * ((1 - g) * inv % rest)) % q
                out.append((lifted, order))
    return out


class DirichletCharacter:
    """One character mod q under the frozen CRT indexing convention."""

    def __init__(self, modulus, index):
        q = int(modulus)
        if q < 1:
            raise ValueError("modulus must be >= 1")
        gens = unit_group(q)
        orders = [s for _, s in gens]
        phi = 1
        for s in orders:
            phi *= s
        index = int(index)
        if not 0 <= index < phi:
            raise ValueError(f"character index {index} out of range for phi({q}) = {phi}")
        digits = []
        rem = index
        for s in orders:
            digits.append(rem % s)
            rem //= s
        self.modulus = q
        self.index = index
        self.phi = phi
        self.exponents = tuple(digits)
        self._values = self._build_values(gens, orders, digits)
        self.conductor = self._conductor()

    def _build_values(self, gens, orders, digits):
        q = self.modulus
        values = np.zeros(q if q > 1 else 1, dtype=np.complex128)
        residues = [1 % q]
        phases = [0.0]
        for (g, s), k in zip(gens, digits):
            new_r, new_ph = [], []
            step = k / s  # chi(g) = e(k/s)
            for r, ph in zip(residues, phases):
                cur_r, cur_ph = r, ph
                for _ in range(s):
                    new_r.append(cur_r)
                    new_ph.append(cur_ph)
                    cur_r = (cur_r * g) % q
                    cur_ph += step
            residues, phases = new_r, new_ph
        ph = np.asarray(phases)
        vals = np.exp(2j * np.pi * (ph % 1.0))
        # snap near-exact roots of unity arising from half/quarter phases
        vals[np.abs(vals.real) < 1e-15] = 1j * vals.imag[np.abs(vals.real) < 1e-15]
        vals[np.abs(vals.imag) < 1e-15] = vals.real[np.abs(vals.imag) < 1e-15]
        values[np.asarray(residues) % max(q, 1)] = vals
        if q == 1:
            values[0] = 1.0
        return values

    def _conductor(self):
        # smallest f | q with chi factoring through (Z/f)*: test each divisor
        q = self.modulus
        if q == 1:
            return 1
        divisors = [d for d in range(1, q + 1) if q % d == 0]
        units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
        for f in divisors:
            ok = True
            for a in units:
                if (a - 1) % f == 0 and abs(self._values[a % q] - 1.0) > 1e-12:
                    ok = False
                    break
            if ok:
                return f
        return q

    def __call__(self, m):
        m = int(m)
        if self.modulus == 1:
            return 1.0 + 0j
        if math.gcd(m, self.modulus) != 1:
            return 0j
        return complex(self._values[m % self.modulus])

    def value_array(self):
        """chi on residues 0..q-1 (zero off the units)."""
        return self._values.copy()

    @property
    def is_principal(self):
        return self.index == 0


def characters(modulus):
    """All characters mod `modulus` in index order."""
    q = int(modulus)
    phi = 1
    for _, s in unit_group(q):
        phi *= s
    return [DirichletCharacter(q, i) for i in range(phi)]


def euler_phi(q):
    phi = 1
    for _, s in unit_group(int(q)):
        phi *= s
    return phi


# ---------------------------------------------------------------------------
# coefficient tables


class CoefficientTable:
    """Ramanujan-normalized Dirichlet coefficients lambda(1..M).

    Degree-1 character tables are stored by their period (values repeat mod
    q), everything else densely.  Index 0 of the dense array is unused.
    """

    def __init__(self, M, values=None, period_values=None, degree=1, explicit_roots=None):
        self.M = int(M)
        self.degree = int(degree)
        self.explicit_roots = dict(explicit_roots or {})
        if (values is None) == (period_values is None):
            raise ValueError("exactly one of values/period_values required")
        if period_values is not None:
            self.period_values = np.asarray(period_values, dtype=np.complex128)
            self.values = None
        else:
            v = np.asarray(values, dtype=np.complex128)
            if v.shape[0] != self.M + 1:
                raise ValueError("dense values must have length M+1")
            self.values = v
            self.period_values = None

    @property
    def period(self):
        return None if self.period_values is None else len(self.period_values)

    def at(self, m):
        m = int(m)
        if not 1 <= m <= self.M:
            raise IndexError(f"m = {m} outside table range 1..{self.M}")
        if self.period_values is not None:
            return complex(self.period_values[m % self.period])
        return complex(self.values[m])

    def values_upto(self, M=None):
        """Dense lambda(0..M) array (index 0 zeroed)."""
        M = self.M if M is None else int(M)
        if M > self.M:
            raise ValueError("beyond table truncation")
        if self.period_values is not None:
            idx = np.arange(M + 1) % self.period
            out = self.period_values[idx].copy()
            out[0] = 0.0
            return out
        out = self.values[: M + 1].copy()
        out[0] = 0.0
        return out

    def at_many(self, ms):
        ms = np.asarray(ms, dtype=np.int64)
        if ms.size and (ms.min() < 1 or ms.max() > self.M):
            raise IndexError("indices outside table range")
        if self.period_values is not None:
            return self.period_values[ms % self.period]
        return self.values[ms]

    def lambda_prime_power(self, p, k):
        """lambda(p^k) via the degree-2 Hecke recursion, or table lookup.

        Level-1 degree 2: lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1}).
        """
        p, k = int(p), int(k)
        if k == 0:
            return 1.0 + 0j
        if self.degree == 2:
            lam_p = self.at(p)
            prev, cur = 1.0 + 0j, lam_p
            for _ in range(k - 1):
                prev, cur = cur, lam_p * cur - prev
            return cur
        if self.degree == 1:
            return self.at(p) ** k if self.period_values is not None else self.at(p**k)
        return self.at(p**k)


def character_table(modulus, index, M):
    """Coefficient table of L(s, chi) for the indexed character mod `modulus`."""
    chi = DirichletCharacter(modulus, index)
    if chi.modulus == 1:
        return CoefficientTable(M, period_values=np.ones(1, dtype=np.complex128))
    return CoefficientTable(M, period_values=chi.value_array())


def newform_coeffs(weight, M):
    """Normalized coefficient table of the level-1 weight-`weight` newform.

    Exact integer q-expansion arithmetic, converted to float only at the
    m^{-(k-1)/2} normalization.
    """
    lam = qexp.normalized_lambda_exact(int(weight), int(M))
    return CoefficientTable(M, values=lam.astype(np.complex128), degree=2)


@dataclass
class EulerFactor:
    prime: int
    roots: tuple

    def local_value(self, s):
        """L_p(s) = 1 / prod (1 - alpha p^{-s})."""
        x = self.prime ** (-complex(s))
        den = 1.0 + 0j
        for a in self.roots:
            den *= 1.0 - a * x
        return 1.0 / den


def euler_factor(spec, table, p):
    """Local roots alpha_{p,l} of the L-function at prime p."""
    p = int(p)
    if not pr.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if spec.kind == "external-table":
        if p not in table.explicit_roots:
            raise TableError(
                f"external table carries no explicit roots at p = {p}; "
                "ramified local factors are never inferred"
            )
        roots = tuple(complex(a) for a in table.explicit_roots[p])
        lam = table.at(p) if p <= table.M else sum(roots)
        if abs(sum(roots) - lam) > 1e-9:
            raise TableError(f"explicit roots at p = {p} do not sum to lambda(p)")
        return EulerFactor(p, roots)
    if p > table.M and table.period_values is None:
        raise ValueError(f"p = {p} beyond table truncation M = {table.M}")
    lam = table.at(p) if table.period_values is None else complex(table.period_values[p % table.period])
    if abs(lam) > spec.degree + RAMANUJAN_SLACK:
        raise TableError(f"|lambda({p})| = {abs(lam):.12g} violates the Ramanujan bound")
    if spec.degree == 1:
        if lam == 0:
            return EulerFactor(p, ())
        return EulerFactor(p, (lam,))
    if spec.kind == "level1-newform":
        # x^2 - lambda x + 1: conjugate pair on the unit circle for |lambda| <= 2
        lam_r = lam.real
        disc = lam_r * lam_r - 4.0
        if disc <= 0:
            re = lam_r / 2.0
            im = math.sqrt(-disc) / 2.0
            return EulerFactor(p, (complex(re, im), complex(re, -im)))
        rt = math.sqrt(disc)  # only reachable within the 1e-9 slack of |lam| = 2
        return EulerFactor(p, ((lam_r + rt) / 2.0, (lam_r - rt) / 2.0))
    raise TableError(f"cannot derive local roots for spec kind {spec.kind!r}")


def hurwitz_decomposition(a, q):
    """(coefficient, character spec) pairs with
    sum_chi conj(chi(a))/phi(q) * L(s, chi) = sum_{n = a mod q} n^{-s},
    i.e. q^{-s} zeta(s, a/q); the q^{s} factor never vanishes so zeros match.
    """
    a, q = int(a), int(q)
    if q < 1 or a < 1:
        raise ValueError("need positive a, q")
    if math.gcd(a, q) != 1:
        raise ValueError(f"gcd({a},{q}) != 1: decomposition needs a unit residue")
    chis = characters(q)
    phi = len(chis)
    out = []
    for chi in chis:
        coeff = np.conj(chi(a)) / phi
        out.append((complex(coeff), character_spec(q, chi.index)))
    return out


# ---------------------------------------------------------------------------
# coefficient files

_HEADER = "# degree={degree} conductor={conductor} M={M} label={label}\n"


def save_coeff_table(path, spec, table):
    with open(path, "w") as fh:
        fh.write(
            _HEADER.format(
                degree=spec.degree, conductor=spec.conductor, M=table.M, label=spec.label
            )
        )
        lam = table.values_upto()
        for m in range(1, table.M + 1):
            fh.write(f"{m} {lam[m].real:.17g} {lam[m].imag:.17g}\n")


def load_coeff_table(path, expected_degree=None, expected_conductor=None):
    """Parse and validate a coefficient file.

    Rejects tables with lambda(1) != 1 or a Ramanujan violation, reporting
    the offending index.
    """
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise TableError("missing header line")
        fields = dict(part.split("=", 1) for part in header[1:].split())
        try:
            degree = int(fields["degree"])
            conductor = int(fields["conductor"])
            M = int(fields["M"])
            label = fields.get("label", "external")
        except (KeyError, ValueError) as exc:
            raise TableError(f"malformed header: {header.strip()!r}") from exc
        values = np.zeros(M + 1, dtype=np.complex128)
        seen = np.zeros(M + 1, dtype=bool)
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise TableError(f"line {lineno}: expected 'm re im'")
            m = int(parts[0])
            if not 1 <= m <= M:
                raise TableError(f"line {lineno}: index {m} outside 1..{M}")
            values[m] = complex(float(parts[1]), float(parts[2]))
            seen[m] = True
    if not seen[1:].all():
        missing = int(np.flatnonzero(~seen[1:])[0]) + 1
        raise TableError(f"missing coefficient at m = {missing}")
    if expected_degree is not None and degree != expected_degree:
        raise TableError(f"degree {degree} != expected {expected_degree}")
    if expected_conductor is not None and conductor != expected_conductor:
        raise TableError(f"conductor {conductor} != expected {expected_conductor}")
    if abs(values[1] - 1.0) > 1e-12:
        raise TableError(f"normalization: lambda(1) = {values[1]} != 1")
    for p in pr.primes_upto(min(M, 100_000)):
        if abs(values[p]) > degree + RAMANUJAN_SLACK:
            raise TableError(
                f"Ramanujan violation at p = {p}: |lambda| = {abs(values[p]):.12g}"
            )
    spec = LFunctionSpec(
        kind="external-table", degree=degree, conductor=conductor, label=label, source=str(path)
    )
    return spec, CoefficientTable(M, values=values, degree=degree)


# ---------------------------------------------------------------------------
# large prime-indexed tables (for sums over p up to 1e7 and beyond)


def _cache_dir():
    base = os.environ.get("LFCOMB_CACHE")
    if base is None:
        base = os.path.join(os.path.expanduser("~"), ".cache", "lfcomb")
    os.makedirs(base, exist_ok=True)
    return base


def prime_lambda_table(spec, pmax, use_cache=True):
    """(primes <= pmax, lambda(p) at those primes) as numpy arrays.

    Newform values use exact integers below 1e6 and the FFT ladder above;
    absolute accuracy is better than 1e-7 everywhere (validated against the
    exact engine at the splice in the test suite).
    """
    pmax = int(pmax)
    ps = pr.primes_upto(pmax)
    if spec.kind == "dirichlet-character":
        chi = DirichletCharacter(spec.modulus, spec.index)
        if chi.modulus == 1:
            return ps, np.ones(len(ps), dtype=np.complex128)
        return ps, chi.value_array()[ps % chi.modulus]
    if spec.kind == "level1-newform":
        cache = os.path.join(_cache_dir(), f"lam_w{spec.weight}_p{pmax}.npz")
        if use_cache and os.path.exists(cache):
            data = np.load(cache)
            return data["primes"], data["lam"].astype(np.complex128)
        lam_all = qexp.hybrid_coefficients(spec.weight, pmax)
        lam = lam_all[ps]
        if use_cache:
            tmp = cache + ".tmp.npz"
            np.savez_compressed(tmp, primes=ps, lam=lam)
            os.replace(tmp, cache)
        return ps, lam.astype(np.complex128)
    raise ValueError("external tables: take lambda at primes from the table itself")


# ---------------------------------------------------------------------------
# validation


def validate_table(spec, table, rng=None, pairs=1000, rel_tol=1e-9):
    """Enforce the table invariants; raises TableError on the first failure.

    Checks lambda(1) = 1, the Ramanujan bound at primes <= min(M, 1e5), and
    multiplicativity lambda(ab) = lambda(a) lambda(b) on `pairs` random
    coprime pairs.
    """
    if abs(table.at(1) - 1.0) > 1e-12:
        raise TableError(f"lambda(1) = {table.at(1)} != 1")
    for p in pr.primes_upto(min(table.M, 100_000)):
        if abs(table.at(int(p))) > spec.degree + RAMANUJAN_SLACK:
            raise TableError(f"Ramanujan violation at p = {p}")
    rng = np.random.default_rng(0) if rng is None else rng
    top = int(math.isqrt(table.M))
    if top >= 3:
        for _ in range(pairs):
            a = int(rng.integers(2, top + 1))
            b = int(rng.integers(2, top + 1))
            if math.gcd(a, b) != 1 or a * b > table.M:
                continue
            lhs = table.at(a * b)
            rhs = table.at(a) * table.at(b)
            scale = max(1.0, abs(lhs), abs(rhs))
            if abs(lhs - rhs) > rel_tol * scale:
                raise TableError(
                    f"multiplicativity fails at ({a},{b}): {lhs} vs {rhs}"
                )
    return True


def config_hash(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]
