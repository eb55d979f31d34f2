"""Integer arithmetic primitives: sieves, multiplicative functions,
Kronecker symbols, discriminant decomposition, and log eta(m).

All single-call functions accept Python ints; batch paths go through the
sieved kernels in ``_kernels``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceError

# Memory guard for sieve allocations (entries, not bytes).
_SIEVE_LIMIT_CAP = 2_000_000_000


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def count(self):
        return int(self.primes.shape[0])

    def in_range(self, lo, hi):
        """Primes p with lo <= p <= hi as an int64 array."""
        if hi > self.limit:
            raise ResourceError(
                "prime table limit %d insufficient, need %d" % (self.limit, hi))
        i = np.searchsorted(self.primes, lo, side="left")
        j = np.searchsorted(self.primes, hi, side="right")
        return self.primes[i:j]


def sieve_primes(limit):
    """PrimeTable of all primes <= limit."""
    limit = int(limit)
    if limit < 0:
        raise DomainError("sieve limit must be >= 0, got %d" % limit)
    if limit > _SIEVE_LIMIT_CAP:
        raise ResourceError(
            "sieve limit %d exceeds memory budget %d" % (limit, _SIEVE_LIMIT_CAP))
    return PrimeTable(limit=limit, primes=_kernels.sieve_primes(limit))


def smallest_prime_factor_table(limit):
    """int32 array spf with spf[n] = smallest prime factor of n (spf[1] = 1)."""
    limit = int(limit)
    if limit > _SIEVE_LIMIT_CAP:
        raise ResourceError(
            "spf table limit %d exceeds memory budget %d" % (limit, _SIEVE_LIMIT_CAP))
    return _kernels.sieve_spf(limit)


def kronecker(a, n):
    """Kronecker symbol (a|n) with the standard extension to all integers."""
    return int(_kernels.kron(int(a), int(n)))


def factorize(n):
    """Prime factorization of n >= 1 as a list of (p, exponent), ascending."""
    n = int(n)
    if n < 1:
        raise DomainError("factorize requires n >= 1, got %d" % n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n):
    """All positive divisors of n >= 1, ascending."""
    facs = factorize(n)
    out = [1]
    for p, e in facs:
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def mobius(n):
    n = int(n)
    if n < 1:
        raise DomainError("mobius requires n >= 1, got %d" % n)
    m = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        m = -m
    return m


def euler_phi(n):
    n = int(n)
    if n < 1:
        raise DomainError("euler_phi requires n >= 1, got %d" % n)
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def sigma1(n):
    n = int(n)
    if n < 1:
        raise DomainError("sigma1 requires n >= 1, got %d" % n)
    out = 1
    for p, e in factorize(n):
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def von_mangoldt(m):
    """log p if m is a prime power p^k, else 0."""
    m = int(m)
    if m < 1:
        raise DomainError("von_mangoldt requires m >= 1, got %d" % m)
    if m == 1:
        return 0.0
    facs = factorize(m)
    if len(facs) == 1:
        return math.log(facs[0][0])
    return 0.0


def is_perfect_square(n):
    """(True, root) when n = root² with root >= 0, else (False, None)."""
    n = int(n)
    if n < 0:
        return False, None
    r = math.isqrt(n)
    if r * r == n:
        return True, r
    return False, None


@dataclass(frozen=True)
class DiscriminantDecomposition:
    """D = d·ell² with d a fundamental discriminant (possibly 1)."""

    D: int
    d: int
    ell: int


def decompose_discriminant(D):
    """Unique split D = d·ell² with d fundamental.

    d fundamental means d ≡ 1 mod 4 squarefree, or d = 4m with
    m ≡ 2,3 mod 4 squarefree, or d = 1 (when D is a perfect square).
    """
    D = int(D)
    if D == 0:
        raise DomainError("discriminant must be nonzero")
    if D % 4 in (2, 3):
        raise DomainError("discriminant must be 0 or 1 mod 4, got %d" % D)
    core = 1
    sq = 1
    for p, e in factorize(abs(D)):
        if e % 2 == 1:
            core *= p
        sq *= p ** (e // 2)
    if D < 0:
        core = -core
    if core % 4 == 1:
        return DiscriminantDecomposition(D=D, d=core, ell=sq)
    return DiscriminantDecomposition(D=D, d=4 * core, ell=sq // 2)


def log_eta(m):
    """log of eta(m) = prod over k mod m of gcd(k, m).

    Computed as sum over d | m of phi(m/d)·log d; the k = 0 slot
    (gcd(0, m) = m) is the d = m term.
    """
    m = int(m)
    if m < 1:
        raise DomainError("log_eta requires m >= 1, got %d" % m)
    total = 0.0
    for d in divisors(m):
        if d > 1:
            total += euler_phi(m // d) * math.log(d)
    return total


def prime_power_table(limit):
    """(values, von_mangoldt) arrays for all prime powers <= limit, ascending."""
    limit = int(limit)
    primes = _kernels.sieve_primes(limit)
    vals = []
    lams = []
    for p in primes:
        p = int(p)
        lp = math.log(p)
        m = p
        while m <= limit:
            vals.append(m)
            lams.append(lp)
            m *= p
    order = np.argsort(np.asarray(vals, dtype=np.int64), kind="stable")
    return (np.asarray(vals, dtype=np.int64)[order],
            np.asarray(lams, dtype=np.float64)[order])


def kahan_sum(values):
    """Compensated (Kahan) sum in the given iteration order."""
    total = 0.0
    comp = 0.0
    for v in values:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total
