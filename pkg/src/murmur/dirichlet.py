"""Quadratic characters psi_D, the L-values L(1, psi_d) / L(1, psi_D),
and the residue-averaged characters psi-bar_t with their L-values.

L(1, psi_d) for fundamental d is evaluated by a theta-smoothed series
(two incomplete-gamma-weighted character sums of length O(sqrt|d|)),
which converges to any requested tolerance; a persistent CSV cache keyed
by fundamental discriminant avoids recomputation across runs.
"""

import math
import os
import threading
from fractions import Fraction

from . import _kernels, core_arith
from .core_arith import (DiscriminantDecomposition, decompose_discriminant,
                         euler_phi, factorize, is_perfect_square, kronecker)
from .errors import DomainError, ParseError


class CharacterPsiD:
    """psi_D(n) = kronecker(d, n / gcd(n, ell)) for D = d·ell²."""

    def __init__(self, D):
        self.decomposition = decompose_discriminant(D)

    @property
    def D(self):
        return self.decomposition.D

    def __call__(self, n):
        return psi_D_eval(self, n)


def psi_D_eval(char, n):
    n = int(n)
    if n == 0:
        raise DomainError("psi_D is not defined at n = 0")
    dec = char.decomposition if isinstance(char, CharacterPsiD) else char
    g = math.gcd(abs(n), dec.ell)
    return kronecker(dec.d, n // g)


class LValueCache:
    """Map fundamental discriminant d -> (L(1, psi_d), eps), CSV-persistent.

    A cached value is reused only when the stored eps equals the requested
    one, so warm and cold runs are bit-identical.  Thread-safe; concurrent
    requests for the same d compute once.
    """

    HEADER = "# murmur-lvalue-cache v1"

    def __init__(self, path=None):
        self.path = path
        self._entries = {}
        self._lock = threading.Lock()
        self._inflight = {}
        if path is not None and os.path.exists(path):
            self.load(path)

    def __len__(self):
        return len(self._entries)

    def load(self, path):
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline().rstrip("\n")
            if first != self.HEADER:
                raise ParseError("bad cache header %r" % first, source=path, index=1)
            for i, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ParseError("bad cache row", source=path, index=i)
                try:
                    d = int(parts[0])
                    value = float(parts[1])
                    eps = float(parts[2])
                except ValueError as exc:
                    raise ParseError("bad cache row: %s" % exc, source=path, index=i)
                self._entries[d] = (value, eps)

    def save(self, path=None):
        path = path or self.path
        if path is None:
            return
        tmp = path + ".tmp"
        with self._lock:
            items = sorted(self._entries.items())
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.HEADER + "\n")
            for d, (value, eps) in items:
                fh.write("%d,%s,%s\n" % (d, repr(value), repr(eps)))
        os.replace(tmp, path)

    def snapshot(self):
        with self._lock:
            return dict(self._entries)

    def merge(self, entries):
        with self._lock:
            self._entries.update(entries)

    def get_or_compute(self, d, eps):
        with self._lock:
            hit = self._entries.get(d)
            if hit is not None and hit[1] == eps:
                return hit[0]
            ev = self._inflight.get((d, eps))
            if ev is None:
                ev = threading.Event()
                self._inflight[(d, eps)] = ev
                owner = True
            else:
                owner = False
        if not owner:
            ev.wait()
            with self._lock:
                return self._entries[d][0]
        try:
            value = float(_kernels.l_chi_one(d, eps))
            with self._lock:
                self._entries[d] = (value, eps)
            return value
        finally:
            with self._lock:
                del self._inflight[(d, eps)]
            ev.set()


def l_one_fundamental(d, target_eps=1e-6):
    """L(1, psi_d) for a fundamental discriminant d, |d| > 1."""
    d = int(d)
    if d == 1:
        raise DomainError("L(1, psi_1) is the divergent zeta series")
    dec = decompose_discriminant(d)
    if dec.ell != 1 or dec.d != d:
        raise DomainError("%d is not a fundamental discriminant" % d)
    if target_eps <= 0:
        raise DomainError("target_eps must be positive")
    return float(_kernels.l_chi_one(d, target_eps))


def euler_correction(d, ell):
    """(1/ell)·prod over p^a || ell of [1 + (p - psi_d(p))·(p^a - 1)/(p - 1)]."""
    corr = 1.0 / ell
    for p, a in factorize(ell):
        chi = kronecker(d, p)
        corr *= 1.0 + (p - chi) * (p ** a - 1) / (p - 1)
    return corr


def l_one_general(D, cache=None, target_eps=1e-6):
    """L(1, psi_D) = L(1, psi_d) · euler_correction(d, ell), D = d·ell² nonsquare."""
    D = int(D)
    sq, _ = is_perfect_square(D)
    if sq:
        raise DomainError("L(1, psi_D) undefined for square D = %d" % D)
    dec = decompose_discriminant(D)
    if cache is not None:
        base = cache.get_or_compute(dec.d, target_eps)
    else:
        base = float(_kernels.l_chi_one(dec.d, target_eps))
    return base * euler_correction(dec.d, dec.ell)


# ----------------------------------------------------------------------
# residue-averaged characters psi-bar_t
# ----------------------------------------------------------------------

_PP_MEMO = {}
_PP_LOCK = threading.Lock()


def _psi_bar_pp_numer(t, p, k, sign):
    """Exact integer numerator of psi-bar_t at the prime power p^k.

    psi-bar_t(p^k) = numer / phi(p^{2k}).  For odd p with k = 1 the average
    collapses to a closed form (-(p-1) when p does not divide t, 0 when it
    does); other prime powers are summed directly over residues.  psi_D(p^k)
    depends on D only modulo 4·p^{2k}, so t enters via t² mod 4·p^{2k}.
    """
    t = abs(int(t))
    m2 = p ** (2 * k)
    key = (t * t % (4 * m2), p, k, sign)
    with _PP_LOCK:
        hit = _PP_MEMO.get(key)
    if hit is not None:
        return hit
    if p != 2 and k == 1:
        val = 0 if t % p == 0 else -(p - 1)
    else:
        val = int(_kernels.psi_bar_pp_numer(t, p, k, sign))
    with _PP_LOCK:
        _PP_MEMO[key] = val
    return val


def psi_bar_t(t, m, sign=1, exact=False):
    """psi-bar_t(m) = (1/phi(m²)) sum over n mod m² coprime to m of psi_{t²+4n}(m).

    Multiplicative in m (Chinese remainder theorem on the residue average).
    ``sign=-1`` averages psi_{t²-4n} instead; the two averages are equal.
    ``exact=True`` returns a Fraction.
    """
    m = int(m)
    if m < 1:
        raise DomainError("psi_bar_t requires m >= 1, got %d" % m)
    if m == 1:
        return Fraction(1) if exact else 1.0
    numer = 1
    denom = 1
    for p, k in factorize(m):
        numer *= _psi_bar_pp_numer(t, p, k, sign)
        denom *= euler_phi(p ** (2 * k))
        if numer == 0:
            break
    if exact:
        return Fraction(numer, denom)
    return numer / denom


def psi_bar_t_bruteforce(t, m, sign=1):
    """Definitional average as an exact Fraction (O(m²); for cross-checks)."""
    m = int(m)
    if m == 1:
        return Fraction(1)
    m2 = m * m
    total = 0
    count = 0
    for n in range(1, m2 + 1):
        if math.gcd(n, m) != 1:
            continue
        count += 1
        D = t * t + sign * 4 * n
        while D <= 0:
            D += 4 * m2
        total += psi_D_eval(decompose_discriminant(D), m)
    return Fraction(total, count)


def l_one_avg(t, M=4000):
    """Partial sum of L(1, psi-bar_t) = sum over m of psi-bar_t(m)/m up to M.

    The series converges absolutely (|psi-bar_t(m)| decays like 1/m on
    squarefree m), so a plain partial sum suffices; compare M vs 2M
    truncations for a convergence diagnostic.
    """
    M = int(M)
    if M < 1:
        raise DomainError("l_one_avg requires M >= 1")
    spf = core_arith.smallest_prime_factor_table(M)
    vals = [0.0] * (M + 1)
    vals[1] = 1.0
    total = 1.0
    comp = 0.0
    for m in range(2, M + 1):
        p = int(spf[m])
        rest = m
        k = 0
        while rest % p == 0:
            rest //= p
            k += 1
        if vals[rest] == 0.0 and rest != 1:
            vals[m] = 0.0
        else:
            numer = _psi_bar_pp_numer(t, p, k, 1)
            vals[m] = vals[rest] * (numer / euler_phi(p ** (2 * k)))
        y = vals[m] / m - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def l_one_avg_diagnostic(t, M=4000):
    """(partial sum at M, partial sum at 2M) for convergence monitoring."""
    return l_one_avg(t, M), l_one_avg(t, 2 * M)
