"""End-to-end murmuration pipeline: analytic conductor, prime windows,
numerator/denominator of the ratio, the density nu(E), a main-term spot
check for the averaged-character exponential sum, and figure-grid rows.

The headline comparison: for E = [0, t],

    ratio(E) · t · sqrt(N)  ~  nu([0, t]),

where ratio = numerator/denominator, numerator sums log p · spectral
averages of a_j(-p) over primes with p/N in E, the denominator is
(sum log p) · (smoothed eigenvalue count), and

    nu(E) = (1/zeta(2)) sum over squarefree q, gcd(a, q) = 1,
            q²/a² in E of q³/(phi(q)² sigma(q)) a^{-3},

with boundary terms (q²/a² at an endpoint of E) halved.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.special

from . import _kernels, core_arith, testfn, trace
from .core_arith import euler_phi, mobius, sigma1
from .dirichlet import l_one_avg
from .errors import DomainError, ResourceError
from .testfn import w_eval, w_hat

_EULER_GAMMA = 0.5772156649015328606

# Bernoulli numbers B_2..B_12 for the digamma asymptotic series.
_BERNOULLI = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
              5.0 / 66.0, -691.0 / 2730.0)


@dataclass(frozen=True)
class IntervalE:
    """Compact window [lo, hi] on the positive axis."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo >= 0.0 and self.hi > self.lo):
            raise DomainError(
                "interval must satisfy 0 <= lo < hi, got [%g, %g]"
                % (self.lo, self.hi))


def _as_interval(E):
    if isinstance(E, IntervalE):
        return E
    lo, hi = E
    return IntervalE(float(lo), float(hi))


def digamma(z):
    """Complex digamma via recurrence to Re z >= 10 plus the Stirling series
    through the B_12 term; abs error below 1e-12 for Re z >= 1/4."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise DomainError("digamma pole at z = %g" % z.real)
    acc = 0.0 + 0.0j
    while z.real < 10.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0 + 0.0j
    power = inv2
    for n, b in enumerate(_BERNOULLI, start=1):
        series += b / (2.0 * n) * power
        power *= inv2
    return acc + np.log(z) - 0.5 / z - series


def conductor(R, parity_a=0):
    """Analytic conductor exp(2 Re psi((1/2 + a + iR)/2)) / pi²  ~ R²/4 pi²."""
    if R <= 0:
        raise DomainError("conductor requires R > 0")
    if parity_a not in (0, 1):
        raise DomainError("parity must be 0 or 1")
    z = complex(0.5 + parity_a, R) / 2.0
    return math.exp(2.0 * digamma(z).real) / math.pi ** 2


def weyl_count(T):
    """Smoothed count of spectral parameters below T (main terms only):
    T²/12 - 2 T log T / pi + (2 - log 2 + log pi) T / pi."""
    if T <= 1:
        raise DomainError("weyl_count requires T > 1")
    return (T * T / 12.0 - 2.0 * T * math.log(T) / math.pi
            + (2.0 - math.log(2.0) + math.log(math.pi)) * T / math.pi)


def weyl_window(R, H):
    """weyl_count(R + H) - weyl_count(R - H) ~ RH/3."""
    if not (R > H > 0):
        raise DomainError("weyl_window requires R > H > 0")
    return weyl_count(R + H) - weyl_count(R - H)


def prime_window(E, N, table):
    """Primes p with p/N in E, ascending."""
    E = _as_interval(E)
    lo = max(2.0, math.ceil(E.lo * N))
    hi = math.floor(E.hi * N)
    if hi > table.limit:
        raise ResourceError(
            "prime table limit %d insufficient for window; need %d"
            % (table.limit, int(hi)))
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    return table.in_range(int(lo), int(hi))


# ----------------------------------------------------------------------
# prime sweep (parallel, deterministic)
# ----------------------------------------------------------------------

_WORKER_STATE = {}


def _sweep_init(spec, l_eps, entries):
    from .dirichlet import LValueCache

    cache = LValueCache()
    cache.merge(entries)
    _WORKER_STATE["spec"] = spec
    _WORKER_STATE["l_eps"] = l_eps
    _WORKER_STATE["cache"] = cache


def _sweep_block(primes_block):
    spec = _WORKER_STATE["spec"]
    l_eps = _WORKER_STATE["l_eps"]
    cache = _WORKER_STATE["cache"]
    before = len(cache)
    vals = [trace.trace_minus_p(int(p), spec, cache, l_eps).spectral_sum
            for p in primes_block]
    new_entries = cache.snapshot() if len(cache) != before else {}
    return vals, new_entries


def sweep_spectral(primes, spec, cache, l_eps=1e-4, threads=1, progress=None):
    """spectral_sum(-p) for each prime, in order; deterministic regardless
    of thread count (per-p values depend only on (p, spec, l_eps))."""
    primes = np.asarray(primes, dtype=np.int64)
    out = np.empty(primes.shape[0], dtype=np.float64)
    if primes.size == 0:
        return out
    blocks = [primes[i:i + 100] for i in range(0, primes.size, 100)]
    if threads <= 1:
        _sweep_init(spec, l_eps, cache.snapshot() if cache is not None else {})
        pos = 0
        for bi, block in enumerate(blocks):
            vals, entries = _sweep_block(block)
            out[pos:pos + len(vals)] = vals
            pos += len(vals)
            if cache is not None and entries:
                cache.merge(entries)
            if progress:
                progress(pos, primes.size)
        return out
    import multiprocessing as mp

    ctx = mp.get_context("fork")
    snap = cache.snapshot() if cache is not None else {}
    pos = 0
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx,
                             initializer=_sweep_init,
                             initargs=(spec, l_eps, snap)) as pool:
        for vals, entries in pool.map(_sweep_block, blocks):
            out[pos:pos + len(vals)] = vals
            pos += len(vals)
            if cache is not None and entries:
                cache.merge(entries)
            if progress:
                progress(pos, primes.size)
    return out


def numerator(E, spec, cache, table, l_eps=1e-4, threads=1):
    """sum over the prime window of log p · spectral_sum(-p), ordered
    compensated summation."""
    primes = prime_window(E, conductor(spec.R), table)
    vals = sweep_spectral(primes, spec, cache, l_eps, threads)
    return core_arith.kahan_sum(math.log(int(p)) * v
                                for p, v in zip(primes, vals))


def denominator(E, spec, table):
    """(sum over the prime window of log p) · weyl_window(R, H)."""
    primes = prime_window(E, conductor(spec.R), table)
    logsum = core_arith.kahan_sum(math.log(int(p)) for p in primes)
    return logsum * weyl_window(spec.R, spec.H)


# ----------------------------------------------------------------------
# the density nu(E)
# ----------------------------------------------------------------------

_Z3TAB = np.concatenate(([0.0], scipy.special.zeta(3, np.arange(1, 64))))
_ZETA2 = math.pi ** 2 / 6.0
_NU_PRIMES = {"limit": 0, "primes": None}
_NU_Q_CAP = 1 << 26


def _nu_primes_for(limit):
    if _NU_PRIMES["limit"] < limit:
        new_limit = max(limit, 2 * _NU_PRIMES["limit"], 1 << 12)
        _NU_PRIMES["primes"] = _kernels.sieve_primes(new_limit)
        _NU_PRIMES["limit"] = new_limit
    return _NU_PRIMES["primes"]


def nu(E, tol=1e-8):
    """nu(E): octave-extrapolated q-scan with exact (Moebius/zeta-tail) a-sums.

    Squarefree q are scanned in octaves [Q, 2Q); per-octave totals decay like
    1/Q, so the scan stops once an octave contributes at most 2·tol and that
    octave's total is added once more as the estimate of the remaining tail.
    """
    E = _as_interval(E)
    if tol <= 0:
        raise DomainError("nu tolerance must be positive")
    lo, hi = E.lo, E.hi
    primes = _nu_primes_for(1 << 12)
    total = _kernels.nu_scan(1, 64, lo, hi, primes, _Z3TAB)
    q0 = 64
    while True:
        q1 = q0 * 2
        primes = _nu_primes_for(int(math.isqrt(q1)) + 2)
        oct_sum = _kernels.nu_scan(q0, q1, lo, hi, primes, _Z3TAB)
        total += oct_sum
        if abs(oct_sum) <= 2.0 * tol:
            total += oct_sum  # geometric-tail estimate: sum beyond q1 ~ last octave
            break
        q0 = q1
        if q0 > _NU_Q_CAP:
            raise ResourceError(
                "nu(E) q-scan exceeded cutoff %d before reaching tol %g"
                % (_NU_Q_CAP, tol))
    return total / _ZETA2


def nu_bruteforce(E, q_max=1000, a_max=100000):
    """Literal double loop over (q, a); the independent oracle for nu."""
    E = _as_interval(E)
    total = 0.0
    a_all = np.arange(1, a_max + 1, dtype=np.int64)
    inv_a3 = 1.0 / a_all.astype(np.float64) ** 3
    for q in range(1, q_max + 1):
        if mobius(q) == 0:
            continue
        w = q ** 3 / (euler_phi(q) ** 2 * sigma1(q))
        r = (q * q) / a_all.astype(np.float64) ** 2
        sel = (np.gcd(a_all, q) == 1) & (r >= E.lo) & (r <= E.hi)
        weight = np.where((q * q == E.lo * a_all * a_all)
                          | (q * q == E.hi * a_all * a_all), 0.5, 1.0)
        total += w * float(np.sum(inv_a3[sel] * weight[sel]))
    return total / _ZETA2


# ----------------------------------------------------------------------
# averaged-character exponential sum spot check
# ----------------------------------------------------------------------

def major_arc_check(a, q, theta, x, spec, t_max=None, avg_M=4000):
    """Compare sum_t L(1, psi-bar_t) cos(2 pi (a/q + theta) t) What(t/x)
    against its predicted main term mu(q)²/(phi(q)² sigma(q)) · x · W(theta x).

    Returns (lhs, main_term, lhs - main_term).
    """
    q = int(q)
    a = int(a)
    if q < 1 or math.gcd(a, q) != 1:
        raise DomainError("need q >= 1 and gcd(a, q) = 1")
    if not abs(theta) < 1.0 / (q * q):
        raise DomainError("need |theta| < 1/q²")
    if x < 1:
        raise DomainError("need x >= 1")
    if t_max is None:
        t_max = int(math.ceil(x))
    alpha = a / q + theta
    # t = 0 term plus folded t > 0 terms (both factors even in t)
    lhs = l_one_avg(0, avg_M) * w_hat(spec, 0.0)
    for t in range(1, t_max + 1):
        wh = w_hat(spec, t / x)
        if wh == 0.0:
            continue
        lhs += 2.0 * l_one_avg(t, avg_M) * math.cos(2.0 * math.pi * alpha * t) * wh
    main = (mobius(q) ** 2 / (euler_phi(q) ** 2 * sigma1(q))
            * x * w_eval(spec, theta * x))
    return lhs, main, lhs - main


# ----------------------------------------------------------------------
# figure rows
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FigureRow:
    t: float
    nu: float
    lhs_scaled: float
    numerator: float
    denominator: float


@dataclass(frozen=True)
class MurmurationReport:
    spec: object
    E: IntervalE
    N: float
    numerator: float
    denominator: float
    ratio: float
    nu: float
    rows: tuple


def figure1(spec, t_grid, cache, table, l_eps=1e-4, nu_tol=1e-6,
            threads=1, parity_a=0, progress=None):
    """Rows (t, nu([0,t]), ratio([0,t])·t·sqrt(N)) over an ascending grid.

    A single prime sweep up to N·max(t) is shared by all rows via
    compensated prefix sums, so each row equals the standalone
    numerator/denominator computation for E = [0, t].
    """
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])) or not t_grid:
        raise DomainError("t grid must be nonempty and strictly ascending")
    if t_grid[0] <= 0:
        raise DomainError("t grid values must be positive")
    N = conductor(spec.R, parity_a)
    top = IntervalE(0.0, t_grid[-1])
    primes = prime_window(top, N, table)
    vals = sweep_spectral(primes, spec, cache, l_eps, threads, progress)
    logs = np.array([math.log(int(p)) for p in primes])

    # compensated prefix sums (identical to sequential Kahan at every prefix)
    def kahan_prefix(xs):
        out = np.empty(xs.shape[0] + 1)
        out[0] = 0.0
        total = 0.0
        comp = 0.0
        for i, v in enumerate(xs):
            y = v - comp
            s = total + y
            comp = (s - total) - y
            total = s
            out[i + 1] = total
        return out

    num_prefix = kahan_prefix(logs * vals)
    log_prefix = kahan_prefix(logs)
    ww = weyl_window(spec.R, spec.H)
    sqn = math.sqrt(N)

    rows = []
    for t in t_grid:
        idx = int(np.searchsorted(primes, int(math.floor(t * N)), side="right"))
        num = float(num_prefix[idx])
        den = float(log_prefix[idx]) * ww
        nu_t = nu(IntervalE(0.0, t), nu_tol)
        if den != 0.0:
            lhs_scaled = num / den * t * sqn
        else:
            lhs_scaled = float("nan")
        rows.append(FigureRow(t=t, nu=nu_t, lhs_scaled=lhs_scaled,
                              numerator=num, denominator=den))
    last = rows[-1]
    ratio = (last.numerator / last.denominator
             if last.denominator != 0.0 else float("nan"))
    return MurmurationReport(spec=spec, E=top, N=N, numerator=last.numerator,
                             denominator=last.denominator, ratio=ratio,
                             nu=last.nu, rows=tuple(rows))
