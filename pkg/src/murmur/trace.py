"""Geometric side of the trace formula for level-1 Maass forms.

``geometric_side`` assembles every term for a general nonzero integer n:

  * hyperbolic — class-number terms over t with D = t² - 4n > 0 nonsquare;
  * elliptic   — integral terms over t with D < 0 (only possible for n > 0);
  * divisor_log / divisor_integral — divisor-pair terms over ad = n, a > 0,
    a != d, with kernel sign eps = sign(n);
  * parabolic  — per-pair G·log(4 e^gamma), a sinh-difference integral, and
    -F(0)/4;
  * lambda_sum — prime-power terms 2·Lambda(m)/m·G(log|a/d| - 2 log m);
  * square_term — extra bracket when n is a positive perfect square;
  * identity   — sigma_1(|n|)/sqrt|n| · F(i/4 pi).

``trace_minus_p`` is the specialized fast path at n = -p (p prime), which the
prime sweep uses; it must agree with ``geometric_side(-p, ...)`` to quadrature
tolerance.  ``spectral_sum`` is geometric total minus identity, i.e. the
smoothed spectral average sum_j F(r_j/2 pi) a_j(n).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels, core_arith, testfn
from .core_arith import (decompose_discriminant, divisors, is_perfect_square,
                         log_eta, sigma1)
from .dirichlet import euler_correction, l_one_general
from .errors import DomainError
from .testfn import QuadratureSpec, big_g, big_g_many, big_g_prime, bump_id, quad

_EULER_GAMMA = 0.5772156649015328606
_GLX, _GLW = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class GeomBreakdown:
    """Itemized geometric-side terms and the derived spectral sum."""

    n: int
    hyperbolic: float
    elliptic: float
    divisor_log: float
    divisor_integral: float
    parabolic: float
    lambda_sum: float
    square_term: float
    identity: float
    spectral_sum: float

    @property
    def geometric_total(self):
        return (self.hyperbolic + self.elliptic + self.divisor_log
                + self.divisor_integral + self.parabolic + self.lambda_sum
                + self.square_term)


def _finish(n, **terms):
    total = (terms["hyperbolic"] + terms["elliptic"] + terms["divisor_log"]
             + terms["divisor_integral"] + terms["parabolic"]
             + terms["lambda_sum"] + terms["square_term"])
    return GeomBreakdown(n=n, spectral_sum=total - terms["identity"], **terms)


def hyperbolic_t_range(n, spec):
    """Inclusive range (lo, hi) of |t| giving D = t² - 4n > 0 with the
    G-argument inside the support (empty range signalled by lo > hi)."""
    n = int(n)
    if n == 0:
        raise DomainError("n must be nonzero")
    sup = spec.support
    if n < 0:
        # argument 2 asinh(|t| / 2 sqrt|n|) < 1/h
        bound = 2.0 * math.sqrt(-n) * math.sinh(sup / 2.0)
        hi = int(math.floor(bound))
        while 2.0 * math.asinh(hi / (2.0 * math.sqrt(-n))) >= sup:
            hi -= 1
        while 2.0 * math.asinh((hi + 1) / (2.0 * math.sqrt(-n))) < sup:
            hi += 1
        return (0, hi)
    # n > 0: need t² > 4n and 2 acosh(|t| / 2 sqrt n) < 1/h
    rt = 2.0 * math.sqrt(n)
    lo = int(math.floor(rt)) + 1
    while lo * lo <= 4 * n:
        lo += 1
    hi = int(math.floor(rt * math.cosh(sup / 2.0)))
    while hi >= lo and 2.0 * math.acosh(hi / rt) >= sup:
        hi -= 1
    return (lo, hi)


@lru_cache(maxsize=64)
def _spec_constants(spec):
    """(F(0), F(i/4pi)) — shared across every n for a fixed spec."""
    return testfn.f_zero(spec), testfn.f_at_i_over_4pi(spec)


@lru_cache(maxsize=8)
def _prime_power_table(limit):
    return core_arith.prime_power_table(limit)


def _kernel_args(spec):
    ty, td = testfn.bump_tables(spec.bump)
    return spec.R, spec.H, spec.h, bump_id(spec.bump), ty, td


def _para_shift(spec, c):
    """int_0^inf (G(u+c) - G(c)) / (2 sinh(u/2)) du."""
    return float(_kernels.para_shift_integral(float(c), *_kernel_args(spec),
                                              _GLX, _GLW))


def _divisor_integral_pair(spec, u0, s_ad, eps_sign):
    return float(_kernels.divisor_eps_integral(
        float(u0), float(s_ad), float(eps_sign), *_kernel_args(spec),
        _GLX, _GLW))


def _lambda_branch(spec, c, mvals, lams):
    return float(_kernels.lambda_branch(float(c), mvals, lams,
                                        *_kernel_args(spec)))


def _elliptic_integral(spec, c):
    """(sqrt(c)/pi) int_0^{1/h} G(u) cosh(u/2) / (sinh²(u/2) + c) du."""
    def f(us):
        sh = np.sinh(us / 2.0)
        return big_g_many(spec, us) * np.cosh(us / 2.0) / (sh * sh + c)

    val = quad(f, 0.0, spec.support,
               QuadratureSpec(osc_freq=spec.R + spec.H, abs_eps=spec.quad_eps))
    return math.sqrt(c) / math.pi * val


def _square_bracket(spec, root):
    """Extra terms when n = root² is a positive perfect square."""
    qs = QuadratureSpec(osc_freq=spec.R + spec.H, abs_eps=spec.quad_eps)

    def gp_over_sinh(us):
        return np.array([big_g_prime(spec, u) for u in np.atleast_1d(us)]) \
            / np.sinh(np.atleast_1d(us) / 2.0)

    # even integrand; int over R = 2 int over (0, inf)
    t1 = -(1.0 / (12.0 * root)) * 2.0 * quad(gp_over_sinh, 0.0, spec.support, qs,
                                             singularity="sinh0")
    t2 = (math.log(math.pi * root / 2.0) + _EULER_GAMMA) * big_g(spec, 0.0)

    def log_gp(us):
        us = np.atleast_1d(us)
        return np.log(2.0 * np.sinh(us / 2.0)) \
            * np.array([big_g_prime(spec, u) for u in us])

    t3 = -quad(log_gp, 0.0, spec.support, qs, singularity="log0")
    return t1 + t2 + t3


def _divisor_pairs(n):
    """(a, d) with a·d = n, a > 0 (d carries the sign of n)."""
    out = []
    for a in divisors(abs(n)):
        d = n // a
        out.append((a, d))
    return out


def geometric_side(n, spec, cache=None, l_eps=1e-6):
    """Full itemized geometric side for nonzero n (general, unoptimized path)."""
    n = int(n)
    if n == 0:
        raise DomainError("n must be nonzero")
    if abs(n) > (1 << 50):
        raise DomainError("|n| too large for 64-bit discriminant arithmetic")

    hyperbolic = 0.0
    lo, hi = hyperbolic_t_range(n, spec)
    for t in range(max(lo, 0), hi + 1):
        D = t * t - 4 * n
        sq, _ = is_perfect_square(D)
        if sq:
            continue
        arg = math.log((t + math.sqrt(D)) ** 2 / (4.0 * abs(n)))
        g = big_g(spec, arg)
        if g == 0.0:
            continue
        weight = 1.0 if t == 0 else 2.0
        hyperbolic += weight * l_one_general(D, cache, l_eps) * g

    elliptic = 0.0
    if n > 0:
        tmax = int(math.isqrt(4 * n))
        for t in range(0, tmax + 1):
            D = t * t - 4 * n
            if D >= 0:
                continue
            c = abs(D / (4.0 * n))
            weight = 1.0 if t == 0 else 2.0
            elliptic += (weight * l_one_general(D, cache, l_eps)
                         * _elliptic_integral(spec, c))

    pairs = _divisor_pairs(n)
    eps_sign = 1.0 if n > 0 else -1.0
    divisor_log = 0.0
    divisor_integral = 0.0
    for a, d in pairs:
        if a == d:
            continue
        m = abs(a - d)
        c = math.log(abs(a / d))
        g = big_g(spec, c)
        if g != 0.0:
            divisor_log += (math.log(math.pi) + math.log(m)
                            - log_eta(m) / m) * g
        s_ad = abs(math.sqrt(abs(a / d)) - eps_sign * math.sqrt(abs(d / a)))
        divisor_integral += 0.5 * _divisor_integral_pair(spec, abs(c), s_ad,
                                                         eps_sign)

    f0, fi = _spec_constants(spec)
    parabolic = 0.0
    log4eg = math.log(4.0) + _EULER_GAMMA
    for a, d in pairs:
        c = math.log(abs(a / d))
        parabolic += big_g(spec, c) * log4eg + _para_shift(spec, c) - f0 / 4.0

    mlimit = int(math.sqrt(abs(n)) * math.exp(spec.support / 2.0)) + 2
    mvals, lams = _prime_power_table(max(mlimit, 4))
    lambda_sum = 0.0
    for a, d in pairs:
        c = math.log(abs(a / d))
        lambda_sum += 2.0 * _lambda_branch(spec, c, mvals, lams)

    square_term = 0.0
    if n > 0:
        sq, root = is_perfect_square(n)
        if sq:
            square_term = _square_bracket(spec, root)

    identity = sigma1(abs(n)) / math.sqrt(abs(n)) * fi

    return _finish(n, hyperbolic=hyperbolic, elliptic=elliptic,
                   divisor_log=divisor_log, divisor_integral=divisor_integral,
                   parabolic=parabolic, lambda_sum=lambda_sum,
                   square_term=square_term, identity=identity)


def excluded_square_ts(p, spec):
    """|t| values in the hyperbolic range with t² + 4p a perfect square."""
    _, hi = hyperbolic_t_range(-p, spec)
    out = []
    for t in range(0, hi + 1):
        sq, _ = is_perfect_square(t * t + 4 * p)
        if sq:
            out.append(t)
    return out


_SPF_CACHE = {"limit": 0, "table": None}


def _spf_for(limit):
    """Shared smallest-prime-factor table, regrown geometrically."""
    if _SPF_CACHE["limit"] < limit:
        new_limit = max(limit, 2 * _SPF_CACHE["limit"], 1 << 16)
        _SPF_CACHE["table"] = core_arith.smallest_prime_factor_table(new_limit)
        _SPF_CACHE["limit"] = new_limit
    return _SPF_CACHE["table"]


def _l_values_minus_p(p, tmax, cache, l_eps):
    """L(1, psi_{t²+4p}) for t = 0..tmax (square discriminants left as 0)."""
    ts = np.arange(0, tmax + 1, dtype=np.int64)
    ds = ts * ts + 4 * p
    spf = _spf_for(int(ds[-1]) if len(ds) else 4)
    fund, ell = _kernels.decompose_many(ds, spf)
    out = np.zeros(tmax + 1, dtype=np.float64)
    for i in range(tmax + 1):
        d = int(fund[i])
        if d == 1:  # square discriminant; excluded by the caller
            continue
        if cache is not None:
            base = cache.get_or_compute(d, l_eps)
        else:
            base = float(_kernels.l_chi_one(d, l_eps))
        out[i] = base * euler_correction(d, int(ell[i]))
    return out


def trace_minus_p(p, spec, cache=None, l_eps=1e-6):
    """Fast path for n = -p, p prime: D = t² + 4p > 0 always, no elliptic or
    square terms, divisor pairs {(1, -p), (p, -1)} folded by evenness of G."""
    p = int(p)
    _, tmax = hyperbolic_t_range(-p, spec)
    skip = p - 1 if p - 1 <= tmax else -1
    lvals = _l_values_minus_p(p, tmax, cache, l_eps)
    hyperbolic = float(_kernels.hyperbolic_sum_neg(
        p, tmax, skip, lvals, *_kernel_args(spec)))

    logp = math.log(p)
    g_logp = big_g(spec, logp)
    divisor_log = 0.0
    if g_logp != 0.0:
        m = p + 1
        divisor_log = 2.0 * (math.log(math.pi) + math.log(m)
                             - log_eta(m) / m) * g_logp

    sqp = math.sqrt(p)
    divisor_integral = _divisor_integral_pair(spec, logp, sqp + 1.0 / sqp, -1.0)

    f0, fi = _spec_constants(spec)
    log4eg = math.log(4.0) + _EULER_GAMMA
    parabolic = (2.0 * log4eg * g_logp - f0 / 2.0
                 + _para_shift(spec, logp) + _para_shift(spec, -logp))

    mlimit = int(sqp * math.exp(spec.support / 2.0)) + 2
    mvals, lams = _prime_power_table(max(mlimit, 4))
    lambda_sum = 2.0 * (_lambda_branch(spec, logp, mvals, lams)
                        + _lambda_branch(spec, -logp, mvals, lams))

    identity = (p + 1) / sqp * fi

    return _finish(-p, hyperbolic=hyperbolic, elliptic=0.0,
                   divisor_log=divisor_log, divisor_integral=divisor_integral,
                   parabolic=parabolic, lambda_sum=lambda_sum,
                   square_term=0.0, identity=identity)


def spectral_sum(n, spec, cache=None, l_eps=1e-6):
    """sum_j F(r_j/2 pi) a_j(n) extracted as geometric total minus identity."""
    return geometric_side(n, spec, cache, l_eps).spectral_sum


def hyperbolic_only(p, spec, cache=None, l_eps=1e-6):
    """Just the hyperbolic field of the n = -p fast path."""
    return trace_minus_p(p, spec, cache, l_eps).hyperbolic


def first_order(p, spec, cache=None, l_eps=1e-6):
    """First-order hyperbolic approximation at n = -p:

    2 sqrt(p) sum_t L(1, psi_{t²+4p}) cos(Rt/sqrt p) sin(Ht/sqrt p)/(pi t)
    · What(h t / sqrt p), which equals sum_t L(1, psi_{t²+4p}) G(t/sqrt p)
    with the t = 0 summand by the removable-singularity limit.
    """
    p = int(p)
    sqp = math.sqrt(p)
    tmax = int(math.floor(sqp * spec.support))
    while (tmax / sqp) >= spec.support:
        tmax -= 1
    skip = p - 1 if p - 1 <= tmax else -1
    lvals = _l_values_minus_p(p, tmax, cache, l_eps)
    total = 0.0
    for t in range(0, tmax + 1):
        if t == skip or lvals[t] == 0.0:
            continue
        weight = 1.0 if t == 0 else 2.0
        total += weight * lvals[t] * big_g(spec, t / sqp)
    return total
