"""Hot numeric kernels, JIT-compiled with numba when available.

Every function here is written in nopython-compatible style so the same
source runs in two modes:

  * numba mode (default): functions are compiled with ``@njit(cache=True)``;
  * pure-Python/numpy fallback: set ``MURMUR_NO_NUMBA=1`` (or numba missing)
    and the decorator becomes a no-op.

``NUMBA_ENABLED`` reports which mode is active.  ``benchmarks/bench_kernels.py``
times the two modes against each other.

Kernels take plain scalars/ndarrays only; all caching, validation and
orchestration lives in the public modules.
"""

import math
import os

import numpy as np

_flag = os.environ.get("MURMUR_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED_OFF = _flag in ("1", "true", "yes", "on")

try:
    if NUMBA_REQUESTED_OFF:
        raise ImportError("numba disabled via MURMUR_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - exercised via env flag
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


_EULER_GAMMA = 0.5772156649015328606

# 16-point Gauss-Legendre rule on [-1, 1]; used by all composite panels here.
_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)


# ----------------------------------------------------------------------
# integer arithmetic
# ----------------------------------------------------------------------

@njit(cache=True)
def kron(a, n):
    """Kronecker symbol (a|n), full extension to all integers."""
    if n == 0:
        if a == 1 or a == -1:
            return 1
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            r = a % 8
            if r == 3 or r == 5:
                result = -result
    a = a % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        tmp = a
        a = n
        n = tmp
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    if n == 1:
        return result
    return 0


@njit(cache=True)
def sieve_spf(limit):
    """Smallest-prime-factor table for 0..limit (spf[0]=spf[1]=1)."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        spf[1] = 1
    i = 2
    while i * i <= limit:
        if spf[i] == 0:
            j = i * i
            while j <= limit:
                if spf[j] == 0:
                    spf[j] = i
                j += i
        i += 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
    return spf


@njit(cache=True)
def sieve_primes(limit):
    """Ascending int64 array of primes <= limit."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    comp = np.zeros(limit + 1, dtype=np.uint8)
    i = 2
    while i * i <= limit:
        if comp[i] == 0:
            j = i * i
            while j <= limit:
                comp[j] = 1
                j += i
        i += 1
    count = 0
    for i in range(2, limit + 1):
        if comp[i] == 0:
            count += 1
    out = np.empty(count, dtype=np.int64)
    k = 0
    for i in range(2, limit + 1):
        if comp[i] == 0:
            out[k] = i
            k += 1
    return out


@njit(cache=True)
def decompose_many(ds, spf):
    """Split each discriminant D (|D| < len(spf)) as D = d·ell² with d fundamental.

    Returns (fund, ell) int64 arrays.  Entries must satisfy D ≡ 0,1 (mod 4),
    D ≠ 0; the caller guarantees this.
    """
    m = ds.shape[0]
    fund = np.empty(m, dtype=np.int64)
    ell = np.empty(m, dtype=np.int64)
    for idx in range(m):
        d0 = ds[idx]
        neg = d0 < 0
        x = -d0 if neg else d0
        core = 1  # squarefree part of |D|
        sq = 1   # sqrt of the square part
        while x > 1:
            p = spf[x]
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            if e % 2 == 1:
                core *= p
            half = e // 2
            for _ in range(half):
                sq *= p
        if neg:
            core = -core
        # core mod 4 in {0,1,2,3} with python semantics
        if core % 4 == 1:
            fund[idx] = core
            ell[idx] = sq
        else:
            fund[idx] = 4 * core
            ell[idx] = sq // 2
    return fund, ell


# ----------------------------------------------------------------------
# special functions
# ----------------------------------------------------------------------

@njit(cache=True)
def e1(x):
    """Exponential integral E1(x), x > 0."""
    if x > 700.0:
        return 0.0
    if x <= 1.0:
        # power series around 0
        s = -_EULER_GAMMA - math.log(x)
        term = 1.0
        k = 1
        while k < 60:
            term *= -x / k
            add = -term / k
            s += add
            if abs(add) < 1e-18:
                break
            k += 1
        return s
    # modified Lentz continued fraction
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    hfrac = d
    for i in range(1, 300):
        an = -1.0 * i * i
        b += 2.0
        d = b + an * d
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delt = d * c
        hfrac *= delt
        if abs(delt - 1.0) < 1e-16:
            break
    return hfrac * math.exp(-x)


@njit(cache=True)
def l_chi_one(d, eps):
    """L(1, chi_d) for a fundamental discriminant d, |d| > 1.

    Smoothed (theta-kernel) series: two incomplete-gamma-weighted character
    sums of length O(sqrt(|d|)), exact up to a tail below eps.
    """
    q = -d if d < 0 else d
    nmax = int(math.sqrt(q / math.pi * math.log(10.0 * (q + 2.0) / eps))) + 3
    beta = math.sqrt(math.pi / q)
    rq = 1.0 / math.sqrt(q)
    s = 0.0
    if d > 0:
        for n in range(1, nmax + 1):
            c = kron(d, n)
            if c != 0:
                s += c * (math.erfc(n * beta) / n + e1(math.pi * n * n / q) * rq)
    else:
        for n in range(1, nmax + 1):
            c = kron(d, n)
            if c != 0:
                s += c * (math.exp(-math.pi * n * n / q) / n
                          + math.pi * rq * math.erfc(n * beta))
    return s


# ----------------------------------------------------------------------
# test-function evaluation (tabulated bump)
# ----------------------------------------------------------------------

@njit(cache=True, fastmath=False)
def w_hat_eval(x, bump_id, tab_y, tab_d):
    """Ŵ(|x|): cubic-Hermite table for bump_id=0 (autocorr), closed form for 1."""
    if x < 0.0:
        x = -x
    if x >= 1.0:
        return 0.0
    if bump_id == 1:
        return math.exp(1.0 - 1.0 / (1.0 - x * x))
    k = tab_y.shape[0] - 1
    xf = x * k
    j = int(xf)
    if j >= k:
        j = k - 1
    s = xf - j
    s2 = s * s
    s3 = s2 * s
    return ((2.0 * s3 - 3.0 * s2 + 1.0) * tab_y[j]
            + (s3 - 2.0 * s2 + s) * tab_d[j]
            + (-2.0 * s3 + 3.0 * s2) * tab_y[j + 1]
            + (s3 - s2) * tab_d[j + 1])


@njit(cache=True)
def g_eval(u, R, H, h, bump_id, tab_y, tab_d):
    """G(u) = 2 cos(Ru) sin(Hu)/(πu) · Ŵ(uh), removable singularity at 0."""
    au = -u if u < 0.0 else u
    if au * h >= 1.0:
        return 0.0
    w = w_hat_eval(au * h, bump_id, tab_y, tab_d)
    if au * (R + H) < 1e-2:
        t2 = u * u
        c3 = H * H * H / 6.0 + H * R * R / 2.0
        c5 = (H ** 5) / 120.0 + (H ** 3) * R * R / 12.0 + H * (R ** 4) / 24.0
        amp = (2.0 / math.pi) * (H - c3 * t2 + c5 * t2 * t2)
    else:
        amp = 2.0 * math.cos(R * u) * math.sin(H * u) / (math.pi * u)
    return amp * w


@njit(cache=True)
def g_many(us, R, H, h, bump_id, tab_y, tab_d):
    out = np.empty(us.shape[0], dtype=np.float64)
    for i in range(us.shape[0]):
        out[i] = g_eval(us[i], R, H, h, bump_id, tab_y, tab_d)
    return out


@njit(cache=True)
def _panel_count(lo, hi, R, h):
    """Composite-panel count: width ≤ min((1/h)/8, π/(2R))."""
    cap = (1.0 / h) / 8.0
    osc = math.pi / (2.0 * R)
    if osc < cap:
        cap = osc
    n = int((hi - lo) / cap) + 1
    if n < 2:
        n = 2
    return n


@njit(cache=True)
def para_shift_integral(c, R, H, h, bump_id, tab_y, tab_d, glx, glw):
    """∫_0^∞ (G(u+c) − G(c)) / (2 sinh(u/2)) du for the parabolic term."""
    sup = 1.0 / h
    gc = g_eval(c, R, H, h, bump_id, tab_y, tab_d)
    if gc == 0.0:
        lo = -c - sup
        hi = -c + sup
        if lo < 0.0:
            lo = 0.0
        if hi <= lo:
            return 0.0
        npan = _panel_count(lo, hi, R, h)
        wpan = (hi - lo) / npan
        tot = 0.0
        for ip in range(npan):
            a0 = lo + ip * wpan
            mid = a0 + 0.5 * wpan
            hw = 0.5 * wpan
            for j in range(glx.shape[0]):
                u = mid + hw * glx[j]
                val = g_eval(u + c, R, H, h, bump_id, tab_y, tab_d) / (2.0 * math.sinh(u / 2.0))
                tot += glw[j] * hw * val
        return tot
    # |c| < 1/h: removable singularity at u = 0, finite tail beyond U
    upper = sup - c
    npan = _panel_count(0.0, upper, R, h)
    wpan = upper / npan
    tot = 0.0
    for ip in range(npan):
        a0 = ip * wpan
        mid = a0 + 0.5 * wpan
        hw = 0.5 * wpan
        for j in range(glx.shape[0]):
            u = mid + hw * glx[j]
            val = (g_eval(u + c, R, H, h, bump_id, tab_y, tab_d) - gc) / (2.0 * math.sinh(u / 2.0))
            tot += glw[j] * hw * val
    # ∫_U^∞ (−gc)/(2 sinh(u/2)) du = gc·log tanh(U/4)
    tot += gc * math.log(math.tanh(upper / 4.0))
    return tot


@njit(cache=True)
def divisor_eps_integral(u0, s_ad, eps_sign, R, H, h, bump_id, tab_y, tab_d, glx, glw):
    """∫_{u0}^{1/h} G(u)(e^{u/2}+ε e^{−u/2})/(e^{u/2}−ε e^{−u/2}+s_ad) du."""
    sup = 1.0 / h
    lo = u0 if u0 > 0.0 else 0.0
    if lo >= sup:
        return 0.0
    npan = _panel_count(lo, sup, R, h)
    wpan = (sup - lo) / npan
    tot = 0.0
    for ip in range(npan):
        a0 = lo + ip * wpan
        mid = a0 + 0.5 * wpan
        hw = 0.5 * wpan
        for j in range(glx.shape[0]):
            u = mid + hw * glx[j]
            ep = math.exp(u / 2.0)
            em = 1.0 / ep
            num = ep + eps_sign * em
            den = ep - eps_sign * em + s_ad
            val = g_eval(u, R, H, h, bump_id, tab_y, tab_d) * num / den
            tot += glw[j] * hw * val
    return tot


@njit(cache=True)
def lambda_branch(c, mvals, lams, R, H, h, bump_id, tab_y, tab_d):
    """Σ over prime powers m with |c − 2 log m| < 1/h of Λ(m)/m · G(c − 2 log m)."""
    sup = 1.0 / h
    lo_m = math.exp((c - sup) / 2.0)
    hi_m = math.exp((c + sup) / 2.0)
    # binary search for first index with mvals >= lo_m
    nvals = mvals.shape[0]
    lo_i = 0
    hi_i = nvals
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if mvals[mid] < lo_m:
            lo_i = mid + 1
        else:
            hi_i = mid
    tot = 0.0
    i = lo_i
    while i < nvals and mvals[i] < hi_m:
        m = mvals[i]
        arg = c - 2.0 * math.log(m)
        tot += (lams[i] / m) * g_eval(arg, R, H, h, bump_id, tab_y, tab_d)
        i += 1
    return tot


@njit(cache=True)
def hyperbolic_sum_neg(p, tmax, skip_t, lvals, R, H, h, bump_id, tab_y, tab_d):
    """Folded hyperbolic sum for n = −p: Σ_t weight·L(1,ψ_{t²+4p})·G(2 asinh(t/2√p)).

    lvals[t] holds L(1,ψ_{t²+4p}) for t = 0..tmax; skip_t is excluded
    (square discriminant), pass −1 for none.
    """
    inv = 1.0 / (2.0 * math.sqrt(p))
    tot = 0.0
    for t in range(tmax + 1):
        if t == skip_t:
            continue
        lv = lvals[t]
        if lv == 0.0:
            continue
        arg = 2.0 * math.asinh(t * inv)
        g = g_eval(arg, R, H, h, bump_id, tab_y, tab_d)
        if g == 0.0:
            continue
        wgt = 1.0 if t == 0 else 2.0
        tot += wgt * lv * g
    return tot


# ----------------------------------------------------------------------
# averaged characters ψ̄_t
# ----------------------------------------------------------------------

@njit(cache=True)
def psi_pk(D, p, k):
    """ψ_D(p^k) = kronecker(d, p^k / gcd(p^k, ell)) without factoring D.

    Requires D ≠ 0, D ≡ 0,1 (mod 4).  Uses only v_p(D) and a single
    small symbol, valid for any sign of D.
    """
    v = 0
    a = D
    while a % p == 0:
        a //= p
        v += 1
    if p == 2:
        # v_2(d) is 0 (d odd), 2 (d = 4m, m = 3 mod 4), or 3 (d = 8m');
        # in each case lam = v_2(ell) follows from v and a = D >> v.
        if v % 2 == 1:
            lam = (v - 3) // 2
            return 1 if lam >= k else 0
        if a % 4 == 3:
            lam = (v - 2) // 2
            return 1 if lam >= k else 0
        lam = v // 2
        if lam >= k:
            return 1
        e = k - lam
        s = 1 if a % 8 == 1 else -1
        return s if e % 2 == 1 else 1
    # odd p: v_p(d) = v mod 2, lam = (v - v_p(d)) / 2
    if v % 2 == 1:
        lam = (v - 1) // 2
        return 1 if lam >= k else 0
    lam = v // 2
    if lam >= k:
        return 1
    e = k - lam
    s = kron(a, p)
    return s if e % 2 == 1 else 1


@njit(cache=True)
def psi_bar_pp_numer(t, p, k, sign):
    """Σ_{n mod p^{2k}, p∤n} ψ_{t²+sign·4n}(p^k) as an exact integer.

    For sign=−1 the representative is shifted by +4·p^{2k} so the evaluated
    discriminant is positive; ψ_D(p^k) depends on D only mod 4·p^{2k}.
    """
    pk = 1
    for _ in range(k):
        pk *= p
    m2 = pk * pk
    tt = t * t
    tot = 0
    for n in range(1, m2 + 1):
        if n % p == 0:
            continue
        if sign > 0:
            d0 = tt + 4 * n
        else:
            d0 = tt - 4 * n
            while d0 <= 0:
                d0 += 4 * m2
        tot += psi_pk(d0, p, k)
    return tot


# ----------------------------------------------------------------------
# murmuration density ν(E)
# ----------------------------------------------------------------------

@njit(cache=True)
def _zeta3_tail(m, z3tab):
    """Σ_{b ≥ m} b^{−3}; table below 64, Euler–Maclaurin beyond."""
    if m < 64:
        return z3tab[m]
    x = float(m)
    return (0.5 / (x * x) + 0.5 / (x ** 3) + 0.25 / (x ** 4)
            - 1.0 / (12.0 * x ** 6))


@njit(cache=True)
def nu_scan(q0, q1, lo, hi, primes, z3tab):
    """Σ over squarefree q in [q0, q1) of the full (a-summed) ν(E) weight.

    For each squarefree q: weight (q/φ)²·(q/σ) times Σ over a coprime to q
    with q²/a² ∈ [lo, hi] of (q·/a)^... the a-part Σ a^{−3} (the q³ is folded
    into the weight), endpoint terms halved.  The a-sum is exact (to fp) via
    Möbius inversion over q's prime divisors and ζ(3)-tail evaluation.
    Division by ζ(2) is applied by the caller.
    """
    total = 0.0
    comp = 0.0
    fac = np.empty(16, dtype=np.int64)
    for q in range(q0, q1):
        rem = q
        nf = 0
        sqfree = True
        phi = 1.0
        sig = 1.0
        for i in range(primes.shape[0]):
            pp = primes[i]
            if pp * pp > rem:
                break
            if rem % pp == 0:
                rem //= pp
                if rem % pp == 0:
                    sqfree = False
                    break
                fac[nf] = pp
                nf += 1
                phi *= pp - 1.0
                sig *= pp + 1.0
        if not sqfree:
            continue
        if rem > 1:
            fac[nf] = rem
            nf += 1
            phi *= rem - 1.0
            sig *= rem + 1.0
        qf = float(q)
        wq = (qf / phi) * (qf / phi) * (qf / sig)
        # a-range from q²/a² ∈ [lo, hi]
        rhi = qf / math.sqrt(hi)
        amin = int(math.ceil(rhi - 1e-12))
        if amin < 1:
            amin = 1
        amax = -1
        if lo > 0.0:
            rlo = qf / math.sqrt(lo)
            amax = int(math.floor(rlo + 1e-12))
            if amax < amin:
                continue
        # Σ_{amin ≤ a ≤ amax, gcd(a,q)=1} a^{−3}
        s = 0.0
        for mask in range(1 << nf):
            dd = 1
            bits = 0
            for j in range(nf):
                if (mask >> j) & 1:
                    dd *= fac[j]
                    bits += 1
            b_lo = (amin + dd - 1) // dd
            if b_lo < 1:
                b_lo = 1
            part = _zeta3_tail(b_lo, z3tab)
            if amax >= 0:
                part -= _zeta3_tail(amax // dd + 1, z3tab)
            ddf = float(dd)
            contrib = part / (ddf * ddf * ddf)
            if bits % 2 == 1:
                s -= contrib
            else:
                s += contrib
        # endpoint halving at q²/a² = hi
        ab = int(math.floor(rhi + 0.5))
        if ab >= 1 and abs(hi * ab * ab - qf * qf) <= 1e-9 * qf * qf:
            cop = True
            for j in range(nf):
                if ab % fac[j] == 0:
                    cop = False
                    break
            if cop and ab >= amin and (amax < 0 or ab <= amax):
                s -= 0.5 / (float(ab) ** 3)
        # endpoint halving at q²/a² = lo
        if lo > 0.0:
            rlo = qf / math.sqrt(lo)
            ab = int(math.floor(rlo + 0.5))
            if ab >= 1 and abs(lo * ab * ab - qf * qf) <= 1e-9 * qf * qf:
                cop = True
                for j in range(nf):
                    if ab % fac[j] == 0:
                        cop = False
                        break
                if cop and ab >= amin and (amax < 0 or ab <= amax):
                    s -= 0.5 / (float(ab) ** 3)
        term = wq * s
        # Kahan step
        y = term - comp
        tcand = total + y
        comp = (tcand - total) - y
        total = tcand
    return total
