"""Smoothed spectral window test functions and oscillatory quadrature.

The pair (F, G) is parametrized by (R, H, h) and a bump choice:

    F = (1_[(-R-H)/2pi, (-R+H)/2pi] + 1_[(R-H)/2pi, (R+H)/2pi]) * W_h,
    G(t) = 2 cos(Rt) sin(Ht) / (pi t) · What(t h),

where What is an even bump with What(0) = 1, support [-1, 1], non-increasing
on [0, 1], and W is its (inverse) Fourier transform, W_h(x) = W(x/h)/h.

Two bumps are provided:

  * ``autocorr`` — What = (b * b) / (b * b)(0) with b(s) = exp(-1/(1-4s²)) on
    |s| < 1/2.  Being an autocorrelation, its transform W = |bhat|²/norm is
    nonnegative everywhere.
  * ``exp`` — What(t) = exp(1 - 1/(1-t²)); W may go slightly negative.

The autocorr bump is tabulated once (cubic Hermite, 4096 cells) so the hot
kernels can evaluate it without recomputing the convolution.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NumericError

_BUMP_IDS = {"autocorr": 0, "exp": 1}
_TABLE_K = 4096
_GLX, _GLW = np.polynomial.legendre.leggauss(16)

# Convolution half-range used when evaluating F by direct convolution
# against W; the autocorr W decays superpolynomially, and this range is
# validated by the dual-computation test.
_CONV_RANGE = 60.0


def _bump_b(s):
    """b(s) = exp(-1/(1-4s²)) for |s| < 1/2, else 0 (vectorized)."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    mask = np.abs(s) < 0.5
    sm = s[mask]
    out[mask] = np.exp(-1.0 / (1.0 - 4.0 * sm * sm))
    return out


def _bump_b_prime(s):
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    mask = np.abs(s) < 0.5
    sm = s[mask]
    q = 1.0 - 4.0 * sm * sm
    out[mask] = np.exp(-1.0 / q) * (-8.0 * sm) / (q * q)
    return out


def _autocorr_pointwise(ts, deriv=False):
    """(b*b)(t) or its derivative for t >= 0 via composite Gauss-Legendre."""
    npan = 16
    vals = np.zeros_like(ts)
    for i, t in enumerate(ts):
        lo = max(-0.5, t - 0.5)
        hi = 0.5
        if hi <= lo:
            continue
        width = (hi - lo) / npan
        mids = lo + (np.arange(npan) + 0.5) * width
        nodes = (mids[:, None] + 0.5 * width * _GLX[None, :]).ravel()
        wts = np.tile(_GLW * 0.5 * width, npan)
        if deriv:
            f = _bump_b(nodes) * _bump_b_prime(t - nodes)
        else:
            f = _bump_b(nodes) * _bump_b(t - nodes)
        vals[i] = float(np.dot(wts, f))
    return vals


_TABLE_CACHE = {}


def bump_tables(bump):
    """(values, hermite_tangents) for What on [0, 1], cached per bump name.

    For the ``exp`` bump the kernels use the closed form; a placeholder pair
    is returned so call signatures stay uniform.
    """
    if bump not in _BUMP_IDS:
        raise DomainError("unknown bump %r; expected 'autocorr' or 'exp'" % (bump,))
    if bump in _TABLE_CACHE:
        return _TABLE_CACHE[bump]
    if bump == "exp":
        tabs = (np.zeros(2), np.zeros(2))
    else:
        ts = np.arange(_TABLE_K + 1, dtype=np.float64) / _TABLE_K
        norm = _autocorr_pointwise(np.array([0.0]))[0]
        ys = _autocorr_pointwise(ts) / norm
        ds = _autocorr_pointwise(ts, deriv=True) / norm
        ys[-1] = 0.0
        ds[-1] = 0.0
        ys[0] = 1.0
        ds[0] = 0.0  # even function
        tabs = (ys, ds / _TABLE_K)
    _TABLE_CACHE[bump] = tabs
    return tabs


@dataclass(frozen=True)
class TestFunctionSpec:
    """Window parameters (R, H, h), bump choice, and quadrature target."""

    R: float
    H: float
    h: float
    bump: str = "autocorr"
    quad_eps: float = 1e-9

    def __post_init__(self):
        if not self.h > 1:
            raise DomainError(
                "smoothing parameter must satisfy h > 1, got h = %g" % self.h)
        if not self.h < self.H:
            raise DomainError(
                "window constraint h < H violated: h = %g, H = %g"
                % (self.h, self.H))
        if not self.R - self.H > self.h:
            raise DomainError(
                "window constraint R - H > h violated: R = %g, H = %g, h = %g"
                % (self.R, self.H, self.h))
        if bump_id(self.bump) is None:
            raise DomainError("unknown bump %r" % (self.bump,))

    @property
    def support(self):
        """G vanishes outside [-support, support]."""
        return 1.0 / self.h


def bump_id(bump):
    return _BUMP_IDS.get(bump)


def _tabs(spec):
    return bump_tables(spec.bump)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre control: dominant frequency and error target."""

    osc_freq: float = 0.0
    panel_rule: int = 16
    abs_eps: float = 1e-9


def w_hat(spec, t):
    """What(t): even, What(0) = 1, zero outside (-1, 1)."""
    ty, td = _tabs(spec)
    return float(_kernels.w_hat_eval(float(abs(t)), bump_id(spec.bump), ty, td))


def w_hat_prime(spec, t):
    """d/dt What(t) (odd; 0 at t = 0 and outside the support)."""
    at = abs(t)
    if at >= 1.0:
        return 0.0
    sgn = 1.0 if t >= 0 else -1.0
    if spec.bump == "exp":
        q = 1.0 - at * at
        return sgn * math.exp(1.0 - 1.0 / q) * (-2.0 * at) / (q * q)
    ty, td = _tabs(spec)
    # linear interpolation of the tabulated derivative (tangents are
    # prescaled by 1/K)
    xf = at * _TABLE_K
    j = min(int(xf), _TABLE_K - 1)
    s = xf - j
    d = (1.0 - s) * td[j] + s * td[j + 1]
    return sgn * d * _TABLE_K


def big_g(spec, t):
    """G(t) = 2 cos(Rt) sin(Ht)/(pi t) · What(th); G(0) = 2H/pi."""
    ty, td = _tabs(spec)
    return float(_kernels.g_eval(float(t), spec.R, spec.H, spec.h,
                                 bump_id(spec.bump), ty, td))


def big_g_many(spec, ts):
    ty, td = _tabs(spec)
    return _kernels.g_many(np.ascontiguousarray(ts, dtype=np.float64),
                           spec.R, spec.H, spec.h, bump_id(spec.bump), ty, td)


def big_g_prime(spec, t):
    """Analytic derivative of G; odd, so big_g_prime(0) = 0."""
    t = float(t)
    at = abs(t)
    if at * spec.h >= 1.0:
        return 0.0
    R, H, h = spec.R, spec.H, spec.h
    w = w_hat(spec, at * h)
    wp = w_hat_prime(spec, at * h) * h  # chain rule, at |t|
    if at * (R + H) < 1e-2:
        c3 = H ** 3 / 6.0 + H * R * R / 2.0
        c5 = H ** 5 / 120.0 + H ** 3 * R * R / 12.0 + H * R ** 4 / 24.0
        amp = (2.0 / math.pi) * (H - c3 * t * t + c5 * t ** 4)
        amp_p = (2.0 / math.pi) * (-2.0 * c3 * t + 4.0 * c5 * t ** 3)
        # w_hat_prime already carries the sign of t via oddness
        sgn_t = 1.0 if t >= 0 else -1.0
        return amp_p * w + amp * wp * sgn_t
    amp = 2.0 * math.cos(R * t) * math.sin(H * t) / (math.pi * t)
    amp_p = (2.0 * (-R * math.sin(R * t) * math.sin(H * t)
                    + H * math.cos(R * t) * math.cos(H * t)) / (math.pi * t)
             - amp / t)
    sgn_t = 1.0 if t >= 0 else -1.0
    return amp_p * w + amp * wp * sgn_t


def quad(f, a, b, qspec, singularity=None):
    """Composite Gauss-Legendre integral of f over [a, b].

    Panel width is capped at (1/4)·(2 pi / osc_freq) when a dominant
    oscillation frequency is declared.  Panels are doubled until two
    successive estimates differ by at most abs_eps; non-convergence raises
    NumericError carrying the last two estimates.

    singularity:
      * None        — integrand finite on (a, b); endpoints never sampled.
      * 'sinh0'     — integrand has a removable 0/0 of 1/sinh(u/2) type at 0;
                      interior Gauss nodes make this safe without subtraction.
      * 'log0'      — integrable log singularity at a = 0: the slice [eps, delta]
                      is integrated under the substitution u = e^v.
    """
    if b <= a:
        return 0.0
    lead = 0.0
    if singularity == "log0":
        if a != 0.0:
            raise DomainError("log0 singularity handling requires a = 0")
        delta = min(1e-3, b)
        vlo, vhi = math.log(1e-12), math.log(delta)
        lead = quad(lambda v: f(np.exp(v)) * np.exp(v), vlo, vhi,
                    QuadratureSpec(0.0, qspec.panel_rule, qspec.abs_eps))
        a = delta
        if b <= a:
            return lead

    if qspec.osc_freq > 0.0:
        cap = 0.25 * (2.0 * math.pi / qspec.osc_freq)
        npan = max(2, int(math.ceil((b - a) / cap)))
    else:
        npan = 4

    def estimate(n):
        width = (b - a) / n
        mids = a + (np.arange(n) + 0.5) * width
        nodes = (mids[:, None] + 0.5 * width * _GLX[None, :]).ravel()
        vals = np.asarray(f(nodes), dtype=np.float64)
        wts = np.tile(_GLW * 0.5 * width, n)
        return float(np.dot(wts, vals))

    prev = estimate(npan)
    for _ in range(12):
        npan *= 2
        cur = estimate(npan)
        if abs(cur - prev) <= qspec.abs_eps:
            return lead + cur
        prev = cur
    raise NumericError(
        "quadrature failed to converge on [%g, %g]" % (a, b),
        estimates=(prev, cur))


def _g_quadspec(spec):
    return QuadratureSpec(osc_freq=spec.R + spec.H, abs_eps=spec.quad_eps)


def w_eval(spec, x):
    """W(x) = int_{-1}^{1} What(t) e^{2 pi i t x} dt = 2 int_0^1 What cos(2 pi t x) dt."""
    x = float(x)
    qs = QuadratureSpec(osc_freq=2.0 * math.pi * abs(x), abs_eps=spec.quad_eps)
    ty, td = _tabs(spec)
    bid = bump_id(spec.bump)

    def f(ts):
        ts = np.atleast_1d(ts)
        wh = np.array([_kernels.w_hat_eval(float(t), bid, ty, td) for t in ts])
        return 2.0 * wh * np.cos(2.0 * math.pi * ts * x)

    return quad(f, 0.0, 1.0, qs)


class _WEvaluator:
    """Vectorized W(x): fixed-panel quadrature nodes reused across x."""

    def __init__(self, spec, x_max):
        npan = max(8, int(math.ceil(4.0 * max(1.0, x_max))))
        width = 1.0 / npan
        mids = (np.arange(npan) + 0.5) * width
        self.nodes = (mids[:, None] + 0.5 * width * _GLX[None, :]).ravel()
        ty, td = _tabs(spec)
        bid = bump_id(spec.bump)
        wh = np.array([_kernels.w_hat_eval(float(t), bid, ty, td)
                       for t in self.nodes])
        self.weights = np.tile(_GLW * 0.5 * width, npan) * wh

    def __call__(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        phases = np.cos(2.0 * math.pi * np.outer(xs, self.nodes))
        return 2.0 * phases.dot(self.weights)


def w_eval_grid(spec, xs):
    """W at many points (same quadrature for all; accurate up to max |x|)."""
    xs = np.asarray(xs, dtype=np.float64)
    ev = _WEvaluator(spec, float(np.max(np.abs(xs))) if xs.size else 1.0)
    return ev(xs)


def f_eval(spec, x, method="fourier"):
    """F(x), computable two ways that must agree.

    * 'fourier': F(x) = int G(u) cos(2 pi u x) du over the support of G.
    * 'conv': direct convolution of the two indicator intervals with W_h.
    """
    x = float(x)
    if method == "fourier":
        qs = QuadratureSpec(osc_freq=spec.R + spec.H + 2.0 * math.pi * abs(x),
                            abs_eps=spec.quad_eps)

        def f(us):
            return 2.0 * big_g_many(spec, us) * np.cos(2.0 * math.pi * us * x)

        return quad(f, 0.0, spec.support, qs)
    if method != "conv":
        raise DomainError("unknown f_eval method %r" % (method,))
    R, H, h = spec.R, spec.H, spec.h
    twopi = 2.0 * math.pi
    total = 0.0
    ev = _WEvaluator(spec, _CONV_RANGE)
    for lo, hi in (((-R - H) / twopi, (-R + H) / twopi),
                   ((R - H) / twopi, (R + H) / twopi)):
        slo = max((x - hi) / h, -_CONV_RANGE)
        shi = min((x - lo) / h, _CONV_RANGE)
        if shi <= slo:
            continue
        qs = QuadratureSpec(osc_freq=2.0 * math.pi, abs_eps=spec.quad_eps)
        total += quad(lambda s: ev(s), slo, shi, qs)
    return total


def f_zero(spec):
    """F(0) = int G(u) du."""
    def f(us):
        return 2.0 * big_g_many(spec, us)

    return quad(f, 0.0, spec.support, _g_quadspec(spec))


def f_at_i_over_4pi(spec):
    """F(i/4 pi) = int G(u) e^{-u/2} du = 2 int_0^{1/h} G(u) cosh(u/2) du."""
    def f(us):
        return 2.0 * big_g_many(spec, us) * np.cosh(us / 2.0)

    return quad(f, 0.0, spec.support, _g_quadspec(spec))
