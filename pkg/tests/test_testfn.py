import math

import numpy as np
import pytest

from murmur import testfn
from murmur.errors import DomainError, NumericError


def test_spec_validation():
    testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    with pytest.raises(DomainError):
        testfn.TestFunctionSpec(R=100.0, H=10.0, h=0.5)  # h > 1 required
    with pytest.raises(DomainError):
        testfn.TestFunctionSpec(R=100.0, H=2.0, h=3.0)  # h < H required
    with pytest.raises(DomainError):
        testfn.TestFunctionSpec(R=11.0, H=10.0, h=2.0)  # R - H > h required
    with pytest.raises(DomainError):
        testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0, bump="triangle")


def test_w_hat_shape():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    assert testfn.w_hat(spec, 0.0) == 1.0
    assert testfn.w_hat(spec, 1.0) == 0.0
    assert testfn.w_hat(spec, 1.5) == 0.0
    # even, and monotone decreasing on [0, 1]
    xs = np.linspace(0.0, 1.0, 200)
    ys = np.array([testfn.w_hat(spec, x) for x in xs])
    assert np.all(np.diff(ys) <= 1e-12)
    assert testfn.w_hat(spec, -0.3) == pytest.approx(testfn.w_hat(spec, 0.3))


def test_w_hat_exp_closed_form():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0, bump="exp")
    t = 0.25
    assert testfn.w_hat(spec, t) == pytest.approx(math.exp(1.0 - 1.0 / (1.0 - t * t)))


def test_big_g_support_and_center():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    assert testfn.big_g(spec, 0.0) == pytest.approx(2.0 * spec.H / math.pi)
    assert testfn.big_g(spec, spec.support + 1e-9) == 0.0
    assert testfn.big_g(spec, -spec.support - 1e-9) == 0.0
    assert testfn.big_g(spec, spec.support * 0.9) != 0.0
    # even function
    for t in (0.01, 0.1, 0.3):
        assert testfn.big_g(spec, -t) == pytest.approx(testfn.big_g(spec, t))


def test_big_g_small_t_series_continuity():
    # the series branch and the direct product must agree where they meet
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    cut = 1e-2 / (spec.R + spec.H)
    for t in (cut * 0.999, cut * 1.001):
        direct = (2.0 * math.cos(spec.R * t) * math.sin(spec.H * t)
                  / (math.pi * t) * testfn.w_hat(spec, t * spec.h))
        assert testfn.big_g(spec, t) == pytest.approx(direct, rel=1e-10)


def test_big_g_prime_vs_central_difference():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    step = 1e-6
    ts = np.linspace(-spec.support * 0.98, spec.support * 0.98, 101)
    for t in ts:
        fd = (testfn.big_g(spec, t + step) - testfn.big_g(spec, t - step)) / (2 * step)
        assert testfn.big_g_prime(spec, t) == pytest.approx(fd, abs=1e-5, rel=1e-5)


def test_big_g_many_matches_scalar():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    ts = np.linspace(-0.6, 0.6, 257)
    vals = testfn.big_g_many(spec, ts)
    for t, v in zip(ts, vals):
        assert v == testfn.big_g(spec, t)


def test_quad_examples():
    q = testfn.QuadratureSpec(osc_freq=1.0, abs_eps=1e-12)
    assert testfn.quad(np.sin, 0.0, math.pi, q) == pytest.approx(2.0, abs=1e-12)
    assert testfn.quad(lambda u: np.exp(-u), 0.0, 40.0, q) == pytest.approx(1.0)
    qo = testfn.QuadratureSpec(osc_freq=50.0, abs_eps=1e-12)
    got = testfn.quad(lambda u: np.cos(50.0 * u), 0.0, 1.0, qo)
    assert got == pytest.approx(math.sin(50.0) / 50.0, abs=1e-12)


def test_quad_log_singularity():
    # integral of log(u) on (0, 1] is -1
    q = testfn.QuadratureSpec(osc_freq=1.0, abs_eps=1e-10)
    got = testfn.quad(np.log, 0.0, 1.0, q, singularity="log0")
    assert got == pytest.approx(-1.0, abs=1e-8)


def test_quad_nonconvergence_reports_estimates():
    # frequency far beyond what 12 panel doublings can resolve
    q = testfn.QuadratureSpec(osc_freq=1.0, abs_eps=1e-18)
    with pytest.raises(NumericError) as exc:
        testfn.quad(lambda u: np.sin(1e6 * u) ** 2, 0.0, 3.0, q)
    assert len(exc.value.estimates) == 2


def test_w_nonnegative_and_normalized():
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    xs = np.linspace(0.0, 50.0, 400)
    ws = testfn.w_eval_grid(spec, xs)
    assert np.min(ws) >= -1e-9
    def wh(ts):
        return np.array([testfn.w_hat(spec, t) for t in np.atleast_1d(ts)])

    assert ws[0] == pytest.approx(2.0 * testfn.quad(
        wh, 0.0, 1.0, testfn.QuadratureSpec(osc_freq=1.0, abs_eps=1e-12)))
    assert testfn.w_eval(spec, 7.3) == pytest.approx(float(
        testfn.w_eval_grid(spec, np.array([7.3]))[0]))


def test_f_eval_dual_methods_agree(spec_small):
    xs = np.linspace(0.05, 30.0, 20)
    for x in xs:
        a = testfn.f_eval(spec_small, x, method="fourier")
        b = testfn.f_eval(spec_small, x, method="conv")
        assert a == pytest.approx(b, abs=1e-6), x


def test_f_zero_is_total_mass(spec_small):
    # F(0) equals the integral of G over its support
    q = testfn.QuadratureSpec(osc_freq=spec_small.R + spec_small.H, abs_eps=1e-11)
    direct = 2.0 * testfn.quad(lambda u: testfn.big_g_many(spec_small, u),
                               0.0, spec_small.support, q)
    assert testfn.f_zero(spec_small) == pytest.approx(direct, rel=1e-9)


def test_f_at_i_over_4pi_positive(spec_small):
    q = testfn.QuadratureSpec(osc_freq=spec_small.R + spec_small.H, abs_eps=1e-11)
    direct = 2.0 * testfn.quad(
        lambda u: testfn.big_g_many(spec_small, u) * np.cosh(0.5 * u),
        0.0, spec_small.support, q)
    assert testfn.f_at_i_over_4pi(spec_small) == pytest.approx(direct, rel=1e-9)
