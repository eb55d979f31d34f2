"""The accelerated kernels must agree with the pure-numpy fallback bit-for-bit
up to accumulated rounding; the fallback is selected via MURMUR_NO_NUMBA."""

import json
import os
import subprocess
import sys
import textwrap

import pytest

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

PROBE = textwrap.dedent("""
    import json
    import numpy as np
    from murmur import _kernels, dirichlet, testfn, trace

    out = {"numba": bool(_kernels.NUMBA_ENABLED)}
    spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
    ts = np.linspace(-0.49, 0.49, 101)
    out["g"] = [testfn.big_g(spec, float(t)) for t in ts]
    out["lchi"] = [float(_kernels.l_chi_one(d, 1e-8))
                   for d in (5, 8, -3, -4, 136, -511)]
    cache = dirichlet.LValueCache()
    out["trace"] = trace.trace_minus_p(1009, spec, cache).spectral_sum
    from murmur.murmuration import nu
    out["nu"] = nu((0.0, 1.5), tol=1e-7)
    print(json.dumps(out))
""")


def _probe(no_numba):
    env = dict(os.environ)
    if no_numba:
        env["MURMUR_NO_NUMBA"] = "1"
    else:
        env.pop("MURMUR_NO_NUMBA", None)
    proc = subprocess.run([sys.executable, "-c", PROBE], env=env,
                          capture_output=True, text=True, cwd=PKG_ROOT)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_fallback_matches_accelerated_path():
    fast = _probe(no_numba=False)
    slow = _probe(no_numba=True)
    assert fast["numba"] is True
    assert slow["numba"] is False
    for a, b in zip(fast["g"], slow["g"]):
        assert b == pytest.approx(a, rel=1e-13, abs=1e-300)
    for a, b in zip(fast["lchi"], slow["lchi"]):
        assert b == pytest.approx(a, rel=1e-12)
    assert slow["trace"] == pytest.approx(fast["trace"], rel=1e-10)
    assert slow["nu"] == pytest.approx(fast["nu"], rel=1e-10)


def test_flag_visible_in_process():
    from murmur import _kernels

    expected = os.environ.get("MURMUR_NO_NUMBA", "") == ""
    assert _kernels.NUMBA_ENABLED is expected
