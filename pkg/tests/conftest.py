import math

import pytest

from murmur import dirichlet, testfn

# Class-number-formula values for L(1, psi_d): independent oracle,
# 2 h log(eps_d)/sqrt(d) for d > 0 and 2 pi h / (w sqrt|d|) for d < 0.
CLASS_NUMBER_L = {
    5: 2.0 * math.log((1.0 + math.sqrt(5.0)) / 2.0) / math.sqrt(5.0),
    8: 2.0 * math.log(1.0 + math.sqrt(2.0)) / math.sqrt(8.0),
    12: 2.0 * math.log(2.0 + math.sqrt(3.0)) / math.sqrt(12.0),
    13: 2.0 * math.log((3.0 + math.sqrt(13.0)) / 2.0) / math.sqrt(13.0),
    -3: 2.0 * math.pi / (6.0 * math.sqrt(3.0)),
    -4: math.pi / 4.0,
    -7: math.pi / math.sqrt(7.0),
    -8: math.pi / math.sqrt(8.0),
}


@pytest.fixture(scope="session")
def spec_small():
    return testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)


@pytest.fixture(scope="session")
def lcache():
    return dirichlet.LValueCache()


def l_one_series_oracle(D, base=100_000):
    """Direct averaged Dirichlet series for L(1, psi_D): partial sums of
    sum psi_D(n)/n averaged over one full character period (4|D|), which
    cancels the oscillating tail to O(1/base)."""
    import numpy as np

    from murmur.core_arith import decompose_discriminant
    from murmur.dirichlet import psi_D_eval

    dec = decompose_discriminant(D)
    period = 4 * abs(D)
    top = base + period
    chi = np.array([psi_D_eval(dec, n) for n in range(1, top + 1)], dtype=float)
    partial = np.cumsum(chi / np.arange(1, top + 1))
    return float(np.mean(partial[base:]))
