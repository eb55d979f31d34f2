"""Trace-formula spectral sums and murmuration densities for level-1
Maass forms.

Subpackage map:

  * ``core_arith``  — sieves, multiplicative functions, Kronecker symbols,
    discriminant decomposition, log eta(m);
  * ``dirichlet``   — quadratic characters, L(1, psi_D), averaged characters,
    persistent L-value cache;
  * ``testfn``      — smoothed window test functions (F, G) and quadrature;
  * ``trace``       — geometric side of the trace formula, itemized;
  * ``murmuration`` — conductor, prime windows, nu(E), figure rows;
  * ``eigen``       — optional external spectral-data ingestion;
  * ``cli``         — command-line front end (``murmur`` entry point).

Set ``MURMUR_NO_NUMBA=1`` to run the pure-Python/numpy kernel fallback.
"""

from ._kernels import NUMBA_ENABLED
from .core_arith import (PrimeTable, decompose_discriminant, is_perfect_square,
                         kronecker, log_eta, sieve_primes)
from .dirichlet import (CharacterPsiD, LValueCache, l_one_avg,
                        l_one_fundamental, l_one_general, psi_bar_t,
                        psi_D_eval)
from .errors import (DomainError, MurmurError, NumericError, ParseError,
                     ResourceError)
from .murmuration import (IntervalE, conductor, denominator, digamma, figure1,
                          nu, numerator, prime_window, major_arc_check,
                          weyl_count, weyl_window)
from .testfn import TestFunctionSpec, big_g, big_g_prime, f_eval, w_eval, w_hat
from .trace import (GeomBreakdown, first_order, geometric_side,
                    hyperbolic_only, spectral_sum, trace_minus_p)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED", "PrimeTable", "decompose_discriminant",
    "is_perfect_square", "kronecker", "log_eta", "sieve_primes",
    "CharacterPsiD", "LValueCache", "l_one_avg", "l_one_fundamental",
    "l_one_general", "psi_bar_t", "psi_D_eval", "DomainError", "MurmurError",
    "NumericError", "ParseError", "ResourceError", "IntervalE", "conductor",
    "denominator", "digamma", "figure1", "nu", "numerator", "prime_window",
    "major_arc_check", "weyl_count", "weyl_window", "TestFunctionSpec", "big_g",
    "big_g_prime", "f_eval", "w_eval", "w_hat", "GeomBreakdown",
    "first_order", "geometric_side", "hyperbolic_only", "spectral_sum",
    "trace_minus_p", "__version__",
]
