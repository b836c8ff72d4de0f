"""Certified verification of zeros of zeta and L-functions from sums over zeros.

The core objects are enclosures (:class:`Ball`), the zero-sum constants
(:func:`w1`, :func:`w2`, :func:`v1z`), lists of certified zero intervals
(:class:`ZeroSet`) and the verdict engine in :mod:`rhverify.verify`.
"""

from importlib.metadata import PackageNotFoundError, version

from .errors import DataError, DomainError, PrecisionError, RHVerifyError, ValidationError
from .ival import Ball, CBall, get_prec, precision
from .lmodel import LFunctionParams, builtin_instance, load_params, make_dirichlet, make_elliptic, make_ramanujan
from .logderiv import logderiv2_L, logderiv_L, v1_riemann, v1z, w1, w2
from .verify import Verdict, l_context, max_eta, tail_bounds, verdict_l, verdict_zeta, zeta_context
from .zeros import ZeroInterval, ZeroSet, c_sum, certify_zeros, d_sum, ingest, xi_enclosure

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

__all__ = [
    "Ball", "CBall", "DataError", "DomainError", "LFunctionParams", "PrecisionError",
    "RHVerifyError", "ValidationError", "Verdict", "ZeroInterval", "ZeroSet",
    "builtin_instance", "c_sum", "certify_zeros", "d_sum", "get_prec", "ingest",
    "l_context", "load_params", "logderiv2_L", "logderiv_L", "make_dirichlet",
    "make_elliptic", "make_ramanujan", "max_eta", "precision", "tail_bounds",
    "v1_riemann", "v1z", "verdict_l", "verdict_zeta", "w1", "w2", "xi_enclosure",
    "zeta_context",
]
