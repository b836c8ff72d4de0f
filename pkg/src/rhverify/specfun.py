"""Enclosures of digamma, trigamma and log-gamma.

All three use the same scheme: shift the argument right with the recurrence until
``|w| >= max(10, prec/4)``, then sum the Stirling-type asymptotic series.  The
series remainder comes from the Bernoulli-function integral representation

    log G(w) - (Stirling partial sum) = int_0^inf (B_2n - B~_2n(u)) / (2n (u + w)^(2n)) du

with ``|B_2n - B~_2n(u)| <= 2|B_2n|`` and ``|u + w| >= (u + |w|) cos(arg(w)/2)``
for ``Re w > 0``.  Differentiating under the integral gives the digamma and
trigamma remainders.  Every remainder is added to the radius.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import bernfrac

from .errors import DomainError
from .ival import Ball, CBall, euler_ball, get_prec, log2_ball, pi_ball, pm

_MAX_TERMS = 400


@functools.lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    p, q = bernfrac(n)
    return Fraction(int(p), int(q))


def _shift_target() -> int:
    return max(10, get_prec() // 4)


def _tiny() -> Ball:
    return Ball(Fraction(1, 2 ** (get_prec() + 16)))


# --------------------------------------------------------------- real digamma
def _digamma_point(x: Ball) -> Ball:
    target = _shift_target()
    m = max(0, math.ceil(target - float(x.lo)))
    w = x + m
    inv = 1 / w
    inv2 = inv.square()
    total = w.log() - inv / 2
    power = inv2
    tiny = _tiny()
    wlo = w.lower()
    for k in range(1, _MAX_TERMS):
        b2k = _bernoulli(2 * k)
        # remainder if the series stops before the k-th term
        bound = 2 * abs(b2k) / (2 * k * wlo ** (2 * k))
        if bound.lt(tiny) or k == _MAX_TERMS - 1:
            total = total + pm(bound.upper())
            break
        total = total - Ball(b2k / (2 * k)) * power
        power = power * inv2
    for j in range(m):
        total = total - 1 / (x + j)
    return total


def digamma(x: Ball) -> Ball:
    """Enclosure of psi_0 over a positive interval (digamma is increasing there)."""
    x = Ball(x)
    if not x.is_positive():
        raise DomainError(f"digamma needs a positive argument, got {x!r}")
    if x.is_point():
        return _digamma_point(x)
    lo = _digamma_point(x.lower())
    hi = _digamma_point(x.upper())
    return lo.lower().union(hi.upper())


# --------------------------------------------------------------- real trigamma
def _trigamma_point(x: Ball) -> Ball:
    target = _shift_target()
    m = max(0, math.ceil(target - float(x.lo)))
    w = x + m
    inv = 1 / w
    inv2 = inv.square()
    total = inv + inv2 / 2
    power = inv2 * inv
    tiny = _tiny()
    wlo = w.lower()
    for k in range(1, _MAX_TERMS):
        b2k = _bernoulli(2 * k)
        bound = 2 * abs(b2k) / wlo ** (2 * k + 1)
        if bound.lt(tiny) or k == _MAX_TERMS - 1:
            total = total + pm(bound.upper())
            break
        total = total + Ball(b2k) * power
        power = power * inv2
    for j in range(m):
        total = total + 1 / (x + j).square()
    return total


def polygamma1(x: Ball) -> Ball:
    """Enclosure of the trigamma function psi_1 over a positive interval.

    Uses the standard sign convention, so psi_1(1/2) = +pi**2/2.
    """
    x = Ball(x)
    if not x.is_positive():
        raise DomainError(f"trigamma needs a positive argument, got {x!r}")
    if x.is_point():
        return _trigamma_point(x)
    # trigamma is decreasing on (0, inf)
    lo = _trigamma_point(x.upper())
    hi = _trigamma_point(x.lower())
    return lo.lower().union(hi.upper())


# ------------------------------------------------------------ complex helpers
def _shift_complex(z: CBall) -> int:
    target = _shift_target()
    if z.re.is_positive() and abs(z).ge(target):
        return 0
    return max(1, math.ceil(target - float(z.re.lo)))


def _sec_half_arg_sq(w: CBall) -> Ball:
    """Upper bound for sec(arg(w)/2)**2 = 2/(1 + cos(arg w)), valid for Re w > 0."""
    cos_arg = (w.re / abs(w)).lower()
    return (Ball(2) / (1 + cos_arg)).upper()


def digamma_complex(z: CBall) -> CBall:
    """Enclosure of psi_0(z) for Re z > 0."""
    if not z.re.is_positive():
        raise DomainError(f"complex digamma needs Re z > 0, got {z!r}")
    m = _shift_complex(z)
    w = z + m
    inv = 1 / w
    inv2 = inv * inv
    total = w.log() - inv * Fraction(1, 2)
    power = inv2
    sec2 = _sec_half_arg_sq(w)
    abs_lo = abs(w).lower()
    tiny = _tiny()
    for k in range(1, _MAX_TERMS):
        b2k = _bernoulli(2 * k)
        bound = 2 * abs(b2k) * sec2 ** k * sec2.sqrt() / (2 * k * abs_lo ** (2 * k))
        if bound.lt(tiny) or k == _MAX_TERMS - 1:
            total = total.add_error(bound)
            break
        total = total - power * (b2k / (2 * k))
        power = power * inv2
    for j in range(m):
        total = total - 1 / (z + j)
    return total


def digamma_complex_re(z: CBall) -> Ball:
    """Enclosure of Re psi_0(z) for Re z > 0."""
    return digamma_complex(z).re


def loggamma_complex(z: CBall) -> CBall:
    """Enclosure of a logarithm of Gamma(z) for Re z > 0.

    The real part is log|Gamma(z)|.  The imaginary part is the continuous branch
    obtained from the shifted principal logs; only ``exp(i*Im)`` is branch-free.
    """
    if not z.re.is_positive():
        raise DomainError(f"complex log-gamma needs Re z > 0, got {z!r}")
    m = _shift_complex(z)
    w = z + m
    inv = 1 / w
    inv2 = inv * inv
    log2pi = (2 * pi_ball()).log()
    total = (w - Fraction(1, 2)) * w.log() - w + CBall(log2pi / 2, 0)
    power = inv
    sec2 = _sec_half_arg_sq(w)
    abs_lo = abs(w).lower()
    tiny = _tiny()
    for k in range(1, _MAX_TERMS):
        b2k = _bernoulli(2 * k)
        bound = 2 * abs(b2k) * sec2 ** k / (2 * k * (2 * k - 1) * abs_lo ** (2 * k - 1))
        if bound.lt(tiny) or k == _MAX_TERMS - 1:
            total = total.add_error(bound)
            break
        total = total + power * (b2k / (2 * k * (2 * k - 1)))
        power = power * inv2
    for j in range(m):
        total = total - (z + j).log()
    return total


def log_abs_gamma_on_line(a: Ball, t: Ball) -> Ball:
    """Enclosure of log|Gamma(a + i t)| for a > 0."""
    a = Ball(a)
    if not a.is_positive():
        raise DomainError(f"log|Gamma(a+it)| needs a > 0, got {a!r}")
    return loggamma_complex(CBall(a, t)).re


# ------------------------------------------------------------------ constants
@dataclass(frozen=True)
class SpecialConstants:
    euler_lambda0: Ball
    log_pi: Ball
    log_2: Ball
    psi0_half: Ball
    psi1_half: Ball


def special_constants() -> SpecialConstants:
    """Closed forms at the working precision: psi_0(1/2) = -2 log 2 - lambda0, psi_1(1/2) = pi^2/2."""
    lam = euler_ball()
    log2 = log2_ball()
    pi = pi_ball()
    return SpecialConstants(
        euler_lambda0=lam,
        log_pi=pi.log(),
        log_2=log2,
        psi0_half=-2 * log2 - lam,
        psi1_half=pi.square() / 2,
    )
