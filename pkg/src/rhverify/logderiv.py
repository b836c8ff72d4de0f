"""Truncated Dirichlet series for log-derivatives of L(s) and zeta, with tail bounds.

The tail bounds come from Chebyshev-function estimates
``u(1 - 2.85/log K) <= psi(u) <= u(1 + 2.85/log K)`` for ``u >= K >= 18``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Union

from mpmath.libmp import fone, from_int, from_man_exp, fzero, to_int, libmpi, mpf_lt, mpf_sub, round_ceiling

from .arith import MangoldtTable, sieve
from .errors import DomainError, PrecisionError, ValidationError
from .ival import Ball, CBall, _clip_unit, _widen, euler_ball, get_prec, log_int, pi_ball, pm, precision
from .lmodel import LFunctionParams
from .specfun import digamma, digamma_complex_re, polygamma1

CHEBYSHEV_CONST = Ball("2.85")
MIN_K = 18
DEFAULT_K_L = 10**5
DEFAULT_K_ZETA = 10**7


@dataclass(frozen=True)
class TruncationResult:
    sum: Union[Ball, CBall]
    remainder_radius: Ball
    K: int

    @property
    def total(self) -> Union[Ball, CBall]:
        if isinstance(self.sum, CBall):
            return self.sum.add_error(self.remainder_radius)
        return self.sum + pm(self.remainder_radius)


def _check_args(delta: Ball, K: int) -> Ball:
    delta = Ball(delta)
    if not delta.is_negative():
        raise DomainError(f"need delta < 0, got {delta!r}")
    if K < MIN_K:
        raise ValidationError(f"need K >= {MIN_K}, got {K}")
    return delta


def remainder_bound(K: int, delta: Ball, r: int = 1) -> Ball:
    """Upper bound (a point Ball) on |sum_{k>K} Lambda_L(k) k^(delta-1)| for delta < 0.

    The smaller of the Chebyshev-based bound and the bound from ``|Lambda_L(k)| <= r log k``.
    """
    delta = _check_args(delta, K)
    logK = log_int(K)
    Kd = (delta * logK).exp()
    cheb = r * Kd / delta * (CHEBYSHEV_CONST * (2 * delta - 1) / logK - 1)
    trivial = r * Kd * (1 - delta * logK) / delta.square()
    return cheb.upper() if cheb.hi <= trivial.hi else trivial.upper()


def remainder_bound2(K: int, delta: Ball, r: int = 1) -> Ball:
    """Upper bound on the tail of the series for the second log-derivative."""
    delta = _check_args(delta, K)
    logK = log_int(K)
    Kd = (delta * logK).exp()
    one_m = 1 - delta
    inner = (1 / one_m - delta * logK) / delta.square() * one_m * (1 + CHEBYSHEV_CONST / logK)
    return (r * Kd * (CHEBYSHEV_CONST - logK + inner)).upper()


def _power(k: int, logk: Ball, exponent: Ball) -> Ball:
    """k**exponent, exact for integer exponents."""
    if exponent.is_point():
        q = exponent.lower_exact()
        if q.denominator == 1:
            return Ball(k) ** int(q)
    return (exponent * logk).exp()


def _dirichlet_sum(params: LFunctionParams, delta: Ball, K: int, table: MangoldtTable | None,
                   weight_log: bool) -> Ball:
    table = table if table is not None and table.limit >= K else sieve(K)
    provider = params.provider
    provider.prepare(K)
    exponent = delta - 1
    total = Ball(0)
    for n, p, m in table:
        if n > K:
            break
        logn = m * log_int(p) if m > 1 else log_int(p)
        term = provider.lambda_L(p, m) * _power(n, logn, exponent)
        if weight_log:
            term = term * logn
        total = total + term
    return total


def logderiv_L(params: LFunctionParams, delta: Ball, K: int = DEFAULT_K_L,
               table: MangoldtTable | None = None) -> TruncationResult:
    """L'/L(1 - delta) = -sum_{k<=K} Lambda_L(k) k^(delta-1) + tail, for delta < 0."""
    delta = _check_args(delta, K)
    s = _dirichlet_sum(params, delta, K, table, weight_log=False)
    return TruncationResult(-s, remainder_bound(K, delta, params.r), K)


def logderiv2_L(params: LFunctionParams, delta: Ball, K: int = DEFAULT_K_L,
                table: MangoldtTable | None = None) -> TruncationResult:
    """(log L)''(1 - delta) = +sum_{k<=K} Lambda_L(k) log(k) k^(delta-1) + tail, for delta < 0."""
    delta = _check_args(delta, K)
    s = _dirichlet_sum(params, delta, K, table, weight_log=True)
    return TruncationResult(s, remainder_bound2(K, delta, params.r), K)


def _gamma_factor_w1(params: LFunctionParams, delta: Ball) -> Ball:
    total = log_int(params.N) / 2 - Ball(params.r) / 2 * pi_ball().log()
    for mu in params.mu:
        total = total + digamma((1 - delta + Ball(mu)) / 2) / 2
    return total


def w1(params: LFunctionParams, delta: Ball, K: int = DEFAULT_K_L,
       table: MangoldtTable | None = None, exact_logderiv: Ball | None = None) -> Ball:
    """Enclosure of sum over zeros of Re 1/(rho - delta) for the completed L-function.

    ``delta < 0`` uses the truncated series.  ``delta = 0`` needs ``exact_logderiv``,
    an enclosure of L'/L(1) supplied by the caller.
    """
    delta = Ball(delta)
    if exact_logderiv is not None:
        if not delta.le(0):
            raise DomainError(f"need delta <= 0, got {delta!r}")
        ld = Ball(exact_logderiv)
    elif delta.is_negative():
        ld = logderiv_L(params, delta, K, table).total
    else:
        raise DomainError(f"need delta < 0 (or exact_logderiv for delta = 0), got {delta!r}")
    return _gamma_factor_w1(params, delta) + ld


def w2(params: LFunctionParams, delta: Ball, K: int = DEFAULT_K_L,
       table: MangoldtTable | None = None) -> Ball:
    """Enclosure of sum over zeros of 1/(rho - delta)**2, which is real."""
    delta = _check_args(delta, K)
    tri = Ball(0)
    for mu in params.mu:
        tri = tri + polygamma1((1 - delta + Ball(mu)) / 2)
    d2 = logderiv2_L(params, delta, K, table).total / 2
    return -(tri / 4 + 2 * d2)


# ------------------------------------------------------------------- zeta
def _phase_bits_needed(y: Ball, K: int) -> int:
    mag = max(abs(float(y.lo)), abs(float(y.hi)), 1.0) * math.log(K)
    return max(get_prec(), math.ceil(math.log2(mag)) + 160)


def _zeta_chunk(args) -> tuple:
    """Re sum Lambda(n) n^(z-1) over ``entries`` (n, p, m); returns a raw interval."""
    entries, x1, y, prec = args
    add, mul, exp, cs, log = libmpi.mpi_add, libmpi.mpi_mul, libmpi.mpi_exp, libmpi.mpi_cos_sin, libmpi.mpi_log
    div, powi = libmpi.mpi_div, libmpi.mpi_pow_int
    phase_limit = from_man_exp(1, -40)
    one = (fone, fone)
    # integer Re z gives the exact rational magnitude n^(x-1)
    int_exp = None
    if x1[0] == x1[1] and from_int(to_int(x1[0])) == x1[0]:
        int_exp = to_int(x1[0])
    total = (fzero, fzero)
    logp = None
    last_p = 0
    for n, p, m in entries:
        if p != last_p:
            pv = from_int(p)
            logp = _widen(log((pv, pv), prec), prec)
            last_p = p
        logn = mul(logp, (from_int(m), from_int(m)), prec) if m > 1 else logp
        phase = mul(y, logn, prec)
        if mpf_lt(phase_limit, mpf_sub(phase[1], phase[0], 53, round_ceiling)):
            raise PrecisionError(f"phase y*log({n}) is not resolved at {prec} bits")
        c = _clip_unit(_widen(cs(phase, prec)[0], prec))
        if int_exp is not None and int_exp <= 0:
            nv = from_int(n)
            mag = div(one, powi((nv, nv), -int_exp, prec), prec)
        else:
            mag = _widen(exp(mul(x1, logn, prec), prec), prec)
        total = add(total, mul(logp, mul(mag, c, prec), prec), prec)
    return total


def _zeta_sum_re(z: CBall, K: int, table: MangoldtTable, workers: int = 1) -> Ball:
    """Re sum_{2<=k<=K} Lambda(k) k^(z-1), on raw libmpi intervals for speed.

    ``workers > 1`` splits the terms across processes; the result is still an
    enclosure but its last bits may differ from the sequential run.
    """
    prec = get_prec()
    x1 = (z.re - 1)._v
    y = z.im._v
    entries = [e for e in table if e[0] <= K]
    if workers <= 1 or len(entries) < 10_000:
        return Ball._raw(_zeta_chunk((entries, x1, y, prec)))
    size = -(-len(entries) // (4 * workers))
    chunks = [(entries[i : i + size], x1, y, prec) for i in range(0, len(entries), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_zeta_chunk, chunks))
    total = (fzero, fzero)
    for part in parts:
        total = libmpi.mpi_add(total, part, prec)
    return Ball._raw(total)


def zeta_logderiv_re(z: CBall, K: int = DEFAULT_K_ZETA, table: MangoldtTable | None = None,
                     workers: int = 1) -> TruncationResult:
    """Re g'/g(1 - z) for g(s) = (s - 1) zeta(s), with Re z < 0."""
    if not z.re.is_negative():
        raise DomainError(f"need Re z < 0, got {z!r}")
    if K < MIN_K:
        raise ValidationError(f"need K >= {MIN_K}, got {K}")
    table = table if table is not None and table.limit >= K else sieve(K)
    with precision(_phase_bits_needed(z.im, K)):
        s = _zeta_sum_re(z, K, table, workers)
        main = -(1 / z).re - s
        rem = remainder_bound(K, z.re, 1)
    return TruncationResult(main, rem, K)


def v1z(z: CBall, K: int = DEFAULT_K_ZETA, table: MangoldtTable | None = None,
        workers: int = 1) -> Ball:
    """Enclosure of sum over zeta zeros of Re 1/(rho - z), for Re z < 0.

    Build ``z`` at a precision that resolves its imaginary part; the phase sum
    itself runs at ``log2|Im z| + 160`` bits or the working precision, whichever is larger.
    """
    ld = zeta_logderiv_re(z, K, table, workers)
    with precision(_phase_bits_needed(z.im, K)):
        arg = (CBall(3, 0) - z) * CBall(Ball(1) / 2, 0)
        return -pi_ball().log() / 2 + digamma_complex_re(arg) / 2 + ld.total


def v1_riemann() -> Ball:
    """v1 = lambda0/2 + 1 - log(4 pi)/2, the sum over zeta zeros of Re 1/rho."""
    return euler_ball() / 2 + 1 - (4 * pi_ball()).log() / 2
