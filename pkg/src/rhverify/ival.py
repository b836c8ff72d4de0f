"""Arbitrary-precision enclosure arithmetic.

A :class:`Ball` is a closed interval ``[lo, hi]`` with binary floating-point
endpoints.  Every operation rounds outward, so the result contains the exact
value whenever the inputs contain their exact operands.  The kernels come from
``mpmath.libmp.libmpi``, called with an explicit precision so that no global
mpmath state is touched.

The working precision lives in a :class:`contextvars.ContextVar`, which makes it
thread- and task-local::

    with precision(256):
        x = Ball("1e28") * log_int(2)
"""

from __future__ import annotations

import contextlib
import contextvars
import functools
import os
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath.libmp import (
    finf,
    fnan,
    fninf,
    fnone,
    fone,
    from_float,
    from_int,
    from_rational,
    fzero,
    libmpi,
    mpf_add,
    mpf_cmp,
    mpf_euler,
    mpf_ln2,
    mpf_lt,
    mpf_neg,
    mpf_perturb,
    mpf_pi,
    mpf_sub,
    round_ceiling,
    round_floor,
    to_rational,
)

from .errors import DomainError, PrecisionError

DEFAULT_PREC = 192
MIN_PREC = 53


def _env_default_prec() -> int:
    raw = os.environ.get("RHVERIFY_PREC")
    if not raw:
        return DEFAULT_PREC
    bits = int(raw)
    if bits < MIN_PREC:
        raise ValueError(f"RHVERIFY_PREC={bits} is below the minimum of {MIN_PREC} bits")
    return bits


_PREC: contextvars.ContextVar[int] = contextvars.ContextVar("rhverify_prec", default=_env_default_prec())


def get_prec() -> int:
    return _PREC.get()


@contextlib.contextmanager
def precision(bits: int) -> Iterator[int]:
    """Temporarily set the working precision (in bits) for the current context."""
    if bits < MIN_PREC:
        raise ValueError(f"precision must be at least {MIN_PREC} bits, got {bits}")
    token = _PREC.set(bits)
    try:
        yield bits
    finally:
        _PREC.reset(token)


Number = Union[int, Fraction, str, float, "Ball"]


def _has_nan(v) -> bool:
    return v[0] == fnan or v[1] == fnan


def _widen(v, prec):
    # one extra ulp on each side for transcendental kernels
    a, b = v
    if a not in (fninf, finf, fzero):
        a = mpf_perturb(a, 1, prec, round_floor)
    if b not in (fninf, finf, fzero):
        b = mpf_perturb(b, 0, prec, round_ceiling)
    return a, b


def _fraction_endpoints(q: Fraction, prec: int):
    return (
        from_rational(q.numerator, q.denominator, prec, round_floor),
        from_rational(q.numerator, q.denominator, prec, round_ceiling),
    )


def _parse_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(Decimal(x.strip()))
        except Exception:
            return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, Decimal):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact value")


class Ball:
    """Closed real interval with outward-rounded binary endpoints.

    ``Ball(x)`` encloses ``x`` (int, Fraction, decimal string, float taken as its
    exact binary value, or mpmath ``mpf``); ``Ball(a, b)`` encloses ``[a, b]``.
    """

    __slots__ = ("_v",)

    def __init__(self, lo=0, hi=None):
        prec = _PREC.get()
        if isinstance(lo, Ball) and hi is None:
            self._v = lo._v
            return
        a = _lower_endpoint(lo, prec)
        b = _upper_endpoint(lo if hi is None else hi, prec)
        if mpf_lt(b, a):
            raise ValueError(f"empty interval: lo > hi ({lo!r}, {hi!r})")
        self._v = (a, b)

    @classmethod
    def _raw(cls, v) -> "Ball":
        obj = cls.__new__(cls)
        if _has_nan(v):
            v = (fninf, finf)
        obj._v = v
        return obj

    @classmethod
    def whole(cls) -> "Ball":
        return cls._raw((fninf, finf))

    @classmethod
    def from_mid_rad(cls, mid: Number, rad: Number) -> "Ball":
        m = _to_ball(mid)
        r = abs(_to_ball(rad))
        return cls._raw((libmpi.mpi_sub(m._v, r._v, _PREC.get())[0], libmpi.mpi_add(m._v, r._v, _PREC.get())[1]))

    # ------------------------------------------------------------------ views
    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mpf(self._v[0])

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mpf(self._v[1])

    @property
    def mid(self) -> mpmath.mpf:
        return mpmath.mpf(libmpi.mpi_mid(self._v, _PREC.get() + 10))

    @property
    def rad(self) -> mpmath.mpf:
        return mpmath.mpf(mpf_sub(self._v[1], self._v[0], _PREC.get(), round_ceiling)) / 2

    @property
    def width(self) -> mpmath.mpf:
        return mpmath.mpf(mpf_sub(self._v[1], self._v[0], _PREC.get(), round_ceiling))

    def is_finite(self) -> bool:
        return self._v[0] not in (fninf, finf) and self._v[1] not in (fninf, finf)

    def is_point(self) -> bool:
        return self._v[0] == self._v[1]

    def lower_exact(self) -> Fraction:
        p, q = to_rational(self._v[0])
        return Fraction(int(p), int(q))

    def upper_exact(self) -> Fraction:
        p, q = to_rational(self._v[1])
        return Fraction(int(p), int(q))

    # ------------------------------------------------------------ predicates
    def contains(self, x) -> bool:
        if isinstance(x, Ball):
            return mpf_cmp(self._v[0], x._v[0]) <= 0 and mpf_cmp(x._v[1], self._v[1]) <= 0
        if isinstance(x, (int, Fraction, str, Decimal)):
            q = _parse_exact(x)
            if not self.is_finite():
                return self._contains_unbounded(q)
            return self.lower_exact() <= q <= self.upper_exact()
        x = mpmath.mpf(x)
        return self.lo <= x <= self.hi

    def _contains_unbounded(self, q: Fraction) -> bool:
        lo_ok = self._v[0] == fninf or (self._v[0] != finf and self.lower_exact() <= q)
        hi_ok = self._v[1] == finf or (self._v[1] != fninf and q <= self.upper_exact())
        return lo_ok and hi_ok

    def overlaps(self, other: Number) -> bool:
        o = _to_ball(other)
        return mpf_cmp(self._v[0], o._v[1]) <= 0 and mpf_cmp(o._v[0], self._v[1]) <= 0

    def gt(self, other: Number) -> bool:
        """Certainly greater: ``inf(self) > sup(other)``."""
        o = _to_ball(other)
        return mpf_cmp(self._v[0], o._v[1]) > 0

    def lt(self, other: Number) -> bool:
        """Certainly smaller: ``sup(self) < inf(other)``."""
        o = _to_ball(other)
        return mpf_cmp(self._v[1], o._v[0]) < 0

    def ge(self, other: Number) -> bool:
        o = _to_ball(other)
        return mpf_cmp(self._v[0], o._v[1]) >= 0

    def le(self, other: Number) -> bool:
        o = _to_ball(other)
        return mpf_cmp(self._v[1], o._v[0]) <= 0

    def is_positive(self) -> bool:
        return mpf_cmp(self._v[0], fzero) > 0

    def is_negative(self) -> bool:
        return mpf_cmp(self._v[1], fzero) < 0

    def is_nonnegative(self) -> bool:
        return mpf_cmp(self._v[0], fzero) >= 0

    def sign(self) -> int:
        """+1 or -1 if the sign is certain, 0 if the ball touches zero."""
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        return 0

    # ------------------------------------------------------------- arithmetic
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Ball._raw(libmpi.mpi_add(self._v, o._v, _PREC.get()))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Ball._raw(libmpi.mpi_sub(self._v, o._v, _PREC.get()))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Ball._raw(libmpi.mpi_sub(o._v, self._v, _PREC.get()))

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return Ball._raw(libmpi.mpi_mul(self._v, o._v, _PREC.get()))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if mpf_cmp(o._v[0], fzero) <= 0 <= mpf_cmp(o._v[1], fzero):
            raise DomainError(f"division by an interval containing zero: {o!r}")
        return Ball._raw(libmpi.mpi_div(self._v, o._v, _PREC.get()))

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return Ball._raw((mpf_neg(self._v[1]), mpf_neg(self._v[0])))

    def __pos__(self):
        return self

    def __abs__(self):
        return Ball._raw(libmpi.mpi_abs(self._v))

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Ball(1) / self ** (-n)
        return Ball._raw(libmpi.mpi_pow_int(self._v, n, _PREC.get()))

    def square(self) -> "Ball":
        return Ball._raw(libmpi.mpi_square(self._v, _PREC.get()))

    def sqrt(self) -> "Ball":
        if mpf_cmp(self._v[0], fzero) < 0:
            raise DomainError(f"sqrt of an interval with negative part: {self!r}")
        prec = _PREC.get()
        return Ball._raw(libmpi.mpi_sqrt(self._v, prec))

    def log(self) -> "Ball":
        if mpf_cmp(self._v[0], fzero) <= 0:
            raise DomainError(f"log of an interval touching zero or below: {self!r}")
        prec = _PREC.get()
        return Ball._raw(_widen(libmpi.mpi_log(self._v, prec), prec))

    def exp(self) -> "Ball":
        prec = _PREC.get()
        return Ball._raw(_widen(libmpi.mpi_exp(self._v, prec), prec))

    def atan(self) -> "Ball":
        prec = _PREC.get()
        return Ball._raw(_widen(libmpi.mpi_atan(self._v, prec), prec))

    def cos_sin(self) -> tuple["Ball", "Ball"]:
        prec = _PREC.get()
        c, s = libmpi.mpi_cos_sin(self._v, prec)
        return Ball._raw(_clip_unit(_widen(c, prec))), Ball._raw(_clip_unit(_widen(s, prec)))

    def cos(self) -> "Ball":
        return self.cos_sin()[0]

    def sin(self) -> "Ball":
        return self.cos_sin()[1]

    def union(self, other: Number) -> "Ball":
        o = _to_ball(other)
        return Ball._raw((mpf_min(self._v[0], o._v[0]), mpf_max(self._v[1], o._v[1])))

    def intersect(self, other: Number) -> "Ball":
        o = _to_ball(other)
        a, b = mpf_max(self._v[0], o._v[0]), mpf_min(self._v[1], o._v[1])
        if mpf_lt(b, a):
            raise ValueError("balls do not intersect")
        return Ball._raw((a, b))

    def upper(self) -> "Ball":
        """Point ball at the upper endpoint."""
        return Ball._raw((self._v[1], self._v[1]))

    def lower(self) -> "Ball":
        return Ball._raw((self._v[0], self._v[0]))

    # ------------------------------------------------------------- printing
    def endpoints_str(self, digits: int = 20) -> tuple[str, str]:
        """Decimal endpoints rounded outward to ``digits`` significant digits."""
        return _decimal_str(self._v[0], digits, ROUND_FLOOR), _decimal_str(self._v[1], digits, ROUND_CEILING)

    def __repr__(self) -> str:
        a, b = self.endpoints_str(17)
        return f"Ball[{a}, {b}]"

    def __float__(self) -> float:
        return float(self.mid)

    def __hash__(self):
        return hash(self._v)

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return self._v == other._v


def mpf_min(a, b):
    return b if mpf_lt(b, a) else a


def mpf_max(a, b):
    return a if mpf_lt(b, a) else b


def _clip_unit(v):
    a, b = v
    if mpf_lt(a, fnone):
        a = fnone
    if mpf_lt(fone, b):
        b = fone
    return a, b


def _lower_endpoint(x, prec):
    if isinstance(x, Ball):
        return x._v[0]
    if isinstance(x, mpmath.mpf):
        return mpf_add(x._mpf_, fzero, prec, round_floor)
    if isinstance(x, float):
        if x != x:
            return fninf
        return mpf_add(from_float(x), fzero, prec, round_floor)
    return _fraction_endpoints(_parse_exact(x), prec)[0]


def _upper_endpoint(x, prec):
    if isinstance(x, Ball):
        return x._v[1]
    if isinstance(x, mpmath.mpf):
        return mpf_add(x._mpf_, fzero, prec, round_ceiling)
    if isinstance(x, float):
        if x != x:
            return finf
        return mpf_add(from_float(x), fzero, prec, round_ceiling)
    return _fraction_endpoints(_parse_exact(x), prec)[1]


def _decimal_str(v, digits: int, rounding) -> str:
    if v == finf:
        return "+inf"
    if v == fninf:
        return "-inf"
    if v == fzero:
        return "0"
    p, q = to_rational(v)
    p, q = int(p), int(q)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        d = Decimal(p) / Decimal(q) if q != 1 else +Decimal(p)
    s = format(d, "E") if (d.adjusted() > 25 or d.adjusted() < -25) else format(d, "f")
    return s


def _coerce(x):
    if isinstance(x, Ball):
        return x
    if isinstance(x, (int, Fraction, str, float, mpmath.mpf, Decimal)):
        return Ball(x)
    return NotImplemented


def _to_ball(x) -> Ball:
    b = _coerce(x)
    if b is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to Ball")
    return b


def ball(x, hi=None) -> Ball:
    return Ball(x, hi)


def ball_min(a: Ball, b: Ball) -> Ball:
    return Ball._raw((mpf_min(a._v[0], b._v[0]), mpf_min(a._v[1], b._v[1])))


def ball_max(a: Ball, b: Ball) -> Ball:
    return Ball._raw((mpf_max(a._v[0], b._v[0]), mpf_max(a._v[1], b._v[1])))


def ball_binary(op: str, a: Ball, b: Ball) -> Ball:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown binary op {op!r}")


def ball_unary(fn: str, a: Ball) -> Ball:
    if fn == "neg":
        return -a
    if fn == "abs":
        return abs(a)
    if fn in ("sqrt", "log", "exp", "atan", "sin", "cos"):
        return getattr(a, fn)()
    raise ValueError(f"unknown unary function {fn!r}")


# ---------------------------------------------------------------- constants
@functools.lru_cache(maxsize=None)
def _const(name: str, prec: int):
    fn = {"pi": mpf_pi, "ln2": mpf_ln2, "euler": mpf_euler}[name]
    return _widen((fn(prec, round_floor), fn(prec, round_ceiling)), prec)


def pi_ball() -> Ball:
    return Ball._raw(_const("pi", _PREC.get()))


def log2_ball() -> Ball:
    return Ball._raw(_const("ln2", _PREC.get()))


def euler_ball() -> Ball:
    """Euler's constant 0.5772156649..."""
    return Ball._raw(_const("euler", _PREC.get()))


@functools.lru_cache(maxsize=4096)
def _log_int(n: int, prec: int):
    return _widen(libmpi.mpi_log((from_int(n), from_int(n)), prec), prec)


def log_int(n: int) -> Ball:
    """Enclosure of ``log n`` for a positive integer, cached per precision."""
    if n <= 0:
        raise DomainError(f"log of nonpositive integer {n}")
    return Ball._raw(_log_int(n, _PREC.get()))


# ------------------------------------------------------------ complex balls
class CBall:
    """Rectangular enclosure ``re + i*im`` of a complex number."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        self.re = _to_ball(re)
        self.im = _to_ball(im)

    def __repr__(self) -> str:
        return f"CBall({self.re!r}, {self.im!r})"

    def __add__(self, other):
        o = _ccoerce(other)
        return CBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _ccoerce(other)
        return CBall(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _ccoerce(other) - self

    def __neg__(self):
        return CBall(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (Ball, int, Fraction)):
            o = _to_ball(other)
            return CBall(self.re * o, self.im * o)
        o = _ccoerce(other)
        return CBall(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Ball, int, Fraction)):
            o = _to_ball(other)
            return CBall(self.re / o, self.im / o)
        o = _ccoerce(other)
        den = o.abs2()
        return CBall((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        return _ccoerce(other) / self

    def conj(self) -> "CBall":
        return CBall(self.re, -self.im)

    def abs2(self) -> Ball:
        return self.re.square() + self.im.square()

    def __abs__(self) -> Ball:
        return self.abs2().sqrt()

    def exp(self) -> "CBall":
        m = self.re.exp()
        c, s = self.im.cos_sin()
        return CBall(m * c, m * s)

    def log(self) -> "CBall":
        """Principal logarithm; requires the rectangle to lie in ``Re > 0``."""
        if not self.re.is_positive():
            raise DomainError(f"complex log implemented for Re > 0 only, got {self!r}")
        return CBall(self.abs2().log() / 2, (self.im / self.re).atan())

    def contains(self, z) -> bool:
        z = complex(z) if not isinstance(z, mpmath.mpc) else z
        return self.re.contains(mpmath.mpf(z.real)) and self.im.contains(mpmath.mpf(z.imag))

    def add_error(self, err: Ball) -> "CBall":
        """Enlarge both components by ``[-err, err]``."""
        e = abs(err).upper()
        pm = Ball._raw((mpf_neg(e._v[1]), e._v[1]))
        return CBall(self.re + pm, self.im + pm)


def _ccoerce(x) -> CBall:
    if isinstance(x, CBall):
        return x
    if isinstance(x, complex):
        return CBall(x.real, x.imag)
    return CBall(_to_ball(x), 0)


def pm(err: Number) -> Ball:
    """The symmetric ball ``[-|err|, |err|]``."""
    e = abs(_to_ball(err))
    return Ball._raw((mpf_neg(e._v[1]), e._v[1]))


def complex_power_inverse(k: int, z: CBall, min_phase_bits: int = 40) -> CBall:
    """Enclose ``1/k**(1-z) = k**(z-1)`` for a positive integer ``k``.

    The phase ``Im(z)*log(k)`` is formed at the working precision before reduction
    modulo 2*pi.  If that leaves fewer than ``min_phase_bits`` correct bits in the
    phase, :class:`PrecisionError` is raised instead of returning a useless
    enclosure.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    if k == 1:
        return CBall(1, 0)
    logk = log_int(k)
    phase = z.im * logk
    if phase.is_finite() and phase.width > mpmath.mpf(2) ** (-min_phase_bits):
        raise PrecisionError(
            f"phase y*log({k}) resolved to only {phase!r} at {get_prec()} bits; raise the precision"
        )
    mag = ((z.re - 1) * logk).exp()
    c, s = phase.cos_sin()
    return CBall(mag * c, mag * s)


