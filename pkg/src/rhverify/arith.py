"""Coefficient generation: prime powers, Kronecker symbols, Ramanujan tau, elliptic traces.

Everything here is exact integer arithmetic except :meth:`CoefficientProvider.lambda_L`,
which returns a :class:`~rhverify.ival.Ball`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import DataError, ValidationError
from .ival import Ball, log_int


# -------------------------------------------------------------------- sieve
def prime_sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True)
class MangoldtTable:
    """Prime-power classification of ``2..K``.

    ``entries`` lists ``(n, p, m)`` with ``n = p**m <= K`` in increasing ``n``.
    """

    limit: int
    primes: np.ndarray = field(repr=False)
    entries: tuple[tuple[int, int, int], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int, int]]:
        return iter(self.entries)

    @functools.cached_property
    def _index(self) -> dict[int, tuple[int, int]]:
        return {n: (p, m) for n, p, m in self.entries}

    def lookup(self, n: int) -> tuple[int, int] | None:
        """``(p, m)`` if ``n = p**m``, otherwise ``None``."""
        return self._index.get(n)

    def mangoldt(self, n: int) -> Ball:
        """Lambda(n) = log p on prime powers, 0 elsewhere."""
        hit = self.lookup(n)
        if hit is None:
            return Ball(0)
        return log_int(hit[0])


def sieve(K: int) -> MangoldtTable:
    """Classify every prime power up to ``K``."""
    if K < 2:
        raise ValidationError(f"sieve limit must be at least 2, got {K}")
    primes = prime_sieve(K)
    entries = []
    for p in primes.tolist():
        n, m = p, 1
        while n <= K:
            entries.append((n, p, m))
            n *= p
            m += 1
    entries.sort()
    return MangoldtTable(K, primes, tuple(entries))


# ----------------------------------------------------------------- kronecker
def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1 if d == 2 else 2
    return True


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d|n) for n >= 1."""
    if n < 1:
        raise ValueError(f"kronecker symbol needs n >= 1, got {n}")
    if n == 1:
        return 1
    a, b = d, n
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    k = 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -1
    # Jacobi symbol (a|b) for odd b > 0
    a %= b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                k = -k
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


# ----------------------------------------------------------------- tau(n)
def _poly_square_truncated(coeffs: Sequence[int], length: int) -> list[int]:
    """Square an integer polynomial modulo x**length by Kronecker substitution."""
    n = min(len(coeffs), length)
    coeffs = list(coeffs[:n])
    max_abs = max((abs(c) for c in coeffs), default=0)
    if max_abs == 0:
        return [0] * length
    bits = 2 * max_abs.bit_length() + n.bit_length() + 2
    nbytes = (bits + 7) // 8
    width = 8 * nbytes

    def pack(values: Sequence[int]) -> int:
        return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in values), "little")

    packed = pack([max(c, 0) for c in coeffs]) - pack([max(-c, 0) for c in coeffs])
    prod = packed * packed
    out_len = min(2 * n - 1, length)
    half = 1 << (width - 1)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * out_len, "little")
    mask_total = (1 << (width * out_len)) - 1
    raw = ((prod & mask_total) + bias) & mask_total
    data = raw.to_bytes(nbytes * out_len, "little")
    # with every digit biased by half the base no borrows occur, so each slot decodes on its own
    result = [
        int.from_bytes(data[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(out_len)
    ]
    return result + [0] * (length - out_len)


def tau_table(K: int) -> list[int]:
    """Ramanujan tau(1..K) as ``[0, tau(1), ..., tau(K)]`` (index = n)."""
    if K < 1:
        raise ValidationError(f"tau table needs K >= 1, got {K}")
    length = K  # coefficients of prod (1 - q^n)^24 up to q^(K-1)
    eta3 = [0] * length
    k = 0
    while k * (k + 1) // 2 < length:
        eta3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    e6 = _poly_square_truncated(eta3, length)
    e12 = _poly_square_truncated(e6, length)
    e24 = _poly_square_truncated(e12, length)
    return [0] + e24


# ------------------------------------------------------- elliptic curve b(p)
Curve = tuple[int, int, int, int, int]


def _count_points_bruteforce(curve: Curve, p: int) -> int:
    a1, a2, a3, a4, a6 = curve
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return count


def count_points(curve: Curve, p: int) -> int:
    """|E(F_p)| including the point at infinity, by exhaustive enumeration over x."""
    if p < 3:
        return _count_points_bruteforce(curve, p)
    a1, a2, a3, a4, a6 = (c % p for c in curve)
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    x3 = x2 * x % p
    f = (x3 + a2 * x2 + a4 * x + a6) % p
    lin = (a1 * x + a3) % p
    # y^2 + lin*y = f  <=>  (2y + lin)^2 = lin^2 + 4f
    disc = (lin * lin + 4 * f) % p
    squares = np.zeros(p, dtype=bool)
    squares[(x2)] = True
    n_zero = int(np.count_nonzero(disc == 0))
    n_square = int(np.count_nonzero(squares[disc])) - n_zero
    return 1 + n_zero + 2 * n_square


def elliptic_bp(curve: Curve, p: int) -> int:
    """Trace b(p) = p + 1 - |E(F_p)|."""
    return p + 1 - count_points(curve, p)


# ------------------------------------------------------- coefficient providers
class CoefficientProvider:
    """Source of the power sums s_m(p) = sum_j alpha_{p,j}^m of the Satake parameters."""

    kind = "abstract"
    degree = 1

    def prepare(self, K: int) -> None:
        """Precompute whatever is needed for primes up to ``K``."""

    def power_sum(self, p: int, m: int) -> Ball:
        raise NotImplementedError

    def lambda_L(self, p: int, m: int) -> Ball:
        """Lambda_L(p**m) = log p * s_m(p)."""
        return log_int(p) * self.power_sum(p, m)

    def describe(self) -> dict:
        return {"kind": self.kind}


class TrivialProvider(CoefficientProvider):
    """All alpha = 1 (the Euler product of zeta); useful as a reference provider."""

    kind = "trivial"

    def power_sum(self, p: int, m: int) -> Ball:
        return Ball(1)


class DirichletProvider(CoefficientProvider):
    kind = "dirichlet"

    def __init__(self, d: int):
        if not is_fundamental_discriminant(d):
            raise ValidationError(f"{d} is not a fundamental discriminant")
        self.d = d

    def power_sum(self, p: int, m: int) -> Ball:
        return Ball(kronecker(self.d, p) ** m)

    def describe(self) -> dict:
        return {"kind": self.kind, "d": self.d}


def _chebyshev_power_sums(a: Ball, mmax: int) -> list[Ball]:
    # s_0 = 2, s_1 = a, s_m = a s_{m-1} - s_{m-2}  (alpha_1 alpha_2 = 1)
    s = [Ball(2), a]
    for _ in range(2, mmax + 1):
        s.append(a * s[-1] - s[-2])
    return s


class Degree2Provider(CoefficientProvider):
    """Degree-2 unitary Euler factors ``1 - a_p p^{-s} + p^{-2s}`` at good primes.

    Subclasses supply the normalized trace ``a_p``; bad primes carry an explicit
    list of Satake parameters (normalized, ``|alpha| <= 1``).
    """

    degree = 2

    def __init__(self, bad_primes: Mapping[int, Sequence[Ball]] | None = None):
        self.bad_primes = {int(p): [Ball(a) for a in alphas] for p, alphas in (bad_primes or {}).items()}
        self._cache: dict[tuple[int, int], Ball] = {}

    def normalized_trace(self, p: int) -> Ball:
        raise NotImplementedError

    def power_sum(self, p: int, m: int) -> Ball:
        key = (p, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if p in self.bad_primes:
            value = Ball(0)
            for alpha in self.bad_primes[p]:
                value = value + alpha**m
        else:
            value = _chebyshev_power_sums(self.normalized_trace(p), m)[m]
        self._cache[key] = value
        return value


class RamanujanProvider(Degree2Provider):
    """Delta's L-function; a_p = tau(p) p^{-11/2}."""

    kind = "ramanujan"

    def __init__(self):
        super().__init__()
        self._tau: list[int] = []

    def prepare(self, K: int) -> None:
        if len(self._tau) <= K:
            self._tau = tau_table(K)

    def normalized_trace(self, p: int) -> Ball:
        if p >= len(self._tau):
            self.prepare(max(p, 2 * len(self._tau)))
        return Ball(self._tau[p]) / (Ball(p) ** 11).sqrt()


class EllipticProvider(Degree2Provider):
    """Elliptic curve L-function; a_p = b(p)/sqrt(p) with b(p) from point counting.

    ``bad_primes`` maps a prime of bad reduction to the arithmetic a_p in
    {-1, 0, 1}; the single Satake parameter there is a_p/sqrt(p).
    """

    kind = "elliptic"

    def __init__(self, curve: Sequence[int], bad_primes: Mapping[int, int] | None = None):
        if len(curve) != 5:
            raise ValidationError("curve needs Weierstrass coefficients (a1, a2, a3, a4, a6)")
        self.curve: Curve = tuple(int(c) for c in curve)  # type: ignore[assignment]
        self.bad_arith = {int(p): int(a) for p, a in (bad_primes or {}).items()}
        for p, a in self.bad_arith.items():
            if a not in (-1, 0, 1):
                raise ValidationError(f"bad-prime a_p must be -1, 0 or 1, got {a} at p={p}")
        super().__init__({p: [Ball(a) / Ball(p).sqrt()] for p, a in self.bad_arith.items()})
        self._bp: dict[int, int] = {}

    def prepare(self, K: int) -> None:
        for p in prime_sieve(K).tolist():
            if p not in self._bp and p not in self.bad_arith:
                self._bp[p] = elliptic_bp(self.curve, p)

    def normalized_trace(self, p: int) -> Ball:
        b = self._bp.get(p)
        if b is None:
            b = self._bp[p] = elliptic_bp(self.curve, p)
        return Ball(b) / Ball(p).sqrt()

    def describe(self) -> dict:
        return {"kind": self.kind, "curve": list(self.curve), "bad_primes": {str(p): a for p, a in self.bad_arith.items()}}


class TableProvider(Degree2Provider):
    """Degree-2 provider backed by an explicit a_p table (see :func:`load_provider_file`)."""

    kind = "custom"

    def __init__(self, traces: Mapping[int, Ball], bad_primes: Mapping[int, Sequence[Ball]] | None = None,
                 source: str | None = None):
        super().__init__(bad_primes)
        self.traces = dict(traces)
        self.source = source

    def normalized_trace(self, p: int) -> Ball:
        try:
            return self.traces[p]
        except KeyError:
            raise DataError(f"no a_p for p={p} in the coefficient table") from None

    def power_sum(self, p: int, m: int) -> Ball:
        if p not in self.bad_primes and p not in self.traces:
            raise DataError(f"no a_p for p={p} in the coefficient table")
        return super().power_sum(p, m)

    def describe(self) -> dict:
        return {"kind": self.kind, "path": self.source}


def lambda_L(provider: CoefficientProvider, p: int, m: int) -> Ball:
    return provider.lambda_L(p, m)


def load_provider_file(path: str | Path) -> TableProvider:
    """Parse a degree-2 coefficient table.

    Format (``#`` starts a comment)::

        normalization = normalized        # or: arithmetic <weight>
        2 -0.8485281374
        3 0.5773502692
        bad 37 -0.1643989873              # Satake parameters at a bad prime

    With ``arithmetic k`` each value is divided by ``p**((k-1)/2)``.
    """
    path = Path(path)
    weight: int | None = None
    traces: dict[int, Ball] = {}
    bad: dict[int, list[Ball]] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("normalization"):
            value = line.split("=", 1)[1].split()
            if value[0] == "normalized":
                weight = None
            elif value[0] == "arithmetic" and len(value) == 2:
                weight = int(value[1])
            else:
                raise ValidationError(f"{path}:{lineno}: bad normalization line {raw!r}")
            continue
        parts = line.split()
        try:
            if parts[0] == "bad":
                p = int(parts[1])
                bad[p] = [Ball(Fraction(v)) if "/" in v else Ball(v) for v in parts[2:]]
                if not 1 <= len(bad[p]) <= 2:
                    raise ValueError("need one or two Satake parameters")
                continue
            p, a = int(parts[0]), parts[1]
            if len(parts) != 2:
                raise ValueError("expected 'p a_p'")
        except (ValueError, IndexError) as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}: {raw!r}") from None
        value_b = Ball(a)
        if weight is not None:
            value_b = value_b / (Ball(p) ** (weight - 1)).sqrt()
        traces[p] = value_b
    return TableProvider(traces, bad, source=str(path))
