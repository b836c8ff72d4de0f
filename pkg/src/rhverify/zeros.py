"""Zero intervals: ingestion, the known-zero sums C and D, and sign-change certification for zeta.

A zeros file is UTF-8 text with one decimal ordinate per line.  ``#`` starts a
comment, and a line ``radius=<decimal>`` sets the half-width used for every
ordinate in the file.  A second token on a line is an optional multiplicity.
Ordinates are parsed as exact rationals before the radius is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DomainError, ValidationError
from .ival import Ball, CBall, get_prec, log_int, pi_ball, precision
from .specfun import _bernoulli, loggamma_complex

DATABASE_RADIUS = Fraction(1, 10**10)
SOLVER_RADIUS = Fraction(1, 10**8)
MAX_EM_HEIGHT = 10**4


@dataclass(frozen=True)
class ZeroInterval:
    """``[lo, hi]`` containing a sign change of xi on the critical line.

    ``kind`` is ``"pair"`` for ``0 <= lo`` or ``"symmetric"`` for ``[-g0, g0]``.
    """

    lo: Fraction
    hi: Fraction
    kind: str = "pair"
    provenance: str = "external"
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValidationError(f"empty zero interval [{self.lo}, {self.hi}]")
        if self.kind == "symmetric" and self.lo != -self.hi:
            raise ValidationError(f"symmetric interval must be [-g0, g0], got [{self.lo}, {self.hi}]")
        if self.kind not in ("pair", "symmetric"):
            raise ValidationError(f"unknown interval kind {self.kind!r}")
        if self.multiplicity < 1:
            raise ValidationError(f"multiplicity must be >= 1, got {self.multiplicity}")

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, t: Fraction) -> bool:
        return self.lo <= t <= self.hi


@dataclass(frozen=True)
class ZeroSet:
    intervals: tuple[ZeroInterval, ...]
    window: tuple[Fraction | None, Fraction | None] = (None, None)
    center: Fraction | None = None
    mode: str = "l-function"

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def without(self, t: Fraction | str) -> "ZeroSet":
        """Copy with every interval containing ``t`` removed."""
        t = Fraction(Decimal(t)) if isinstance(t, str) else Fraction(t)
        kept = tuple(iv for iv in self.intervals if not iv.contains(t))
        if len(kept) == len(self.intervals):
            raise ValidationError(f"no interval contains {t}")
        return ZeroSet(kept, self.window, self.center, self.mode)

    def restrict(self, lo: Fraction, hi: Fraction) -> "ZeroSet":
        """Intervals lying entirely inside ``[lo, hi]``."""
        kept = tuple(iv for iv in self.intervals if lo <= iv.lo and iv.hi <= hi)
        return ZeroSet(kept, self.window, self.center, self.mode)


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int,)):
        return Fraction(value)
    try:
        return Fraction(Decimal(str(value).strip()))
    except (InvalidOperation, ValueError):
        raise ValidationError(f"cannot parse {value!r} as a decimal number") from None


def parse_zeros_text(text: str, source: str = "<zeros>") -> tuple[list[tuple[Fraction, int]], Fraction | None]:
    """Ordinates (with multiplicities) and the header radius, if any."""
    entries: list[tuple[Fraction, int]] = []
    radius: Fraction | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.replace(" ", "").lower().startswith("radius="):
            try:
                radius = _exact(line.split("=", 1)[1])
            except ValidationError:
                raise ValidationError(f"{source}:{lineno}: bad radius line {raw!r}") from None
            continue
        parts = line.split()
        if len(parts) > 2:
            raise ValidationError(f"{source}:{lineno}: expected 'ordinate [multiplicity]', got {raw!r}")
        try:
            t = Fraction(Decimal(parts[0]))
            mult = int(parts[1]) if len(parts) == 2 else 1
        except (InvalidOperation, ValueError):
            raise ValidationError(f"{source}:{lineno}: malformed line {raw!r}") from None
        if not math.isfinite(float(t)):
            raise ValidationError(f"{source}:{lineno}: non-finite ordinate")
        entries.append((t, mult))
    return entries, radius


def build_zero_set(
    entries: Iterable[tuple[Fraction, int]],
    radius: Fraction,
    *,
    mode: str = "l-function",
    window: tuple[Fraction | None, Fraction | None] = (None, None),
    center: Fraction | None = None,
    provenance: str = "external",
) -> ZeroSet:
    """Turn ordinates into validated intervals ``[t - radius, t + radius]``."""
    radius = _exact(radius)
    if radius <= 0:
        raise ValidationError(f"radius must be positive, got {radius}")
    if mode not in ("l-function", "zeta"):
        raise ValidationError(f"unknown mode {mode!r}")
    if mode == "zeta" and center is None:
        raise ValidationError("zeta mode needs the center y")
    intervals = []
    for t, mult in entries:
        lo, hi = t - radius, t + radius
        if lo <= 0 <= hi or t < 0:
            if mode == "zeta":
                raise ValidationError(f"ordinate {t} is not positive; zeta zeros have nonzero height")
            g0 = max(abs(lo), abs(hi))
            intervals.append(ZeroInterval(-g0, g0, "symmetric", provenance, mult))
        else:
            intervals.append(ZeroInterval(lo, hi, "pair", provenance, mult))
    intervals.sort(key=lambda iv: (iv.lo, iv.hi))
    _validate(intervals, mode, window, center)
    return ZeroSet(tuple(intervals), window, center, mode)


def _validate(intervals: Sequence[ZeroInterval], mode: str,
              window: tuple[Fraction | None, Fraction | None], center: Fraction | None) -> None:
    overlaps = [
        (a, b) for a, b in zip(intervals, intervals[1:]) if b.lo <= a.hi
    ]
    if overlaps:
        shown = ", ".join(f"[{float(a.lo)}, {float(a.hi)}] & [{float(b.lo)}, {float(b.hi)}]" for a, b in overlaps[:5])
        raise ValidationError(f"{len(overlaps)} overlapping zero interval pair(s): {shown}")
    if sum(iv.kind == "symmetric" for iv in intervals) > 1:
        raise ValidationError("at most one interval may straddle t = 0")
    lo_w, hi_w = window
    outside = []
    for iv in intervals:
        # a symmetric interval [-g0, g0] only has to respect the upper bound
        low_bad = lo_w is not None and iv.kind == "pair" and iv.lo < lo_w
        if low_bad or (hi_w is not None and iv.hi > hi_w):
            outside.append(iv)
    if outside:
        raise ValidationError(
            f"{len(outside)} zero interval(s) outside the window [{lo_w}, {hi_w}], first [{float(outside[0].lo)}, {float(outside[0].hi)}]"
        )
    if mode == "zeta" and center is not None:
        hits = [iv for iv in intervals if iv.contains(center)]
        if hits:
            raise ValidationError(f"center y={float(center)} lies in the zero interval [{hits[0].lo}, {hits[0].hi}]")


def ingest(
    path: str | Path,
    radius: Fraction | str | None = None,
    *,
    mode: str = "l-function",
    window: tuple[Fraction | None, Fraction | None] = (None, None),
    center: Fraction | str | None = None,
) -> ZeroSet:
    """Read a zeros file.  An explicit ``radius`` overrides the file header; the default is 1e-10."""
    path = Path(path)
    entries, header = parse_zeros_text(path.read_text(encoding="utf-8"), str(path))
    rad = _exact(radius) if radius is not None else header if header is not None else DATABASE_RADIUS
    return build_zero_set(
        entries, rad, mode=mode, window=window,
        center=None if center is None else _exact(center),
    )


# ------------------------------------------------------------------ sums
def c_sum(Z: ZeroSet, delta: Ball) -> Ball:
    """C(Z, delta): lower bound for the contribution of the listed zeros to w1."""
    delta = Ball(delta)
    if not delta.le(0):
        raise DomainError(f"need delta <= 0, got {delta!r}")
    a = Ball(1) / 2 - delta
    a2 = a.square()
    total = Ball(0)
    for iv in Z:
        g = Ball(iv.hi)
        if iv.kind == "pair":
            term = 2 * a / (a2 + g.square())
        else:
            term = a / (a2 + g.square())
        total = total + term * iv.multiplicity
    return total


def d_sum(Z: ZeroSet, z: CBall) -> Ball:
    """D(Z, z): lower bound for the contribution of the listed zeros to Re v1z."""
    x, y = Ball(z.re), Ball(z.im)
    if not x.le(0):
        raise DomainError(f"need Re z <= 0, got {x!r}")
    a = Ball(1) / 2 - x
    a2 = a.square()
    total = Ball(0)
    for iv in Z:
        if iv.kind != "pair":
            raise ValidationError("symmetric intervals have no meaning for zeta")
        lo, hi = Ball(iv.lo), Ball(iv.hi)
        if lo.gt(y):
            dist = hi - y
        elif hi.lt(y):
            dist = y - lo
        else:
            raise ValidationError(f"zero interval [{iv.lo}, {iv.hi}] is not separated from y")
        total = total + a / (a2 + dist.square()) * iv.multiplicity
    return total


# ------------------------------------------------------- zeta and xi on the line
def zeta_em(s: CBall, N: int | None = None) -> CBall:
    """Euler-Maclaurin enclosure of zeta(s), s != 1, with a Backlund-type remainder."""
    sigma = Ball(s.re)
    t = Ball(s.im)
    tmax = max(abs(float(t.lo)), abs(float(t.hi)))
    if N is None:
        N = int(tmax / 4) + 20
    if (s - 1).abs2().contains(0):
        raise DomainError("zeta has a pole at s = 1")
    total = CBall(0, 0)
    for n in range(1, N):
        total = total + (-s * CBall(log_int(n), 0)).exp() if n > 1 else total + CBall(1, 0)
    logN = CBall(log_int(N), 0)
    N_s = (-s * logN).exp()
    total = total + N_s * CBall(N, 0) / (s - 1) + N_s * CBall(Ball(1) / 2, 0)
    poch = s  # s (s+1) ... (s+2k-2)
    Npow = N_s / CBall(N, 0)  # N^{-s-2k+1} at k = 1
    inv_N2 = Ball(1) / (N * N)
    tiny = Ball(2) ** -(get_prec() + 8)
    fact = 2  # (2k)!
    prev_bound: Ball | None = None
    last_term: CBall | None = None
    for k in range(1, 400):
        term = poch * Npow * CBall(Ball(_bernoulli(2 * k)) / fact, 0)
        # remainder if the expansion stops before term k
        sig_k = sigma + 2 * k - 1
        if sig_k.is_positive():
            bound = abs(s + (2 * k - 1)) / sig_k * abs(term)
            growing = prev_bound is not None and k > 3 and bound.gt(prev_bound)
            if bound.lt(tiny) or growing:
                if growing:
                    bound = prev_bound
                    total = total - last_term
                return total.add_error(bound.upper())
            prev_bound, last_term = bound, term
        total = total + term
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        Npow = Npow * CBall(inv_N2, 0)
        fact *= (2 * k + 1) * (2 * k + 2)
    raise DomainError(f"Euler-Maclaurin did not converge for s={s!r} with N={N}")


def xi_enclosure(t: Ball, terms: int | None = None) -> Ball:
    """Enclosure of the real number xi(1/2 + i t), xi(s) = (s-1) pi^(-s/2) Gamma(s/2+1) zeta(s)."""
    t = Ball(t)
    if max(abs(float(t.lo)), abs(float(t.hi))) > MAX_EM_HEIGHT:
        raise DomainError(f"xi evaluation is limited to |t| <= {MAX_EM_HEIGHT}")
    half = Ball(1) / 2
    s = CBall(half, t)
    lg = loggamma_complex(s * CBall(half, 0) + CBall(1, 0))
    log_factor = lg - s * CBall(pi_ball().log() / 2, 0)
    value = log_factor.exp() * (s - CBall(1, 0)) * zeta_em(s, terms)
    if not value.im.contains(0):
        raise DomainError(f"xi enclosure at t={t!r} lost its real structure: {value!r}")
    return value.re


def certify_sign_change(t1, t2, terms: int | None = None) -> bool:
    """True iff xi(1/2+it) is certified to change sign between ``t1`` and ``t2``."""
    t1, t2 = Ball(t1), Ball(t2)
    if not t1.lt(t2):
        return False
    s1 = xi_enclosure(t1, terms).sign()
    s2 = xi_enclosure(t2, terms).sign()
    return s1 != 0 and s2 != 0 and s1 != s2


@dataclass
class CertifyResult:
    ordinates: list[Fraction]
    radius: Fraction
    t_min: Fraction
    t_max: Fraction
    grid: Fraction
    evaluations: int = 0
    uncertain: list[Fraction] = field(default_factory=list)

    def zero_set(self, **kwargs) -> ZeroSet:
        kwargs.setdefault("provenance", "certified")
        return build_zero_set(((t, 1) for t in self.ordinates), self.radius, **kwargs)

    def to_text(self) -> str:
        lines = [
            "# xi(1/2+it) sign changes, certified with interval arithmetic",
            f"# scan t in [{self.t_min}, {self.t_max}] with step {_dec(self.grid)}",
            f"radius={_dec(self.radius)}",
        ]
        lines += [_dec(t) for t in self.ordinates]
        return "\n".join(lines) + "\n"


def _dec(q: Fraction) -> str:
    """Exact decimal expansion of a rational with denominator 2^a 5^b."""
    d = q.denominator
    k = 0
    while d % 2 == 0 or d % 5 == 0:
        d //= 2 if d % 2 == 0 else 5
        k += 1
    if d != 1:
        raise ValueError(f"{q} has no finite decimal expansion")
    scale = 10**k
    n = q * scale
    s = str(abs(n.numerator) // n.denominator).rjust(k + 1, "0")
    body = s[:-k] + "." + s[-k:] if k else s
    body = body.rstrip("0").rstrip(".") if "." in body else body
    return ("-" if q < 0 else "") + body


def _sign_at(t: Fraction, terms: int | None, cache: dict) -> int:
    if t not in cache:
        sign = xi_enclosure(Ball(t), terms).sign()
        if sign == 0:
            with precision(2 * get_prec()):
                sign = xi_enclosure(Ball(t), terms).sign()
        cache[t] = sign
    return cache[t]


def certify_zeros(t_min, t_max, grid, *, target_radius="1e-10", terms: int | None = None,
                  prec: int = 128) -> CertifyResult:
    """Scan ``[t_min, t_max]`` on a grid, then bisect each bracketed sign change.

    Brackets are bisected down to half-width ``<= target_radius``.  All output
    intervals get one common radius (the largest half-width reached), so the
    result is expressible as ordinates plus a radius header.  Points where the
    sign stays undecided are reported in ``uncertain``.
    """
    t_min, t_max, grid = _exact(t_min), _exact(t_max), _exact(grid)
    target = _exact(target_radius)
    if not (0 <= t_min < t_max):
        raise ValidationError(f"need 0 <= t_min < t_max, got [{t_min}, {t_max}]")
    if grid <= 0 or target <= 0:
        raise ValidationError("grid step and target radius must be positive")
    if t_max > MAX_EM_HEIGHT:
        raise ValidationError(f"t_max is limited to {MAX_EM_HEIGHT}")
    cache: dict[Fraction, int] = {}
    brackets: list[tuple[Fraction, Fraction]] = []
    uncertain: list[Fraction] = []
    with precision(prec):
        n_points = int((t_max - t_min) / grid) + 1
        points = [t_min + i * grid for i in range(n_points)]
        signs = [_sign_at(p, terms, cache) for p in points]
        uncertain += [p for p, sg in zip(points, signs) if sg == 0]
        for a, b, sa, sb in zip(points, points[1:], signs, signs[1:]):
            if sa == 0 or sb == 0 or sa == sb:
                continue
            lo, hi = a, b
            while (hi - lo) / 2 > target:
                mid = (lo + hi) / 2
                sm = _sign_at(mid, terms, cache)
                if sm == 0:
                    uncertain.append(mid)
                    break
                if sm == sa:
                    lo = mid
                else:
                    hi = mid
            brackets.append((lo, hi))
    radius = max(((hi - lo) / 2 for lo, hi in brackets), default=grid / 2)
    ordinates = [(lo + hi) / 2 for lo, hi in brackets]
    return CertifyResult(ordinates, radius, t_min, t_max, grid, len(cache), uncertain)
