"""Verdicts: compare certified lower bounds on zero sums against their exact values.

A hypothetical zero that is missing from a list, or off the critical line,
adds a definite positive amount to the sum over zeros.  If the listed zeros
plus that amount already exceed the computed value of the sum, the
hypothetical zero cannot exist.  Every comparison here is strict separation of
enclosures (``inf(lhs) > sup(rhs)``); touching or overlapping balls are
inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, RHVerifyError, ValidationError
from .ival import Ball, CBall, ball_min, log_int, pi_ball
from .zeros import ZeroSet, c_sum, d_sum

VERIFIED = "verified"
INCONCLUSIVE = "inconclusive"


class NoWindowError(RHVerifyError):
    """The requested inequality fails even for arbitrarily small windows."""


# ------------------------------------------------------------------- phi
def phi(beta, eta, x) -> Ball:
    """Real part of 1/(rho - z) + 1/(1 - conj(rho) - z) for rho = beta + i(y + eta), z = x + iy."""
    beta, eta, x = Ball(beta), Ball(eta), Ball(x)
    a = beta - x
    b = 1 - beta - x
    e2 = eta.square()
    return a / (a.square() + e2) + b / (b.square() + e2)


def phi_threshold(x) -> Ball:
    """sqrt(x(x-1)/3): below it the minimum over beta sits at 1/2, above it at the edge."""
    x = Ball(x)
    return (x * (x - 1) / 3).sqrt()


def phi_min(eta, x) -> tuple[str, Ball]:
    """Minimum of phi over beta in [0, 1] with its location ``center``, ``edge`` or ``either``."""
    eta, x = Ball(eta), Ball(x)
    if not x.le(0):
        raise DomainError(f"need x <= 0, got {x!r}")
    centre = phi(Fraction(1, 2), eta, x)
    edge = phi(0, eta, x)
    thr2 = x * (x - 1) / 3
    e2 = eta.square()
    if e2.le(thr2):
        return "center", centre
    if e2.gt(thr2):
        return "edge", edge
    return "either", ball_min(centre, edge)


def iota(eta) -> Ball:
    """min(1/(1+eta^2) + 2/(4+eta^2), 12/(9+4 eta^2)), the minimal weight of a zero pair at delta = -1."""
    e2 = Ball(eta).square()
    return ball_min(1 / (1 + e2) + 2 / (4 + e2), Ball(12) / (9 + 4 * e2))


@dataclass(frozen=True)
class LThresholds:
    f1: Ball
    f2: Ball
    h1: Ball
    h2: Ball
    F: Ball


def l_thresholds(eta, delta, m: int = 1) -> LThresholds:
    eta, delta = Ball(eta), Ball(delta)
    if not delta.le(0):
        raise DomainError(f"need delta <= 0, got {delta!r}")
    if m < 1:
        raise ValidationError(f"m must be a positive integer, got {m}")
    half = Fraction(1, 2)
    p0 = phi(0, eta, delta)
    ph = phi(half, eta, delta)
    ph0 = phi(half, 0, delta)
    return LThresholds(
        f1=2 * m * ball_min(p0, ph),
        f2=m * ph,
        h1=m * ph0,
        h2=Ball(m) / 2 * ph0,
        F=ball_min(ball_min(2 * p0, ph), ph0 / 2),
    )


@dataclass(frozen=True)
class ZetaThresholds:
    g1: Ball
    g2: Ball
    g3: Ball


def zeta_thresholds(eta, x) -> ZetaThresholds:
    eta, x = Ball(eta), Ball(x)
    if not x.le(0):
        raise DomainError(f"need x <= 0, got {x!r}")
    p0 = phi(0, eta, x)
    ph = phi(Fraction(1, 2), eta, x)
    return ZetaThresholds(g1=ball_min(p0, ph), g2=ph, g3=ball_min(p0, ph / 2))


# ------------------------------------------------------------ tail bounds
U_MIN_FACTOR = 168


def s_bounds(u) -> tuple[Ball, Ball]:
    """(ell(u), ell1(u)): explicit bounds for |S(u)| and its integral, valid for u > 168 pi."""
    u = Ball(u)
    if not u.gt(U_MIN_FACTOR * pi_ball()):
        raise DomainError(f"S(u) bounds need u > 168π, got {u!r}")
    lu = u.log()
    ell = Ball("0.112") * lu + Ball("0.278") * lu.log() + Ball("2.510")
    ell1 = Ball("0.059") * lu + Ball("2.067")
    return ell, ell1


@dataclass(frozen=True)
class TailBounds:
    eps1: Ball
    eps2: Ball
    eps3: Ball
    eps4: Ball
    eps5: Ball
    eps6: Ball
    ell: Ball
    ell1: Ball
    main: Ball
    b: Ball
    B: Ball
    r_lower: Ball
    R_upper: Ball


def check_tail_params(x: Ball, y: Ball, tau: Ball, c: Ball) -> None:
    if not x.is_negative():
        raise ValidationError(f"tail bounds need x<0, got x={x!r}")
    if not (1 - 2 * x).lt(tau):
        raise ValidationError(f"tail bounds need 1−2x<τ, got 1−2x={1 - 2 * x!r}, τ={tau!r}")
    if not tau.lt(y):
        raise ValidationError(f"tail bounds need τ<y, got τ={tau!r}, y={y!r}")
    if not (U_MIN_FACTOR * pi_ball()).lt(c):
        raise ValidationError(f"tail bounds need 168π<c, got c={c!r}")
    if not c.lt(y - tau):
        raise ValidationError(f"tail bounds need c<y−τ, got c={c!r}, y−τ={y - tau!r}")


def tail_bounds(z: CBall, tau, c) -> TailBounds:
    """Two-sided bounds on the contribution of zeros with |gamma - y| > tau to Re v1z."""
    x, y, tau, c = Ball(z.re), Ball(z.im), Ball(tau), Ball(c)
    check_tail_params(x, y, tau, c)
    pi = pi_ball()
    one2x = 1 - 2 * x
    ell, ell1 = s_bounds(2 * y)
    y_c = y - c
    eps1 = 4 * pi.square() * Ball("0.006") * (1 / (y + tau).square() + 1 / c.square())
    eps2 = one2x / (2 * y) * (2 * y / c).log()
    eps3 = ((1 - x).square() / (3 * tau**3) + 1 / y_c) * one2x
    eps4 = ((2 - 4 * x) / tau.square() + (2 - 4 * x) / y_c.square()) * ell
    eps5 = (4 - 8 * x) / tau**3 * ell1
    w = 2 * y - c
    eps6 = one2x / (2 * y) * (w.square() * w.log() - y_c.square() * y_c.log()) / (pi * y_c.square())
    log_y = (y / (2 * pi)).log()
    common = eps1 * one2x / tau + eps2
    b = (common + eps3 * log_y) / (2 * pi) + (eps4 + eps5) / 2
    B = common / (2 * pi) + (eps4 + eps5) / 2 + eps6
    main = one2x / (2 * pi * tau) * log_y
    return TailBounds(eps1, eps2, eps3, eps4, eps5, eps6, ell, ell1, main, b, B, main - b, main + B)


def kappa(y, tau) -> Ball:
    """Closed-form majorant used for the x = -1, c = y/2 specialization of the tail bounds.

    ``kappa + 3 ell(2y)/tau^2`` bounds ``b(-1 + iy, tau, y/2)`` from above; the
    ``ell(2y)/tau^2`` piece is kept separate because it is the dominant term.
    """
    y, tau = Ball(y), Ball(tau)
    if not (Ball(3).lt(tau) and tau.le(y / 2)):
        raise ValidationError(f"kappa needs 3<τ≤y/2, got τ={tau!r}, y={y!r}")
    if not (336 * pi_ball()).lt(y - tau):
        raise ValidationError(f"kappa needs 336π<y−τ, got y−τ={y - tau!r}")
    pi = pi_ball()
    ell, ell1 = s_bounds(2 * y)
    log_y = (y / (2 * pi)).log()
    return (
        Ball("0.57") / (tau * y.square())
        + 3 * log_int(2) / (2 * pi * y)
        + 2 * log_y / (pi * tau**3)
        + 3 * log_y / (pi * y)
        + 12 * ell / y.square()
        + 6 * ell1 / tau**3
    )


def kappa_majorant(y, tau) -> Ball:
    """kappa(y, tau) + 3 ell(2y)/tau^2, an upper bound for b(-1 + iy, tau, y/2)."""
    y, tau = Ball(y), Ball(tau)
    return kappa(y, tau) + 3 * s_bounds(2 * y)[0] / tau.square()


# --------------------------------------------------------------- verdicts
@dataclass(frozen=True)
class Verdict:
    statement: str
    part: str
    eta: Ball | None
    lhs: Ball
    rhs: Ball
    status: str
    m: int | None = None
    conclusion: str = ""
    note: str = ""

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED


def _compare(lhs: Ball, rhs: Ball, greater: bool = True) -> str:
    ok = lhs.gt(rhs) if greater else lhs.lt(rhs)
    return VERIFIED if ok else INCONCLUSIVE


@dataclass(frozen=True)
class LContext:
    """Everything a verdict for an L-function needs, evaluated once."""

    w1: Ball
    C: Ball
    delta: Ball
    label: str = ""
    notes: tuple[str, ...] = ()


def l_context(params, Z: ZeroSet, delta, K: int | None = None, w1_value: Ball | None = None,
              table=None) -> LContext:
    """Evaluate w1 and C(Z, delta) and check the zero set against the root-number parity."""
    from .logderiv import DEFAULT_K_L, w1 as compute_w1

    delta = Ball(delta)
    notes = []
    parity = getattr(params, "parity", None)
    for iv in Z:
        if iv.kind != "symmetric":
            continue
        if parity == "even":
            raise ValidationError(
                "xi_L(1/2+it) is even for root number ±1, so it cannot change sign on [−γ0, γ0]"
            )
        if parity == "odd" and iv.multiplicity % 2 == 0:
            raise ValidationError("a central zero of an odd xi_L has odd multiplicity")
    if parity == "odd" and not any(iv.kind == "symmetric" for iv in Z):
        notes.append("root number ±i forces a central zero, but the zero set has no interval around t=0")
    if w1_value is None:
        w1_value = compute_w1(params, delta, K or DEFAULT_K_L, table)
    return LContext(Ball(w1_value), c_sum(Z, delta), delta, getattr(params, "label", ""), tuple(notes))


L_PARTS = ("i", "ii", "iii", "iv", "v")


def verdict_l(ctx: LContext, eta, m: int = 1, parts: Sequence[str] = L_PARTS) -> list[Verdict]:
    """One verdict per requested part of the L-function criteria."""
    eta = Ball(eta)
    if not eta.is_positive():
        raise DomainError(f"need eta > 0, got {eta!r}")
    th = l_thresholds(eta, ctx.delta, m)
    out = []
    for part in parts:
        if part == "i":
            stmt = "rh-window" if m == 1 else f"off-line-count({m})"
            lhs, concl = th.f1, f"fewer than {4 * m} non-real zeros off the critical line with height <= eta"
        elif part == "ii":
            stmt, lhs = f"on-line-missing({m})", th.f2
            concl = f"fewer than {2 * m} zeros on the critical line with height <= eta missing from the list"
        elif part == "iii":
            stmt, lhs = f"real-zeros({m})", th.h1
            concl = f"fewer than {2 * m} real zeros off the critical line"
        elif part == "iv":
            stmt, lhs = f"central-multiplicity({m})", th.h2
            concl = f"a zero at s=1/2 has multiplicity less than {m}"
        elif part == "v":
            stmt, lhs = "completeness", th.F
            concl = "every zero with height <= eta is on the line, simple and in the list"
        else:
            raise ValidationError(f"unknown part {part!r}; choose from {', '.join(L_PARTS)}")
        total = lhs + ctx.C
        uses_eta = part in ("i", "ii", "v")
        out.append(Verdict(stmt, part, eta if uses_eta else None, total, ctx.w1,
                           _compare(total, ctx.w1), m if part != "v" else None, concl))
    return out


@dataclass(frozen=True)
class ZetaContext:
    x: Ball
    y: Ball
    v: Ball
    D: Ball
    tail: TailBounds | None = None
    tau: Ball | None = None


def zeta_context(z: CBall, Z: ZeroSet, *, v_value: Ball | None = None, K: int | None = None,
                 tau=None, c=None, table=None, workers: int = 1) -> ZetaContext:
    """Evaluate Re v1z, D(Z, z) and, if ``tau`` and ``c`` are given, the tail bounds."""
    from .logderiv import DEFAULT_K_ZETA, v1z

    x, y = Ball(z.re), Ball(z.im)
    tail = None
    if tau is not None or c is not None:
        if tau is None or c is None:
            raise ValidationError("tail mode needs both tau and c")
        tail = tail_bounds(z, tau, c)
        tau_b = Ball(tau)
        lo_w, hi_w = y - tau_b, y + tau_b
        for iv in Z:
            if not (lo_w.le(iv.lo) and hi_w.ge(iv.hi)):
                raise ValidationError(
                    f"zero interval [{iv.lo}, {iv.hi}] lies outside the data window [y−τ, y+τ]"
                )
    if v_value is None:
        v_value = v1z(z, K or DEFAULT_K_ZETA, table, workers)
    return ZetaContext(x, y, Ball(v_value), d_sum(Z, z), tail, None if tau is None else Ball(tau))


ZETA_PARTS = ("i", "ii", "iii", "iv")


def verdict_zeta(ctx: ZetaContext, eta, parts: Sequence[str] = ("i", "ii", "iii")) -> list[Verdict]:
    """Verdicts for zeta around z = x + iy; the tail term is used when ``ctx.tail`` is set.

    Part ``iv`` (incompleteness of the list inside [y - tau, y + tau]) needs the tail bounds.
    """
    eta = Ball(eta)
    if not eta.is_positive():
        raise DomainError(f"need eta > 0, got {eta!r}")
    if not eta.le(ctx.y):
        raise DomainError(f"need eta <= y, got eta={eta!r}")
    th = zeta_thresholds(eta, ctx.x)
    extra = ctx.tail.r_lower if ctx.tail is not None else Ball(0)
    out = []
    for part in parts:
        if part == "i":
            stmt, g = "rh-window", th.g1
            concl = "all zeros with height in [y-eta, y+eta] are on the critical line"
        elif part == "ii":
            stmt, g = "simple-zeros", th.g2
            concl = "all zeros on the critical line with height in [y-eta, y+eta] are simple"
        elif part == "iii":
            stmt, g = "completeness", th.g3
            concl = "every zero with height in [y-eta, y+eta] is on the line, simple and in the list"
        elif part == "iv":
            if ctx.tail is None:
                raise ValidationError("the incompleteness test needs tau and c (tail bounds)")
            lhs = ctx.D + ctx.tail.R_upper
            out.append(Verdict("incompleteness", "iv", None, lhs, ctx.v, _compare(lhs, ctx.v, greater=False),
                               conclusion="some zero with height in [y-tau, y+tau] is missing from the list"))
            continue
        else:
            raise ValidationError(f"unknown part {part!r}; choose from {', '.join(ZETA_PARTS)}")
        lhs = g + ctx.D + extra
        out.append(Verdict(stmt, part, eta, lhs, ctx.v, _compare(lhs, ctx.v), conclusion=concl))
    return _exclusive(out)


def _exclusive(verdicts: list[Verdict]) -> list[Verdict]:
    """Completeness and incompleteness are never both reported as verified."""
    comp = [v for v in verdicts if v.statement == "completeness" and v.verified]
    inc = [v for v in verdicts if v.statement == "incompleteness" and v.verified]
    if not (comp and inc):
        return verdicts
    note = "completeness and incompleteness both passed; inputs flagged, neither is claimed"
    return [
        replace(v, status=INCONCLUSIVE, note=note) if v.statement in ("completeness", "incompleteness") else v
        for v in verdicts
    ]


# ------------------------------------------------------------- window search
@dataclass(frozen=True)
class EtaSearch:
    bracket: Ball  # [largest verified eta found, smallest failing eta found]
    verified_eta: Fraction
    iterations: int


def max_eta(predicate: Callable[[Ball], bool], eta_hi, *, rel_tol: Fraction = Fraction(1, 1000),
            max_iter: int = 40) -> EtaSearch:
    """Largest eta in (0, eta_hi] for which the (monotone decreasing) predicate holds.

    Bisection on exact rationals.  ``bracket`` runs from the largest verified
    eta to the smallest failing one (or ``eta_hi`` if that verifies).
    """
    hi = Ball(eta_hi).upper_exact()
    if hi <= 0:
        raise DomainError("eta_hi must be positive")
    if predicate(Ball(hi)):
        return EtaSearch(Ball(hi), hi, 0)
    lo = hi
    for _ in range(max_iter):
        lo = lo / 2
        if predicate(Ball(lo)):
            break
    else:
        raise NoWindowError("the inequality fails even for tiny windows")
    hi_fail = lo * 2
    it = 0
    while it < max_iter and (hi_fail - lo) > rel_tol * lo:
        mid = (lo + hi_fail) / 2
        # keep the bracket on short decimals
        mid = _round_fraction(mid, lo, hi_fail)
        if predicate(Ball(mid)):
            lo = mid
        else:
            hi_fail = mid
        it += 1
    return EtaSearch(Ball(lo, hi_fail), lo, it)


def _round_fraction(mid: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    span = hi - lo
    digits = max(0, -math.floor(math.log10(span)) + 2) if span > 0 else 20
    rounded = Fraction(round(mid * 10**digits), 10**digits)
    return rounded if lo < rounded < hi else mid


def l_predicate(ctx: LContext, part: str = "i", m: int = 1) -> Callable[[Ball], bool]:
    return lambda eta: verdict_l(ctx, eta, m, (part,))[0].verified


def zeta_predicate(ctx: ZetaContext, part: str = "i") -> Callable[[Ball], bool]:
    return lambda eta: verdict_zeta(ctx, eta, (part,))[0].verified
