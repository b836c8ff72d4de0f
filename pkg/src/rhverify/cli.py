"""Command-line front end.

    rhverify w1 delta --delta -1 --K 100000
    rhverify verify-l chi-1159523 --zeros zeros.txt --eta 32
    rhverify verify-zeta --x -0.5 --y 14.1 --zeros bundled --first 12 --eta 7.564
    rhverify certify --t-min 10 --t-max 30 --grid 0.1

Exit codes: 0 every requested verdict verified, 1 some inconclusive,
2 invalid input, 3 insufficient precision.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import DataError, DomainError, PrecisionError, ValidationError
from .ival import Ball, CBall, get_prec, precision
from .lmodel import LFunctionParams, builtin_instance, load_params
from .logderiv import DEFAULT_K_L, DEFAULT_K_ZETA, w1 as compute_w1, w2 as compute_w2
from .verify import (
    L_PARTS,
    NoWindowError,
    Verdict,
    l_context,
    l_predicate,
    max_eta,
    verdict_l,
    _exclusive,
    verdict_zeta,
    zeta_context,
    zeta_predicate,
)
from .zeros import build_zero_set, certify_zeros, parse_zeros_text

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


# ------------------------------------------------------------------ inputs
def _data_path(*parts: str) -> Path:
    return Path(str(resources.files("rhverify").joinpath("data", *parts)))


def resolve_instance(name: str) -> LFunctionParams:
    """A descriptor path, a bundled descriptor name, or a builtin such as ``chi5``."""
    path = Path(name)
    if path.exists():
        return load_params(path)
    bundled = _data_path("instances", f"{name}.json")
    if bundled.exists():
        return load_params(bundled)
    return builtin_instance(name)


def _ball_arg(text: str) -> Ball:
    """``a`` or ``a,b`` as an enclosure."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return Ball(parts[0])
    if len(parts) == 2:
        return Ball(parts[0], parts[1])
    raise ValidationError(f"expected a number or 'lo,hi', got {text!r}")


def _decimal(text: str) -> Fraction:
    from decimal import Decimal, InvalidOperation

    try:
        return Fraction(Decimal(text.strip()))
    except InvalidOperation:
        raise ValidationError(f"cannot parse {text!r} as a decimal number") from None


def _read_zeros(spec: str, first: int | None):
    path = _data_path("zeta_zeros_100.txt") if spec == "bundled" else Path(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read zeros file {spec!r}: {exc.strerror}") from None
    entries, radius = parse_zeros_text(text, str(path))
    if first is not None:
        entries = sorted(entries)[:first]
    return entries, radius


# ------------------------------------------------------------------ report
class Report:
    def __init__(self, command: str, digits: int):
        self.digits = digits
        self.data: dict = {"command": command, "version": __version__, "precision_bits": get_prec()}
        self.data["parameters"] = {}
        self.data["results"] = {}
        self.data["verdicts"] = []
        self.data["notes"] = []
        self.timings: dict[str, float] = {}

    def param(self, key: str, value) -> None:
        if value is None:
            return
        self.data["parameters"][key] = value if isinstance(value, (int, str)) or value is None else str(value)

    def enclosure(self, key: str, ball: Ball) -> None:
        self.data["results"][key] = list(ball.endpoints_str(self.digits))

    def verdict(self, v: Verdict, eta_text: str | None = None) -> None:
        entry = {
            "part": v.part,
            "statement": v.statement,
            "status": v.status,
            "lhs": list(v.lhs.endpoints_str(self.digits)),
            "rhs": list(v.rhs.endpoints_str(self.digits)),
        }
        if v.eta is not None:
            entry["eta"] = eta_text if eta_text is not None else v.eta.endpoints_str(self.digits)[0]
        if v.m is not None:
            entry["m"] = v.m
        entry["conclusion"] = v.conclusion
        if v.note:
            entry["note"] = v.note
        self.data["verdicts"].append(entry)

    def note(self, text: str) -> None:
        self.data["notes"].append(text)

    def timed(self, key: str, start: float) -> None:
        self.timings[key] = round(time.perf_counter() - start, 3)

    def render(self, as_json: bool, with_timings: bool) -> str:
        data = dict(self.data)
        if with_timings:
            data["timings_s"] = self.timings
        if as_json:
            return json.dumps(data, indent=2)
        lines = [f"command: {data['command']}", f"version: {data['version']}",
                 f"precision_bits: {data['precision_bits']}"]
        for k, v in data["parameters"].items():
            lines.append(f"param.{k}: {v}")
        for k, (lo, hi) in data["results"].items():
            lines.append(f"{k}: [{lo}, {hi}]")
        for v in data["verdicts"]:
            where = f" eta={v['eta']}" if "eta" in v else ""
            lines.append(f"verdict.{v['part']}: {v['status']} ({v['statement']}{where})")
            lines.append(f"  lhs: [{v['lhs'][0]}, {v['lhs'][1]}]")
            lines.append(f"  rhs: [{v['rhs'][0]}, {v['rhs'][1]}]")
            if v["status"] == "verified":
                lines.append(f"  => {v['conclusion']}")
            if "note" in v:
                lines.append(f"  note: {v['note']}")
        if "search" in data:
            s = data["search"]
            lines.append(f"max_eta.{s['part']}: [{s['bracket'][0]}, {s['bracket'][1]}] (verified at {s['verified_eta']})")
        for n in data["notes"]:
            lines.append(f"note: {n}")
        if with_timings:
            for k, v in self.timings.items():
                lines.append(f"time.{k}: {v}s")
        return "\n".join(lines)

    def exit_code(self) -> int:
        if any(v["status"] != "verified" for v in self.data["verdicts"]):
            return EXIT_INCONCLUSIVE
        return EXIT_OK


def _search(report: Report, predicate, eta_hi: str, part: str) -> None:
    try:
        found = max_eta(predicate, _ball_arg(eta_hi))
    except NoWindowError as exc:
        report.note(f"max-eta search for part {part}: {exc}")
        report.data["verdicts"].append({"part": part, "statement": "max-eta", "status": "inconclusive",
                                        "lhs": ["0", "0"], "rhs": ["0", "0"], "conclusion": ""})
        return
    lo, hi = repr(float(found.bracket.lo)), repr(float(found.bracket.hi))
    report.data["search"] = {"part": part, "bracket": [lo, hi], "verified_eta": str(float(found.verified_eta)),
                             "iterations": found.iterations}


# ---------------------------------------------------------------- commands
def cmd_w1(args, report: Report) -> None:
    params = resolve_instance(args.instance)
    delta = _ball_arg(args.delta)
    report.param("instance", params.label)
    report.param("delta", args.delta)
    report.param("K", args.K)
    exact = _ball_arg(args.exact_logderiv) if args.exact_logderiv else None
    t = time.perf_counter()
    value = compute_w1(params, delta, args.K, exact_logderiv=exact)
    report.timed("w1", t)
    report.enclosure("w1", value)
    if args.w2:
        t = time.perf_counter()
        report.enclosure("w2", compute_w2(params, delta, args.K))
        report.timed("w2", t)


def cmd_verify_l(args, report: Report) -> None:
    params = resolve_instance(args.instance)
    delta = _ball_arg(args.delta)
    entries, header = _read_zeros(args.zeros, args.first)
    radius = _decimal(args.radius) if args.radius else header if header is not None else Fraction(1, 10**10)
    window = (Fraction(0), _decimal(args.tau) if args.tau else None)
    Z = build_zero_set(entries, radius, mode="l-function", window=window)
    parts = _parts(args.parts, L_PARTS)
    for key, val in (("instance", params.label), ("delta", args.delta), ("K", args.K), ("m", args.m),
                     ("zeros", len(Z)), ("radius", str(radius)), ("tau", args.tau)):
        report.param(key, val)
    t = time.perf_counter()
    w1_value = _ball_arg(args.w1) if args.w1 else None
    ctx = l_context(params, Z, delta, args.K, w1_value)
    report.timed("w1_and_C", t)
    report.enclosure("w1", ctx.w1)
    report.enclosure("C", ctx.C)
    for n in ctx.notes:
        report.note(n)
    for eta in args.eta or []:
        for v in verdict_l(ctx, _ball_arg(eta), args.m, parts):
            report.verdict(v, eta)
    if args.max_eta:
        _search(report, l_predicate(ctx, parts[0], args.m), args.max_eta, parts[0])


def cmd_verify_zeta(args, report: Report) -> None:
    y = _decimal(args.y)
    x = _decimal(args.x)
    improved = args.mode == "improved"
    tau = _decimal(args.tau) if args.tau else None
    c = _decimal(args.c) if args.c else (y / 2 if improved else None)
    if improved and tau is None:
        raise ValidationError("improved mode needs --tau")
    if args.counterpart and not improved:
        raise ValidationError("--counterpart needs --mode improved")
    entries, header = _read_zeros(args.zeros, args.first)
    radius = _decimal(args.radius) if args.radius else header if header is not None else Fraction(1, 10**10)
    window = (y - tau, y + tau) if tau is not None else (Fraction(0), None)
    if tau is not None:
        kept = [(t, mult) for t, mult in entries if window[0] <= t - radius and t + radius <= window[1]]
        if len(kept) < len(entries):
            report.note(f"{len(entries) - len(kept)} ordinate(s) outside [y-tau, y+tau] were dropped")
        entries = kept
    Z = build_zero_set(entries, radius, mode="zeta", window=window, center=y)
    for t in args.without or []:
        Z = Z.without(_decimal(t))
    z = CBall(Ball(x), Ball(y))
    for key, val in (("x", args.x), ("y", args.y), ("mode", args.mode), ("tau", args.tau),
                     ("c", None if c is None else str(c)), ("K", args.K), ("zeros", len(Z)),
                     ("radius", str(radius))):
        report.param(key, val)
    t = time.perf_counter()
    v_value = _ball_arg(args.v) if args.v else None
    ctx = zeta_context(z, Z, v_value=v_value, K=args.K, tau=tau if improved else None,
                       c=c if improved else None, workers=args.workers)
    report.timed("v_and_D", t)
    report.enclosure("re_v1z", ctx.v)
    report.enclosure("D", ctx.D)
    if ctx.tail is not None:
        report.enclosure("r", ctx.tail.r_lower)
        report.enclosure("R", ctx.tail.R_upper)
    parts = _parts(args.parts, ("i", "ii", "iii"))
    verdicts: list[tuple[Verdict, str | None]] = []
    for eta in args.eta or []:
        verdicts += [(v, eta) for v in verdict_zeta(ctx, _ball_arg(eta), parts)]
    if args.counterpart:
        verdicts += [(v, None) for v in verdict_zeta(ctx, Ball(1), ("iv",))]
    checked = _exclusive([v for v, _ in verdicts])
    for v, (_, eta) in zip(checked, verdicts):
        report.verdict(v, eta)
    if args.max_eta:
        _search(report, zeta_predicate(ctx, parts[0]), args.max_eta, parts[0])


def cmd_certify(args, report: Report) -> str:
    t = time.perf_counter()
    result = certify_zeros(args.t_min, args.t_max, args.grid, target_radius=args.radius, prec=args.prec or 128)
    report.timed("certify", t)
    for key, val in (("t_min", args.t_min), ("t_max", args.t_max), ("grid", args.grid),
                     ("intervals", len(result.ordinates)), ("evaluations", result.evaluations)):
        report.param(key, val)
    for u in result.uncertain:
        report.note(f"sign of xi undecided at t={float(u)}")
    return result.to_text()


def _parts(text: str | None, allowed: Sequence[str]) -> tuple[str, ...]:
    if not text:
        return tuple(allowed)
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    bad = [p for p in parts if p not in allowed and p != "iv"]
    if bad:
        raise ValidationError(f"unknown part(s) {bad}; choose from {', '.join(allowed)}")
    return parts


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhverify", description=__doc__.split("\n\n")[0])
    p.add_argument("--prec", type=int, default=None, help="working precision in bits (default: $RHVERIFY_PREC or 192)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--digits", type=int, default=20, help="significant digits for printed enclosures")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("w1", help="enclose the sum over zeros w1 at 1 - delta")
    a.add_argument("instance", help="descriptor file, or one of: delta, 37a, chi-1159523, chi<d>")
    a.add_argument("--delta", default="-1")
    a.add_argument("--K", type=int, default=DEFAULT_K_L)
    a.add_argument("--exact-logderiv", help="enclosure 'lo,hi' of L'/L(1) for delta = 0")
    a.add_argument("--w2", action="store_true", help="also enclose w2")

    b = sub.add_parser("verify-l", help="RH, simplicity and completeness checks for an L-function")
    b.add_argument("instance")
    b.add_argument("--zeros", required=True, help="zeros file (one ordinate per line)")
    b.add_argument("--radius", help="half-width for each ordinate (overrides the file header)")
    b.add_argument("--first", type=int, help="use only the lowest N ordinates")
    b.add_argument("--tau", help="height of the zeros data window")
    b.add_argument("--delta", default="-1")
    b.add_argument("--eta", action="append", help="window height; repeatable")
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--parts", help="comma list from i,ii,iii,iv,v (default: all)")
    b.add_argument("--max-eta", help="search the largest eta up to this value (first listed part)")
    b.add_argument("--K", type=int, default=DEFAULT_K_L)
    b.add_argument("--w1", help="use this enclosure 'lo,hi' of w1 instead of computing it")

    c = sub.add_parser("verify-zeta", help="RH window checks for zeta around x + iy")
    c.add_argument("--y", required=True)
    c.add_argument("--x", required=True)
    c.add_argument("--tau", help="half-width of the zeros data window (required in improved mode)")
    c.add_argument("--c", help="tail split point; improved mode default y/2")
    c.add_argument("--zeros", required=True, help="zeros file, or 'bundled' for the first 100 zeta zeros")
    c.add_argument("--first", type=int, help="use only the lowest N ordinates")
    c.add_argument("--radius")
    c.add_argument("--without", action="append", help="drop the interval containing this ordinate; repeatable")
    c.add_argument("--eta", action="append")
    c.add_argument("--parts", help="comma list from i,ii,iii (default: all)")
    c.add_argument("--mode", choices=("basic", "improved"), default="basic")
    c.add_argument("--counterpart", action="store_true", help="also test incompleteness of the list")
    c.add_argument("--max-eta")
    c.add_argument("--K", type=int, default=DEFAULT_K_ZETA)
    c.add_argument("--v", help="use this enclosure 'lo,hi' of Re v1z instead of computing it")
    c.add_argument("--workers", type=int, default=1, help="processes for the prime sum")

    d = sub.add_parser("certify", help="find certified sign changes of xi(1/2+it)")
    d.add_argument("--t-min", required=True)
    d.add_argument("--t-max", required=True)
    d.add_argument("--grid", required=True, help="scan step")
    d.add_argument("--radius", default="1e-10", help="target half-width of each interval")
    d.add_argument("--output", help="write the zeros file here instead of stdout")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        bits = args.prec if args.prec is not None else get_prec()
        with precision(bits):
            report = Report(args.command, args.digits)
            if args.command == "w1":
                cmd_w1(args, report)
            elif args.command == "verify-l":
                cmd_verify_l(args, report)
            elif args.command == "verify-zeta":
                cmd_verify_zeta(args, report)
            else:
                text = cmd_certify(args, report)
                if args.output:
                    Path(args.output).write_text(text, encoding="utf-8")
                else:
                    sys.stdout.write(text)
                    print(report.render(args.json, args.timings), file=sys.stderr)
                    return EXIT_OK
    except PrecisionError as exc:
        print(f"rhverify: precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (ValidationError, DomainError, DataError, NoWindowError, ValueError, OSError) as exc:
        print(f"rhverify: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(report.render(args.json, args.timings))
    return report.exit_code()
