"""Analytic data of an L-function: degree, conductor, root number, gamma shifts, coefficients.

Instances are immutable.  Descriptor files are JSON::

    {"label": "37a", "r": 2, "N": 37, "epsilon": "i", "mu": ["1/2", "3/2"],
     "provider": {"kind": "elliptic", "curve": [0, 0, 1, -1, 0], "bad_primes": {"37": -1}}}

Provider kinds: ``dirichlet`` (``d``), ``ramanujan``, ``elliptic`` (``curve``,
``bad_primes``) and ``custom`` (``path`` to a coefficient table, resolved
relative to the descriptor).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .arith import (
    CoefficientProvider,
    DirichletProvider,
    EllipticProvider,
    RamanujanProvider,
    is_fundamental_discriminant,
    load_provider_file,
)
from .errors import ValidationError

_EPSILON_NAMES = {"1": 1 + 0j, "-1": -1 + 0j, "i": 1j, "-i": -1j}


def parse_epsilon(value: str | complex | int) -> complex:
    if isinstance(value, str):
        key = value.strip().replace(" ", "")
        if key in _EPSILON_NAMES:
            return _EPSILON_NAMES[key]
        try:
            value = complex(key.replace("i", "j"))
        except ValueError:
            raise ValidationError(f"cannot parse root number {value!r}") from None
    eps = complex(value)
    if abs(abs(eps) - 1) > 1e-12:
        raise ValidationError(f"root number must have modulus 1, got {eps}")
    return eps


def format_epsilon(eps: complex) -> str:
    for name, val in _EPSILON_NAMES.items():
        if eps == val:
            return name
    return repr(eps)


@dataclass(frozen=True)
class LFunctionParams:
    r: int
    N: int
    epsilon: complex
    mu: tuple[Fraction, ...]
    provider: CoefficientProvider
    label: str = ""

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValidationError(f"degree must be >= 1, got {self.r}")
        if self.N < 1:
            raise ValidationError(f"conductor must be >= 1, got {self.N}")
        if len(self.mu) != self.r:
            raise ValidationError(f"need {self.r} gamma shifts, got {len(self.mu)}")
        if any(m < 0 for m in self.mu):
            raise ValidationError(f"gamma shifts must be nonnegative, got {self.mu}")
        if abs(abs(self.epsilon) - 1) > 1e-12:
            raise ValidationError(f"root number must have modulus 1, got {self.epsilon}")
        if self.provider.degree != self.r and self.provider.kind != "trivial":
            raise ValidationError(
                f"provider of degree {self.provider.degree} does not match r={self.r}"
            )
        if self.parity is None:
            warnings.warn(
                f"root number {self.epsilon} is not one of 1, -1, i, -i; parity checks are disabled",
                stacklevel=3,
            )

    @property
    def parity(self) -> str | None:
        """``"even"`` or ``"odd"``: the parity of t -> xi_L(1/2 + it).  ``None`` for a general root number."""
        if self.epsilon in (1, -1):
            return "even"
        if self.epsilon in (1j, -1j):
            return "odd"
        return None

    def describe(self) -> dict:
        return {
            "label": self.label,
            "r": self.r,
            "N": self.N,
            "epsilon": format_epsilon(self.epsilon),
            "mu": [str(m) for m in self.mu],
            "provider": self.provider.describe(),
        }


def make_dirichlet(d: int) -> LFunctionParams:
    """Quadratic character of fundamental discriminant ``d``."""
    if d == 1 or not is_fundamental_discriminant(d):
        raise ValidationError(f"{d} is not a fundamental discriminant other than 1")
    return LFunctionParams(
        r=1,
        N=abs(d),
        epsilon=1,
        mu=(Fraction(0 if d > 0 else 1),),
        provider=DirichletProvider(d),
        label=f"chi_{d}",
    )


def make_ramanujan() -> LFunctionParams:
    """L-function of the discriminant modular form Delta (weight 12, level 1)."""
    return LFunctionParams(
        r=2,
        N=1,
        epsilon=1,
        mu=(Fraction(11, 2), Fraction(13, 2)),
        provider=RamanujanProvider(),
        label="delta",
    )


def make_elliptic(
    curve: Sequence[int],
    conductor: int,
    epsilon: str | complex,
    bad_primes: Mapping[int, int] | None = None,
    label: str = "",
) -> LFunctionParams:
    """Elliptic-curve L-function; conductor, root number and bad-prime a_p come from the caller."""
    return LFunctionParams(
        r=2,
        N=int(conductor),
        epsilon=parse_epsilon(epsilon),
        mu=(Fraction(1, 2), Fraction(3, 2)),
        provider=EllipticProvider(curve, bad_primes),
        label=label or f"elliptic{list(curve)}",
    )


def builtin_instance(name: str) -> LFunctionParams:
    """Named instances: ``delta``, ``37a``, ``chi<d>`` (e.g. ``chi-1159523``)."""
    if name == "delta":
        return make_ramanujan()
    if name == "37a":
        return make_elliptic((0, 0, 1, -1, 0), 37, "i", {37: -1}, label="37a")
    if name.startswith("chi"):
        try:
            d = int(name[3:])
        except ValueError:
            raise ValidationError(f"unknown instance {name!r}") from None
        return make_dirichlet(d)
    raise ValidationError(f"unknown instance {name!r}; try delta, 37a or chi<d>")


def _parse_fraction(value) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse {value!r} as a rational number") from None


def params_from_dict(data: Mapping, base_dir: Path | None = None) -> LFunctionParams:
    try:
        prov = data["provider"]
        kind = prov["kind"]
        if kind == "dirichlet":
            provider: CoefficientProvider = DirichletProvider(int(prov["d"]))
        elif kind == "ramanujan":
            provider = RamanujanProvider()
        elif kind == "elliptic":
            bad = {int(p): int(a) for p, a in prov.get("bad_primes", {}).items()}
            provider = EllipticProvider(prov["curve"], bad)
        elif kind == "custom":
            path = Path(prov["path"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            provider = load_provider_file(path)
        else:
            raise ValidationError(f"unknown provider kind {kind!r}")
        return LFunctionParams(
            r=int(data["r"]),
            N=int(data["N"]),
            epsilon=parse_epsilon(data.get("epsilon", "1")),
            mu=tuple(_parse_fraction(m) for m in data["mu"]),
            provider=provider,
            label=str(data.get("label", "")),
        )
    except KeyError as exc:
        raise ValidationError(f"descriptor is missing field {exc}") from None


def load_params(path: str | Path) -> LFunctionParams:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from None
    return params_from_dict(data, path.parent)


def save_params(params: LFunctionParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps(params.describe(), indent=2) + "\n", encoding="utf-8")
