"""Exact positive-rational arithmetic for slope pairs.

Rationals are :class:`fractions.Fraction` throughout; this module adds the
prime-signature machinery that decides whether two slopes are
multiplicatively dependent (``r**k == rho**l`` for some ``(k, l) != (0, 0)``).
"""

from __future__ import annotations

import enum
import os
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

from .errors import InvalidInput, PrimeBoundExceeded

Rational = Fraction
RationalLike = Union[Fraction, int, str]

DEFAULT_PRIME_BOUND = 10**6
PRIME_BOUND_ENV = "LELEKFAN_PRIME_BOUND"

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (base 10, optional leading minus).

    Decimal and exponent notation are refused on purpose: a float such as
    ``0.1`` carries no exact slope, and classification depends on exactness.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise InvalidInput(f"expected a rational string like '3/4', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        if re.search(r"[.eE]", text):
            raise InvalidInput(
                f"{text!r} looks like a floating-point number; exact rationals are "
                "required here (write e.g. '1/2'); float slopes are only accepted "
                "by the 'explore' command, which never classifies"
            )
        raise InvalidInput(f"cannot parse {text!r} as a rational 'p/q' or 'p'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def prime_bound() -> int:
    raw = os.environ.get(PRIME_BOUND_ENV)
    if raw is None:
        return DEFAULT_PRIME_BOUND
    try:
        bound = int(raw)
    except ValueError:
        raise InvalidInput(f"{PRIME_BOUND_ENV}={raw!r} is not an integer") from None
    if bound < 2:
        raise InvalidInput(f"{PRIME_BOUND_ENV} must be at least 2")
    return bound


class ExponentPair(NamedTuple):
    k: int
    l: int  # noqa: E741


@dataclass(frozen=True)
class SlopePair:
    r: Fraction
    rho: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", parse_rational(self.r))
        object.__setattr__(self, "rho", parse_rational(self.rho))
        if self.r <= 0 or self.rho <= 0:
            raise InvalidInput(
                f"slopes must be positive, got r={format_rational(self.r)}, "
                f"rho={format_rational(self.rho)}"
            )

    @classmethod
    def parse(cls, r: RationalLike, rho: RationalLike) -> "SlopePair":
        return cls(parse_rational(r), parse_rational(rho))

    def swapped(self) -> "SlopePair":
        return SlopePair(self.rho, self.r)

    def normalized(self) -> "SlopePair":
        return self if self.r <= self.rho else self.swapped()

    def slope(self, symbol: str) -> Fraction:
        if symbol == "R":
            return self.r
        if symbol == "P":
            return self.rho
        raise InvalidInput(f"itinerary symbols are 'R' and 'P', got {symbol!r}")

    def power_product(self, k: int, l: int) -> Fraction:  # noqa: E741
        return self.r**k * self.rho**l

    def as_dict(self) -> dict[str, str]:
        return {"r": format_rational(self.r), "rho": format_rational(self.rho)}

    def __str__(self) -> str:
        return f"({format_rational(self.r)}, {format_rational(self.rho)})"


class PrimeSignature(Mapping[int, int]):
    """Immutable prime -> nonzero exponent map; empty means the value 1."""

    __slots__ = ("_exps",)

    def __init__(self, exponents: Mapping[int, int] | None = None) -> None:
        exps = {p: e for p, e in sorted((exponents or {}).items()) if e != 0}
        self._exps = exps

    def __getitem__(self, p: int) -> int:
        return self._exps[p]

    def __iter__(self) -> Iterator[int]:
        return iter(self._exps)

    def __len__(self) -> int:
        return len(self._exps)

    def __hash__(self) -> int:
        return hash(tuple(self._exps.items()))

    def __repr__(self) -> str:
        return f"PrimeSignature({self._exps!r})"

    def value(self) -> Fraction:
        num = den = 1
        for p, e in self._exps.items():
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(num, den)


def _trial_factor(n: int, bound: int, into: dict[int, int], sign: int) -> None:
    d = 2
    while d * d <= n:
        if d > bound:
            raise PrimeBoundExceeded(
                f"cofactor {n} has no prime factor <= {bound}; raise {PRIME_BOUND_ENV} "
                "to factor it"
            )
        while n % d == 0:
            n //= d
            into[d] = into.get(d, 0) + sign
        d += 1 if d == 2 else 2
    if n > 1:
        if n > bound:
            raise PrimeBoundExceeded(
                f"prime factor {n} exceeds the trial-division bound {bound}"
            )
        into[n] = into.get(n, 0) + sign


def factor_signature(q: RationalLike, bound: int | None = None) -> PrimeSignature:
    """Prime-exponent vector of a positive rational, by trial division."""
    q = parse_rational(q)
    if q <= 0:
        raise InvalidInput(f"can only factor positive rationals, got {format_rational(q)}")
    if bound is None:
        bound = prime_bound()
    exps: dict[int, int] = {}
    _trial_factor(q.numerator, bound, exps, +1)
    _trial_factor(q.denominator, bound, exps, -1)
    return PrimeSignature(exps)


def multiplicative_dependence(pair: SlopePair) -> ExponentPair | None:
    """Minimal ``(k, l) != (0, 0)`` with ``r**k == rho**l``, or ``None``.

    The relation holds iff ``k * sig(r) == l * sig(rho)`` as exponent vectors,
    so both signatures must share a support and be proportional.  The result
    is normalized to ``k > 0`` and ``gcd(k, |l|) == 1``.
    """
    if pair.r == 1 or pair.rho == 1:
        raise InvalidInput("dependence is degenerate when a slope equals 1")
    sr = factor_signature(pair.r)
    sp = factor_signature(pair.rho)
    if set(sr) != set(sp):
        return None
    p0 = next(iter(sr))
    # k * sr[p0] == l * sp[p0]
    k, l = sp[p0], sr[p0]  # noqa: E741
    g = gcd(k, l)
    k, l = k // g, l // g  # noqa: E741
    if k < 0:
        k, l = -k, -l  # noqa: E741
    if any(k * sr[p] != l * sp[p] for p in sr):
        return None
    return ExponentPair(k, l)


def is_never_connect(pair: SlopePair) -> bool:
    """True iff ``r < 1 < rho`` and no nontrivial ``r**k == rho**l`` exists."""
    if not (pair.r < 1 < pair.rho):
        return False
    return multiplicative_dependence(pair) is None


class Ordering(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def _power_num_den(q: Fraction, e: int) -> tuple[int, int]:
    if e >= 0:
        return q.numerator**e, q.denominator**e
    return q.denominator ** (-e), q.numerator ** (-e)


def compare_power_product(
    pair: SlopePair, k: int, l: int, threshold: RationalLike  # noqa: E741
) -> Ordering:
    """Exact ordering of ``r**k * rho**l`` against ``threshold``.

    Works on unreduced integer numerators/denominators, so no gcd is taken.
    """
    t = parse_rational(threshold)
    rn, rd = _power_num_den(pair.r, k)
    pn, pd = _power_num_den(pair.rho, l)
    lhs = rn * pn * t.denominator
    rhs = t.numerator * rd * pd
    if lhs < rhs:
        return Ordering.LESS
    if lhs > rhs:
        return Ordering.GREATER
    return Ordering.EQUAL
