"""Multiplicative orbit sets ``{r**k * rho**l}`` and exact searches inside them.

The orbit is stratified by the sign pattern of the exponents:

* ``B1``: ``k >= 0`` and ``l >= 0``
* ``B2``: ``k < 0`` and ``l < 0``
* ``B3``: ``k >= 0`` and ``l < 0``
* ``B4``: ``k < 0`` and ``l >= 0``

For never-connect pairs B1 alone is dense in ``(0, inf)``; the helpers here
produce finite, exactly checked witnesses of that fact.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, InvalidInput
from .exactnum import (
    ExponentPair,
    Ordering,
    SlopePair,
    compare_power_product,
    format_rational,
    is_never_connect,
    parse_rational,
)

DEFAULT_MAX_K = 10**4


class OrbitClass(str, enum.Enum):
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"

    @classmethod
    def of(cls, k: int, l: int) -> "OrbitClass":  # noqa: E741
        if k >= 0:
            return cls.B1 if l >= 0 else cls.B3
        return cls.B4 if l >= 0 else cls.B2


ALL_CLASSES = frozenset(OrbitClass)


@dataclass(frozen=True)
class OrbitEntry:
    value: Fraction
    exponents: ExponentPair
    klass: OrbitClass

    @classmethod
    def make(cls, pair: SlopePair, k: int, l: int) -> "OrbitEntry":  # noqa: E741
        return cls(pair.power_product(k, l), ExponentPair(k, l), OrbitClass.of(k, l))


@dataclass(frozen=True)
class OrbitWindow:
    lo: Fraction
    hi: Fraction
    bound: int
    entries: tuple[OrbitEntry, ...]

    @property
    def values(self) -> list[Fraction]:
        return [e.value for e in self.entries]


def parse_classes(spec: str | Iterable[str | OrbitClass]) -> frozenset[OrbitClass]:
    if isinstance(spec, str):
        spec = [s for s in spec.replace(" ", "").split(",") if s]
    try:
        classes = frozenset(OrbitClass(s) for s in spec)
    except ValueError as exc:
        raise InvalidInput(f"unknown orbit class: {exc}") from None
    if not classes:
        raise InvalidInput("at least one orbit class is required")
    return classes


def _exponent_range(nonneg: bool, bound: int) -> range:
    return range(0, bound + 1) if nonneg else range(-bound, 0)


def enumerate_orbit(
    pair: SlopePair,
    classes: Iterable[OrbitClass | str],
    bound: int,
    interval: tuple[Fraction, Fraction],
) -> OrbitWindow:
    """All ``r**k rho**l`` with the requested sign patterns, ``|k|, |l| <= bound``,
    lying in the closed interval, sorted by value."""
    lo, hi = (parse_rational(v) for v in interval)
    if bound < 0:
        raise InvalidInput(f"bound must be non-negative, got {bound}")
    if not lo < hi:
        raise InvalidInput(f"empty interval [{format_rational(lo)}, {format_rational(hi)}]")
    if pair.r == 1 or pair.rho == 1:
        raise InvalidInput("orbit enumeration needs r != 1 and rho != 1")
    wanted = parse_classes(classes)
    entries = []
    for klass in sorted(wanted):
        k_nonneg = klass in (OrbitClass.B1, OrbitClass.B3)
        l_nonneg = klass in (OrbitClass.B1, OrbitClass.B4)
        for k in _exponent_range(k_nonneg, bound):
            rk = pair.r**k
            for l in _exponent_range(l_nonneg, bound):  # noqa: E741
                v = rk * pair.rho**l
                if lo <= v <= hi:
                    entries.append(OrbitEntry(v, ExponentPair(k, l), klass))
    entries.sort(key=lambda e: (e.value, e.exponents))
    return OrbitWindow(lo, hi, bound, tuple(entries))


def max_gap(window: OrbitWindow) -> Fraction:
    """Largest gap between consecutive values, counting both interval ends."""
    if not window.entries:
        raise InvalidInput("max_gap of an empty window")
    pts = [window.lo, *window.values, window.hi]
    return max(b - a for a, b in zip(pts, pts[1:]))


def _require_r_lt_1_lt_rho(pair: SlopePair) -> None:
    if not (pair.r < 1 < pair.rho):
        raise InvalidInput(f"need r < 1 < rho, got {pair}")


def greedy_orbit(pair: SlopePair, steps: int) -> list[Fraction]:
    """``z_1 = 1, z_2 = r``, then multiply by rho while that stays <= 1, else by r."""
    _require_r_lt_1_lt_rho(pair)
    if steps < 1:
        raise InvalidInput("steps must be >= 1")
    z = [Fraction(1), pair.r][:steps]
    while len(z) < steps:
        nxt = pair.rho * z[-1]
        z.append(nxt if nxt <= 1 else pair.r * z[-1])
    return z


def find_exponents(
    pair: SlopePair,
    x: Fraction,
    epsilon: Fraction,
    max_k: int = DEFAULT_MAX_K,
) -> ExponentPair:
    """Non-negative ``(k, l)`` with ``1 - epsilon < x r**k rho**l < 1``.

    Sweeps ``k = 0, 1, ...``; for each ``k`` takes the largest ``l`` keeping the
    product below 1.  That ``l`` never decreases with ``k``, so the sweep is
    linear in ``max_k + l``.
    """
    x = parse_rational(x)
    epsilon = parse_rational(epsilon)
    if not is_never_connect(pair):
        raise InvalidInput(f"{pair} is not a never-connect pair")
    if not 0 < x < 1:
        raise InvalidInput(f"x must lie in (0, 1), got {format_rational(x)}")
    if not 0 < epsilon < 1:
        raise InvalidInput(f"epsilon must lie in (0, 1), got {format_rational(epsilon)}")
    floor = 1 - epsilon
    l = 0  # noqa: E741
    base = x  # x * r**k
    for k in range(max_k + 1):
        v = base * pair.rho**l
        while v * pair.rho < 1:
            v *= pair.rho
            l += 1  # noqa: E741
        if floor < v:
            assert v < 1
            return ExponentPair(k, l)
        base *= pair.r
    raise BudgetExceeded(
        f"no (k, l) with k <= {max_k} puts x*r^k*rho^l in ({format_rational(floor)}, 1)"
    )


def between_witness(
    pair: SlopePair,
    x: OrbitEntry,
    y: OrbitEntry,
    budget: int = DEFAULT_MAX_K,
) -> OrbitEntry:
    """A B1 element strictly between two B2 elements ``x < y``.

    For each ``k`` the smallest ``l >= 0`` with ``r**k rho**l > x`` is the only
    candidate that can land in ``(x, y)``, so scanning ``k`` upward is complete.
    """
    if not is_never_connect(pair):
        raise InvalidInput(f"{pair} is not a never-connect pair")
    for e in (x, y):
        if e.klass is not OrbitClass.B2:
            raise InvalidInput(f"expected a B2 entry, got {e.klass.value} {e.exponents}")
    if not x.value < y.value:
        raise InvalidInput("between_witness needs x < y")
    l = 0  # noqa: E741
    for k in range(budget + 1):
        # smallest l with value > x is non-decreasing in k
        while compare_power_product(pair, k, l, x.value) is not Ordering.GREATER:
            l += 1  # noqa: E741
        if compare_power_product(pair, k, l, y.value) is Ordering.LESS:
            return OrbitEntry.make(pair, k, l)
    raise BudgetExceeded(f"no B1 element with k <= {budget} found between x and y")
