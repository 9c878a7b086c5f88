"""Finite itineraries over ``{R, P}`` and the branch geometry they determine.

``R`` stands for a factor ``r`` and ``P`` for a factor ``rho``.  A word
``a_1 ... a_m`` has prefix products ``P_0 = 1, P_n = a_1 ... a_n``; the branch
it selects in the depth-``m`` product is ``{t * (P_0, ..., P_m) : 0 <= t <= T}``
with ``T = 1 / max(1, max_n P_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, InvariantFailure
from .exactnum import SlopePair, format_rational, is_never_connect, parse_rational
from .orbits import DEFAULT_MAX_K, find_exponents

SYMBOLS = "RP"


@dataclass(frozen=True)
class Itinerary:
    pair: SlopePair
    word: str = ""

    def __post_init__(self) -> None:
        bad = set(self.word) - set(SYMBOLS)
        if bad:
            raise InvalidInput(f"itinerary words use only R and P, found {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.word)

    def factors(self) -> list[Fraction]:
        return [self.pair.slope(s) for s in self.word]

    def total_product(self) -> Fraction:
        out = Fraction(1)
        for a in self.factors():
            out *= a
        return out


@dataclass(frozen=True)
class EndpointVector:
    coords: tuple[Fraction, ...]
    param: Fraction


def prefix_products(it: Itinerary) -> list[Fraction]:
    out = [Fraction(1)]
    for a in it.factors():
        out.append(out[-1] * a)
    return out


def branch_param(it: Itinerary) -> Fraction:
    """Largest ``t`` with ``t * P_n`` in ``[0, 1]`` for every prefix."""
    return 1 / max(prefix_products(it))  # P_0 = 1 is included


def endpoint_vector(it: Itinerary) -> EndpointVector:
    products = prefix_products(it)
    t = 1 / max(products)
    return EndpointVector(tuple(p * t for p in products), t)


def is_useful_periodic(pre: Itinerary, cycle: Itinerary) -> bool:
    """Whether ``pre + cycle + cycle + ...`` has bounded prefix products.

    Bounded prefix products are what make the selected branch a genuine arc
    rather than the single point at the origin.  The prefix never matters;
    only the cycle's total product does.
    """
    if not cycle.word:
        raise InvalidInput("cycle must be nonempty")
    if pre.pair != cycle.pair:
        raise InvalidInput("prefix and cycle must use the same slope pair")
    c = cycle.total_product()
    if c == 1 and is_never_connect(cycle.pair):
        # r**#R * rho**#P == 1 with a nonempty cycle contradicts never-connect
        raise InvariantFailure(f"cycle {cycle.word!r} has product 1 for a never-connect pair")
    return c <= 1


def build_sup_itinerary(
    pair: SlopePair,
    x: Fraction,
    epsilon: Fraction,
    budget: int = DEFAULT_MAX_K,
) -> Itinerary:
    """A word whose running values ``x * P_n`` stay in ``[0, 1]`` and reach ``1 - epsilon``.

    Works in stages on the current running value ``v``: stage ``j`` finds
    ``(k, l)`` with ``1 - 1/(j+1) < v r**k rho**l < 1`` and appends
    ``R*k + P*l``.  The R-run only shrinks ``v``; the P-run climbs
    monotonically to a value below 1, so every prefix stays in range.
    """
    x = parse_rational(x)
    epsilon = parse_rational(epsilon)
    if not is_never_connect(pair):
        raise InvalidInput(f"{pair} is not a never-connect pair")
    if not 0 < x < 1:
        raise InvalidInput(f"x must lie in (0, 1), got {format_rational(x)}")
    if epsilon <= 0:
        raise InvalidInput("epsilon must be positive")
    target = 1 - epsilon
    v = x
    word: list[str] = []
    j = 1
    while v < target:
        stage_eps = max(Fraction(1, j + 1), epsilon)
        k, l = find_exponents(pair, v, stage_eps, max_k=budget)  # noqa: E741
        word.append("R" * k + "P" * l)
        v = v * pair.r**k * pair.rho**l
        j += 1
    return Itinerary(pair, "".join(word))
