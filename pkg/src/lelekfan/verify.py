"""Desk-scale invariant suite run by ``lelekfan verify``.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
property, so one bad invariant does not hide the others.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from .classify import FanKind, classify, lelek_density_audit
from .errors import LelekfanError
from .exactnum import (
    Ordering,
    SlopePair,
    compare_power_product,
    factor_signature,
    is_never_connect,
    multiplicative_dependence,
)
from .itinerary import Itinerary, branch_param, build_sup_itinerary, endpoint_vector, prefix_products
from .mahavier import (
    PointCloud,
    branches_meet_only_at_origin,
    endpoints,
    finite_mahavier,
    hausdorff,
    in_relation_product,
    lift,
    sample_points,
    shift,
)
from .orbits import OrbitClass, enumerate_orbit, find_exponents, greedy_orbit, max_gap


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerifyConfig:
    pair: SlopePair
    depth: int = 8
    bound: int = 32
    epsilon: Fraction = Fraction(1, 100)
    samples: int = 64
    seed: int = 0


def _check(name: str, fn: Callable[[], str | None]) -> CheckResult:
    try:
        failure = fn()
    except LelekfanError as exc:
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, failure is None, failure or "")


def _random_words(rng: random.Random, count: int, max_len: int) -> Iterator[str]:
    for _ in range(count):
        yield "".join(rng.choice("RP") for _ in range(rng.randint(0, max_len)))


def run_checks(cfg: VerifyConfig) -> list[CheckResult]:
    pair = cfg.pair
    rng = random.Random(cfg.seed)
    nc = is_never_connect(pair)
    results: list[CheckResult] = []
    add = results.append

    def factor_roundtrip() -> str | None:
        for q in (pair.r, pair.rho, Fraction(12), Fraction(1, 2), Fraction(360, 77)):
            if factor_signature(q).value() != q:
                return f"round trip failed for {q}"
        return None

    add(_check("exactnum.factor_roundtrip", factor_roundtrip))

    def dependence_consistent() -> str | None:
        if pair.r == 1 or pair.rho == 1:
            return None
        dep = multiplicative_dependence(pair)
        if dep is not None and compare_power_product(pair, dep.k, -dep.l, 1) is not Ordering.EQUAL:
            return f"r^{dep.k} rho^{-dep.l} != 1"
        if nc:
            for k in range(-12, 13):
                for l in range(-12, 13):  # noqa: E741
                    if (k, l) != (0, 0) and compare_power_product(pair, k, l, 1) is Ordering.EQUAL:
                        return f"r^{k} rho^{l} == 1 for a never-connect pair"
        return None

    add(_check("exactnum.dependence_consistent", dependence_consistent))

    if pair.r != 1 and pair.rho != 1:
        lo, hi = Fraction(1, 10), Fraction(1)

        def gap_monotone() -> str | None:
            gaps = []
            for n in (cfg.bound // 4, cfg.bound // 2, cfg.bound):
                w = enumerate_orbit(pair, {OrbitClass.B1}, n, (lo, hi))
                if not w.entries:
                    return None
                gaps.append(max_gap(w))
            if any(b > a for a, b in zip(gaps, gaps[1:])):
                return f"gaps not monotone: {[float(g) for g in gaps]}"
            return None

        add(_check("orbits.gap_monotone", gap_monotone))

    if nc:

        def distinct_values() -> str | None:
            w = enumerate_orbit(pair, set(OrbitClass), cfg.bound // 2, (Fraction(0), Fraction(10**6)))
            vals = w.values
            if any(a >= b for a, b in zip(vals, vals[1:])):
                return "repeated orbit value"
            return None

        def greedy_bounds() -> str | None:
            lo_b = pair.r / pair.rho
            for z in greedy_orbit(pair, 2000):
                if not lo_b <= z <= 1:
                    return f"z={z} outside [r/rho, 1]"
            return None

        def sandwich() -> str | None:
            for _ in range(20):
                x = Fraction(rng.randint(1, 999), 1000)
                for n in (1, 5, 10):
                    k, l = find_exponents(pair, x, Fraction(1, n + 1))  # noqa: E741
                    v = x * pair.power_product(k, l)
                    if not (1 - Fraction(1, n + 1) < v < 1) or k < 0 or l < 0:
                        return f"bad exponents ({k},{l}) for x={x}, n={n}"
            return None

        def nowhere_stabilizes() -> str | None:
            for x in (Fraction(1, 100), Fraction(1, 2), Fraction(1)):
                a = len(enumerate_orbit(pair, {OrbitClass.B3}, 64, (x, Fraction(10**6))).entries)
                b = len(enumerate_orbit(pair, {OrbitClass.B3}, 128, (x, Fraction(10**6))).entries)
                if a != b:
                    return f"B3 count above {x} changed: {a} -> {b}"
            return None

        def sup_itinerary() -> str | None:
            for _ in range(20):
                x = Fraction(rng.randint(1, 999), 1000)
                it = build_sup_itinerary(pair, x, cfg.epsilon)
                vals = [x * p for p in prefix_products(it)]
                if any(not 0 <= v <= 1 for v in vals) or max(vals) < 1 - cfg.epsilon:
                    return f"postcondition failed for x={x}"
            return None

        add(_check("orbits.distinct_values", distinct_values))
        add(_check("orbits.greedy_bounds", greedy_bounds))
        add(_check("orbits.find_exponents_sandwich", sandwich))
        add(_check("orbits.nowhere_dense_stabilizes", nowhere_stabilizes))
        add(_check("itinerary.sup_construction", sup_itinerary))

    def endpoint_vectors() -> str | None:
        for word in _random_words(rng, 50, 12):
            it = Itinerary(pair, word)
            ev = endpoint_vector(it)
            b = ev.coords
            if any(b[i + 1] != a * b[i] for i, a in enumerate(it.factors())):
                return f"recurrence broken for {word}"
            if any(not 0 <= c <= 1 for c in b) or max(b) != 1:
                return f"coordinates out of range or max != 1 for {word}"
            if word and branch_param(Itinerary(pair, word[:-1])) < branch_param(it):
                return f"extending {word[:-1]!r} increased the branch parameter"
        return None

    add(_check("itinerary.endpoint_vectors", endpoint_vectors))

    bs = finite_mahavier(pair, cfg.depth)
    pts = sample_points(bs)

    def membership() -> str | None:
        bad = [p for p in pts if not in_relation_product(pair, p) or not bs.contains(p)]
        return f"{len(bad)} sampled points off the relation" if bad else None

    def smooth() -> str | None:
        for b in bs.branches:
            mid = b.point(b.param_max / 2)
            if tuple(2 * c for c in mid) != b.endpoint:
                return f"branch {b.word} is not a straight segment"
        return None

    def origin_only() -> str | None:
        return None if branches_meet_only_at_origin(bs) else "two branches overlap beyond the origin"

    def shift_into_onto() -> str | None:
        if cfg.depth < 2:
            return None
        lower = finite_mahavier(pair, cfg.depth - 1)
        image = shift(bs)
        for p in pts + list(endpoints(bs).points):
            if not lower.contains(p[1:]):
                return "shift leaves the lower-depth set"
        if max(pair.r, pair.rho) >= 1:
            for b, c in zip(lower.branches, image.branches):
                if b.word != c.word or b.param_max != c.param_max:
                    return f"shift misses part of branch {b.word}"
        return None

    def convergence() -> str | None:
        upper = finite_mahavier(pair, min(cfg.depth, 7))
        m = upper.depth - 1
        cloud = PointCloud(tuple(sample_points(upper, 4)))
        trunc = PointCloud(tuple(dict.fromkeys(p[:-1] for p in cloud.points)))
        h = hausdorff(lift(trunc, pair), cloud)
        if h > Fraction(1, 2 ** (m + 1)):
            return f"H = {h} exceeds 2^-{m + 1}"
        return None

    add(_check("mahavier.membership", membership))
    add(_check("mahavier.straight_branches", smooth))
    add(_check("mahavier.meet_only_at_origin", origin_only))
    add(_check("mahavier.shift_into_onto", shift_into_onto))
    add(_check("mahavier.depth_convergence", convergence))

    def swap_invariance() -> str | None:
        if classify(pair).kind is not classify(pair.swapped()).kind:
            return "classification depends on slope order"
        return None

    def witness_coherence() -> str | None:
        rep = classify(pair)
        n_end = len(set(endpoints(bs).points))
        if rep.kind is FanKind.CANTOR_FAN and n_end != 2**cfg.depth:
            return f"{n_end} endpoints, expected {2**cfg.depth}"
        if rep.kind is FanKind.ARC and n_end != 1:
            return f"{n_end} endpoints for an arc"
        if rep.kind is FanKind.SINGLE_POINT:
            top = max(b.param_max for b in bs.branches)
            if top != min(pair.r, pair.rho) ** -cfg.depth:
                return f"max branch parameter {top} != min(r, rho)^-{cfg.depth}"
        if rep.kind is FanKind.DEPENDENT_OPEN_CASE and rep.witnesses is not None:
            return "dependent case carries fan witnesses"
        return None

    add(_check("classify.swap_invariance", swap_invariance))
    add(_check("classify.witness_coherence", witness_coherence))

    if classify(pair).kind is FanKind.LELEK_FAN and cfg.depth >= 3:

        def audit() -> str | None:
            n = cfg.depth - 2
            rec = lelek_density_audit(pair, cfg.depth, cfg.samples, n, cfg.epsilon, cfg.seed)
            if not rec.passed:
                return f"max distance {rec.max_distance} exceeds {rec.bound}"
            return None

        add(_check("classify.lelek_density_audit", audit))

    return results
