"""Exact decision procedure for the kind of fan ``(r, rho)`` produces.

After normalizing to ``r <= rho`` the cases are::

    r == rho <= 1          Arc
    r == rho > 1           SinglePoint
    1 < r < rho            SinglePoint
    r < rho <= 1           CantorFan
    r == 1 < rho           CountableSmoothFan
    r < 1 < rho, indep.    LelekFan
    r < 1 < rho, dep.      DependentOpenCase  (homeomorphism type unknown)
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput
from .exactnum import ExponentPair, SlopePair, format_rational, is_never_connect, multiplicative_dependence
from .mahavier import (
    DEFAULT_EPSILON,
    BranchSet,
    PointCloud,
    branch_diameter,
    branches_meet_only_at_origin,
    cube_metric,
    endpoint_certificate,
    endpoints,
    finite_mahavier,
    format_point,
)
from .orbits import DEFAULT_MAX_K

REFERENCE_DEPTH = 4
SAMPLE_ENDPOINTS = 4


class FanKind(str, enum.Enum):
    SINGLE_POINT = "SinglePoint"
    ARC = "Arc"
    CANTOR_FAN = "CantorFan"
    COUNTABLE_SMOOTH_FAN = "CountableSmoothFan"
    LELEK_FAN = "LelekFan"
    DEPENDENT_OPEN_CASE = "DependentOpenCase"


CASE_LABELS = {
    "equal-contracting": "r = rho <= 1: arc from the origin to (1, r, r^2, ...)",
    "equal-expanding": "r = rho > 1: only the origin survives",
    "both-expanding": "r != rho, both > 1: only the origin survives",
    "both-contracting": "r != rho, both <= 1: straight segments to a Cantor set of endpoints",
    "unit-and-expanding": (
        "r = 1 < rho: countable union of arcs; words with n rho-steps have "
        "diameter <= D_n = max_j 1/(2^j rho^(n-j))"
    ),
    "never-connect": "r < 1 < rho, r^k = rho^l only for k = l = 0: Lelek fan",
    "dependent": (
        "r < 1 < rho with a nontrivial relation r^k = rho^l: open problem, "
        "whether such continua are homeomorphic to each other is unknown"
    ),
}


@dataclass(frozen=True)
class Witnesses:
    top: str | None
    reference_depth: int
    branch_count: int
    max_branch_param: Fraction
    sample_endpoints: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ClassificationReport:
    kind: FanKind
    normalized_pair: SlopePair
    dependence: ExponentPair | None
    citations: tuple[str, ...]
    witnesses: Witnesses | None

    def to_dict(self) -> dict:
        w = self.witnesses
        return {
            "kind": self.kind.value,
            "normalized_pair": self.normalized_pair.as_dict(),
            "dependence": None if self.dependence is None else {"k": self.dependence.k, "l": self.dependence.l},
            "citations": list(self.citations),
            "witnesses": None
            if w is None
            else {
                "top": w.top,
                "reference_depth": w.reference_depth,
                "branch_count": w.branch_count,
                "max_branch_param": format_rational(w.max_branch_param),
                "sample_endpoints": [[format_rational(c) for c in p] for p in w.sample_endpoints],
            },
        }


def _decide(pair: SlopePair) -> tuple[FanKind, str]:
    r, rho = pair.r, pair.rho
    if r == rho:
        return (FanKind.ARC, "equal-contracting") if r <= 1 else (FanKind.SINGLE_POINT, "equal-expanding")
    if r > 1:
        return FanKind.SINGLE_POINT, "both-expanding"
    if rho <= 1:
        return FanKind.CANTOR_FAN, "both-contracting"
    if r == 1:
        return FanKind.COUNTABLE_SMOOTH_FAN, "unit-and-expanding"
    if is_never_connect(pair):
        return FanKind.LELEK_FAN, "never-connect"
    return FanKind.DEPENDENT_OPEN_CASE, "dependent"


_TOPS = {
    FanKind.SINGLE_POINT: None,
    FanKind.ARC: None,
    FanKind.CANTOR_FAN: "origin",
    FanKind.COUNTABLE_SMOOTH_FAN: "origin",
    FanKind.LELEK_FAN: "origin",
}


def classify(pair: SlopePair) -> ClassificationReport:
    norm = pair.normalized()
    kind, case = _decide(norm)
    dependence = None
    if norm.r != 1 and norm.rho != 1:
        dependence = multiplicative_dependence(norm)
    witnesses = None
    if kind is not FanKind.DEPENDENT_OPEN_CASE:
        bs = finite_mahavier(norm, REFERENCE_DEPTH)
        witnesses = Witnesses(
            top=_TOPS[kind],
            reference_depth=REFERENCE_DEPTH,
            branch_count=len(bs.branches),
            max_branch_param=max(b.param_max for b in bs.branches),
            sample_endpoints=tuple(b.endpoint for b in bs.branches[:SAMPLE_ENDPOINTS]),
        )
    return ClassificationReport(kind, norm, dependence, (CASE_LABELS[case],), witnesses)


def d_bound(rho: Fraction, n: int) -> Fraction:
    """``D_n = max(1/rho**n, 1/(2 rho**(n-1)), ..., 1/2**n)``."""
    return max(Fraction(1, 2**j) / rho ** (n - j) for j in range(n + 1))


@dataclass(frozen=True)
class DiameterRow:
    rho_steps: int
    branches: int
    max_diameter: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.max_diameter <= self.bound


@dataclass(frozen=True)
class StructureReport:
    classification: ClassificationReport
    depth: int
    branch_count: int
    meets_only_at_origin: bool
    ramification_point: str | None
    endpoint_cloud: PointCloud
    diameter_table: tuple[DiameterRow, ...] = ()

    def to_dict(self) -> dict:
        return {
            "classification": self.classification.to_dict(),
            "depth": self.depth,
            "branch_count": self.branch_count,
            "meets_only_at_origin": self.meets_only_at_origin,
            "ramification_point": self.ramification_point,
            "endpoints": [[format_rational(c) for c in p] for p in self.endpoint_cloud.points],
            "diameter_table": [
                {
                    "rho_steps": row.rho_steps,
                    "branches": row.branches,
                    "max_diameter": format_rational(row.max_diameter),
                    "bound": format_rational(row.bound),
                    "ok": row.ok,
                }
                for row in self.diameter_table
            ],
        }


def diameter_table(bs: BranchSet) -> tuple[DiameterRow, ...]:
    by_n: dict[int, list[Fraction]] = {}
    for b in bs.branches:
        by_n.setdefault(b.word.count("P"), []).append(branch_diameter(b))
    return tuple(
        DiameterRow(n, len(ds), max(ds), d_bound(bs.pair.rho, n)) for n, ds in sorted(by_n.items())
    )


def structure_report(pair: SlopePair, depth: int) -> StructureReport:
    """Finite-depth structural witnesses for :func:`classify`'s verdict.

    The ramification point is reported as the origin only when at least three
    distinct branches exist and every two of them meet only there.
    """
    report = classify(pair)
    bs = finite_mahavier(report.normalized_pair, depth)
    only_origin = branches_meet_only_at_origin(bs)
    top = None
    if report.kind is not FanKind.DEPENDENT_OPEN_CASE and len(bs.branches) >= 3 and only_origin:
        top = format_point(bs.origin)
    table: tuple[DiameterRow, ...] = ()
    if report.kind is FanKind.COUNTABLE_SMOOTH_FAN:
        table = diameter_table(bs)
    return StructureReport(report, depth, len(bs.branches), only_origin, top, endpoints(bs), table)


@dataclass(frozen=True)
class AuditRow:
    word: str
    param: Fraction
    distance: Fraction
    certificate_word_length: int


@dataclass(frozen=True)
class AuditRecord:
    pair: SlopePair
    depth: int
    agreement_depth: int
    epsilon: Fraction
    bound: Fraction
    rows: tuple[AuditRow, ...]
    skipped: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(row.distance <= self.bound for row in self.rows)

    @property
    def max_distance(self) -> Fraction:
        return max((row.distance for row in self.rows), default=Fraction(0))

    def to_dict(self) -> dict:
        return {
            "pair": self.pair.as_dict(),
            "depth": self.depth,
            "agreement_depth": self.agreement_depth,
            "epsilon": format_rational(self.epsilon),
            "bound": format_rational(self.bound),
            "passed": self.passed,
            "max_distance": format_rational(self.max_distance),
            "samples": [
                {
                    "word": row.word,
                    "t": format_rational(row.param),
                    "distance": format_rational(row.distance),
                    "certificate_word_length": row.certificate_word_length,
                }
                for row in self.rows
            ],
            "skipped": list(self.skipped),
        }


PARAM_GRID = 1000


def lelek_density_audit(
    pair: SlopePair,
    depth: int,
    samples: int,
    n: int,
    epsilon: Fraction = DEFAULT_EPSILON,
    seed: int = 0,
    budget: int = DEFAULT_MAX_K,
) -> AuditRecord:
    """Certify, on random points of the depth-``depth`` product, that an
    approximate endpoint lies within ``2**-n``.

    Sample parameters are ``t = T * j / 1000`` with ``j`` uniform in
    ``0..1000``; ``j == 0`` is the origin, which has no certificate and is
    skipped.
    """
    report = classify(pair)
    if report.kind is not FanKind.LELEK_FAN:
        raise InvalidInput(f"density audit needs a Lelek-fan pair, {pair} is {report.kind.value}")
    if not 0 <= n <= depth:
        raise InvalidInput(f"agreement depth must satisfy 0 <= n <= depth, got n={n}")
    norm = report.normalized_pair
    bs = finite_mahavier(norm, depth)
    rng = random.Random(seed)
    bound = Fraction(1, 2**n)
    rows, skipped = [], []
    for i in range(samples):
        b = bs.branches[rng.randrange(len(bs.branches))]
        j = rng.randint(0, PARAM_GRID)
        if j == 0:
            skipped.append(f"sample {i}: origin has no endpoint certificate")
            continue
        t = b.param_max * Fraction(j, PARAM_GRID)
        p = b.point(t)
        cert, word = endpoint_certificate(bs, p, n, epsilon, budget)
        rows.append(AuditRow(b.word, t, cube_metric(p, cert), len(word)))
    return AuditRecord(norm, depth, n, epsilon, bound, tuple(rows), tuple(skipped))
