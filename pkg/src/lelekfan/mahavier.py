"""Finite Mahavier products of the two-segment relation ``L_r ∪ L_rho``.

The depth-``m`` product is the set of points ``(x_1, ..., x_{m+1})`` in
``[0, 1]**(m+1)`` with ``x_{i+1} in {r x_i, rho x_i}`` for every ``i``.  It is
the union of ``2**m`` straight segments from the origin, one per word in
``{R, P}**m``; :func:`finite_mahavier` builds them in lexicographic word
order (``R < P``).

Points are plain tuples of :class:`~fractions.Fraction`.  Distances use the
weighted max metric ``max_i 2**-(i-1) |p_i - q_i|`` on the truncated Hilbert
cube.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, InvalidInput
from .exactnum import SlopePair, format_rational, is_never_connect
from .itinerary import Itinerary, build_sup_itinerary
from .orbits import DEFAULT_MAX_K

CubePoint = tuple[Fraction, ...]
Point2 = tuple[Fraction, Fraction]
Segment = tuple[Point2, Point2]

DEFAULT_DEPTH_CAP = 20
DEFAULT_SAMPLES_PER_BRANCH = 8
DEFAULT_EPSILON = Fraction(1, 100)

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- relations ---------------------------------------------------------------


@dataclass(frozen=True)
class SegmentRelation:
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        for seg in self.segments:
            for x, y in seg:
                if not (0 <= x <= 1 and 0 <= y <= 1):
                    raise InvalidInput(f"segment {seg} leaves the unit square")


def _clipped_end(s: Fraction) -> Point2:
    return (_ONE, s) if s <= 1 else (1 / s, _ONE)


def relation_union(pair: SlopePair) -> SegmentRelation:
    """The two origin segments of slopes ``r`` and ``rho``, clipped to the square."""
    slopes = [pair.r] if pair.r == pair.rho else [pair.r, pair.rho]
    origin = (_ZERO, _ZERO)
    return SegmentRelation(tuple((origin, _clipped_end(s)) for s in slopes))


def inverse_relation(rel: SegmentRelation) -> SegmentRelation:
    return SegmentRelation(tuple(((a[1], a[0]), (b[1], b[0])) for a, b in rel.segments))


# -- branch sets -------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """Segment ``{t * direction : 0 <= t <= param_max}``; ``direction[0] == 1``."""

    word: str
    direction: CubePoint
    param_max: Fraction

    @property
    def depth(self) -> int:
        return len(self.direction) - 1

    @property
    def endpoint(self) -> CubePoint:
        return self.point(self.param_max)

    def point(self, t: Fraction) -> CubePoint:
        if not 0 <= t <= self.param_max:
            raise InvalidInput(f"parameter {t} outside [0, {self.param_max}]")
        return tuple(t * d for d in self.direction)


@dataclass(frozen=True)
class BranchSet:
    pair: SlopePair
    depth: int
    branches: tuple[Branch, ...]
    _by_word: dict[str, Branch] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_word", {b.word: b for b in self.branches})

    def branch(self, word: str) -> Branch:
        return self._by_word[word]

    @property
    def origin(self) -> CubePoint:
        return (_ZERO,) * (self.depth + 1)

    def word_of(self, p: Sequence[Fraction]) -> str | None:
        """Itinerary word read off a nonzero point, or None if no slope fits."""
        word = []
        for a, b in zip(p, p[1:]):
            if b == self.pair.r * a:
                word.append("R")
            elif b == self.pair.rho * a:
                word.append("P")
            else:
                return None
        return "".join(word)

    def locate(self, p: Sequence[Fraction]) -> Branch | None:
        """The branch carrying ``p`` (first in word order for the origin)."""
        if len(p) != self.depth + 1:
            raise InvalidInput(f"point of dimension {len(p)} vs depth {self.depth}")
        if any(c < 0 or c > 1 for c in p):
            return None
        if p[0] == 0:
            return self.branches[0] if all(c == 0 for c in p) else None
        word = self.word_of(p)
        if word is None:
            return None
        if self.pair.r == self.pair.rho:
            word = self.branches[0].word
        b = self._by_word.get(word)
        if b is None or p[0] > b.param_max:
            return None
        return b

    def contains(self, p: Sequence[Fraction]) -> bool:
        return self.locate(p) is not None


def in_relation_product(pair: SlopePair, p: Sequence[Fraction]) -> bool:
    """Membership contract: coordinates in ``[0, 1]``, each step multiplies by r or rho."""
    if any(c < 0 or c > 1 for c in p):
        return False
    return all(b == pair.r * a or b == pair.rho * a for a, b in zip(p, p[1:]))


def finite_mahavier(
    pair: SlopePair, depth: int, cap: int = DEFAULT_DEPTH_CAP
) -> BranchSet:
    if depth < 1:
        raise InvalidInput(f"depth must be >= 1, got {depth}")
    if depth > cap:
        raise BudgetExceeded(f"depth {depth} exceeds the cap {cap} (2**depth branches)")
    symbols = "R" if pair.r == pair.rho else "RP"
    # (word, prefix products, running max)
    level: list[tuple[str, tuple[Fraction, ...], Fraction]] = [("", (_ONE,), _ONE)]
    for _ in range(depth):
        nxt = []
        for word, prods, mx in level:
            for s in symbols:
                p = prods[-1] * pair.slope(s)
                nxt.append((word + s, prods + (p,), p if p > mx else mx))
        level = nxt
    branches = tuple(Branch(w, prods, 1 / mx) for w, prods, mx in level)
    return BranchSet(pair, depth, branches)


def sample_points(bs: BranchSet, per_branch: int = DEFAULT_SAMPLES_PER_BRANCH) -> list[CubePoint]:
    """Origin, then ``t = T * j / per_branch`` for ``j = 1..per_branch`` on every branch."""
    if per_branch < 1:
        raise InvalidInput("per_branch must be >= 1")
    pts = [bs.origin]
    for b in bs.branches:
        for j in range(1, per_branch + 1):
            pts.append(b.point(b.param_max * j / per_branch))
    return pts


def endpoints(bs: BranchSet) -> "PointCloud":
    return PointCloud(tuple(b.endpoint for b in bs.branches))


def shift(bs: BranchSet) -> BranchSet:
    """Drop the first coordinate.

    The image of branch ``a + w`` is the first ``a * T_{aw}`` of branch ``w``;
    the two preimages of ``w`` are merged by taking the larger parameter.
    """
    if bs.depth < 2:
        raise InvalidInput("shift needs depth >= 2")
    merged: dict[str, tuple[CubePoint, Fraction]] = {}
    for b in bs.branches:
        a = b.direction[1]
        tail = b.word[1:]
        direction = tuple(d / a for d in b.direction[1:])
        param = a * b.param_max
        prev = merged.get(tail)
        if prev is None or param > prev[1]:
            merged[tail] = (direction, param)
    branches = tuple(Branch(w, d, t) for w, (d, t) in sorted(merged.items(), key=_word_key))
    return BranchSet(bs.pair, bs.depth - 1, branches)


def _word_key(item: tuple[str, object]) -> str:
    # lexicographic with R < P
    return item[0].replace("R", "0").replace("P", "1")


def project_labeled(bs: BranchSet, i: int, j: int) -> list[tuple[Segment, tuple[str, ...]]]:
    """Like :func:`project`, keeping the words of the branches behind each segment."""
    if not 1 <= i < j <= bs.depth + 1:
        raise InvalidInput(f"need 1 <= i < j <= {bs.depth + 1}, got i={i}, j={j}")
    origin = (_ZERO, _ZERO)
    seen: dict[Segment, list[str]] = {}
    for b in bs.branches:
        e = b.endpoint
        seen.setdefault((origin, (e[i - 1], e[j - 1])), []).append(b.word)
    return [(seg, tuple(words)) for seg, words in seen.items()]


def project(bs: BranchSet, i: int, j: int) -> list[Segment]:
    """Planar segments ``(0,0) -> (e_i, e_j)`` over all branch endpoints ``e`` (1-indexed)."""
    return [seg for seg, _ in project_labeled(bs, i, j)]


def branch_intersection(b1: Branch, b2: Branch) -> CubePoint:
    """Far end of ``b1 ∩ b2``; the origin when the segments only share their root."""
    d1, d2 = b1.direction, b2.direction
    if len(d1) != len(d2):
        raise InvalidInput("branches of different depth")
    # both start at the origin; they overlap beyond it iff d2 = lam * d1, lam > 0
    lam = d2[0] / d1[0]
    if lam > 0 and all(lam * x == y for x, y in zip(d1, d2)):
        t = min(b1.param_max, b2.param_max / lam)
        return b1.point(t)
    return tuple(_ZERO for _ in d1)


def branches_meet_only_at_origin(bs: BranchSet) -> bool:
    origin = bs.origin
    bl = bs.branches
    for i in range(len(bl)):
        for j in range(i + 1, len(bl)):
            if branch_intersection(bl[i], bl[j]) != origin:
                return False
    return True


def branch_diameter(b: Branch) -> Fraction:
    """Distance from the origin to the branch endpoint under :func:`cube_metric`."""
    return max(c / 2**i for i, c in enumerate(b.endpoint))


# -- metric and Hausdorff distance --------------------------------------------


@dataclass(frozen=True)
class PointCloud:
    points: tuple[CubePoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(tuple(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if pts and len({len(p) for p in pts}) != 1:
            raise InvalidInput("point cloud mixes dimensions")

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 0

    def __len__(self) -> int:
        return len(self.points)


def cube_metric(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    if len(p) != len(q):
        raise InvalidInput(f"dimension mismatch: {len(p)} vs {len(q)}")
    return max((abs(a - b) / 2**i for i, (a, b) in enumerate(zip(p, q))), default=_ZERO)


def _check_clouds(a: PointCloud, b: PointCloud) -> None:
    if not a.points or not b.points:
        raise InvalidInput("Hausdorff distance needs nonempty clouds")
    if a.dim != b.dim:
        raise InvalidInput(f"dimension mismatch: {a.dim} vs {b.dim}")


def hausdorff_bruteforce(a: PointCloud, b: PointCloud) -> Fraction:
    """Textbook all-pairs evaluation; kept as the reference for :func:`hausdorff`."""
    _check_clouds(a, b)
    ab = max(min(cube_metric(p, q) for q in b.points) for p in a.points)
    ba = max(min(cube_metric(q, p) for p in a.points) for q in b.points)
    return max(ab, ba)


def _scaled(points: Iterable[CubePoint], scale: int) -> list[tuple[int, ...]]:
    return [tuple(c.numerator * (scale // c.denominator) for c in p) for p in points]


def _directed(a: list[tuple[int, ...]], b: list[tuple[int, ...]], w: list[int]) -> int:
    """``max_{p in a} min_{q in b} d(p, q)`` on integer-scaled coordinates.

    ``b`` must be sorted.  Candidates are scanned outward from ``p``'s first
    coordinate; a side stops once its first-coordinate term alone reaches the
    current best, and ``p`` is abandoned as soon as some ``q`` is no farther
    than the running maximum (it cannot raise it).
    """
    firsts = [q[0] for q in b]
    w0 = w[0]
    dims = range(1, len(w))
    cmax = 0
    for p in a:
        p0 = p[0]
        best = None
        hi = bisect_left(firsts, p0)
        lo = hi - 1
        while lo >= 0 or hi < len(b):
            dl = w0 * (p0 - firsts[lo]) if lo >= 0 else None
            dh = w0 * (firsts[hi] - p0) if hi < len(b) else None
            if dh is None or (dl is not None and dl <= dh):
                d0, q = dl, b[lo]
                lo -= 1
            else:
                d0, q = dh, b[hi]
                hi += 1
            if best is not None and d0 >= best:
                break
            d = d0
            for i in dims:
                t = w[i] * abs(p[i] - q[i])
                if t > d:
                    d = t
                    if best is not None and d >= best:
                        break
            if best is None or d < best:
                best = d
                if best <= cmax:
                    break
        if best > cmax:
            cmax = best
    return cmax


def hausdorff(a: PointCloud, b: PointCloud) -> Fraction:
    """Exact Hausdorff distance of two finite clouds under :func:`cube_metric`.

    Coordinates are rescaled to integers over a common denominator so the
    nearest-neighbour scans run on ints; the result is identical to
    :func:`hausdorff_bruteforce`.
    """
    _check_clouds(a, b)
    dim = a.dim
    scale = math.lcm(*{c.denominator for p in (*a.points, *b.points) for c in p})
    w = [2 ** (dim - 1 - i) for i in range(dim)]
    ia = sorted(_scaled(a.points, scale))
    ib = sorted(_scaled(b.points, scale))
    d = max(_directed(ia, ib, w), _directed(ib, ia, w))
    return Fraction(d, scale * 2 ** (dim - 1))


def lift(cloud: PointCloud, pair: SlopePair) -> PointCloud:
    """Append every admissible next coordinate (``r x_last`` or ``rho x_last`` within [0, 1])."""
    slopes = [pair.r] if pair.r == pair.rho else [pair.r, pair.rho]
    out: dict[CubePoint, None] = {}
    for p in cloud.points:
        for a in slopes:
            c = a * p[-1]
            if c <= 1:
                out.setdefault(p + (c,), None)
    return PointCloud(tuple(out))


# -- endpoint certificates ------------------------------------------------------


def endpoint_certificate(
    bs: BranchSet,
    p: Sequence[Fraction],
    n: int,
    epsilon: Fraction = DEFAULT_EPSILON,
    budget: int = DEFAULT_MAX_K,
) -> tuple[CubePoint, Itinerary]:
    """A point agreeing with ``p`` on its first ``n`` coordinates whose tail
    follows a word driving the running value to within ``epsilon`` of 1.

    Such a tail is the finite shadow of an endpoint of the infinite fan, and
    the certificate is within ``2**-n`` of ``p``.  Word symbols past the
    available dimensions are dropped; missing ones are padded with ``R``,
    which keeps every coordinate in range.  For ``n == 0`` the endpoint of
    ``p``'s own branch is returned.
    """
    if not is_never_connect(bs.pair):
        raise InvalidInput(f"{bs.pair} is not a never-connect pair")
    p = tuple(p)
    branch = bs.locate(p)
    if branch is None:
        raise InvalidInput("point does not lie on the branch set")
    if not 0 <= n <= bs.depth + 1:
        raise InvalidInput(f"agreement depth must be in [0, {bs.depth + 1}], got {n}")
    if n == 0:
        return branch.endpoint, Itinerary(bs.pair, branch.word)
    x = p[n - 1]
    if x == 0:
        raise InvalidInput("the agreement coordinate is 0; the origin has no certificate")
    word = Itinerary(bs.pair) if x == 1 else build_sup_itinerary(bs.pair, x, epsilon, budget)
    room = bs.depth + 1 - n
    tail = (word.word + "R" * room)[:room]
    coords = list(p[:n])
    v = x
    for s in tail:
        v *= bs.pair.slope(s)
        coords.append(v)
    return tuple(coords), word


def format_point(p: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(c) for c in p) + ")"
