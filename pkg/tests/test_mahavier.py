import json
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lelekfan.classify import d_bound
from lelekfan.errors import BudgetExceeded, InvalidInput
from lelekfan.exactnum import SlopePair
from lelekfan.formats import branch_set_dict, point_cloud_csv, segments_csv, segments_svg
from lelekfan.mahavier import (
    PointCloud,
    SegmentRelation,
    branch_diameter,
    branch_intersection,
    branches_meet_only_at_origin,
    cube_metric,
    endpoint_certificate,
    endpoints,
    finite_mahavier,
    hausdorff,
    hausdorff_bruteforce,
    in_relation_product,
    inverse_relation,
    lift,
    project,
    project_labeled,
    relation_union,
    sample_points,
    shift,
)

F = Fraction
HALF_THREE = SlopePair.parse("1/2", "3")
CANTOR = SlopePair.parse("1/2", "1/3")
ORIGIN2 = (F(0), F(0))


def test_relation_union_examples():
    assert relation_union(HALF_THREE).segments == ((ORIGIN2, (1, F(1, 2))), (ORIGIN2, (F(1, 3), 1)))
    assert relation_union(SlopePair.parse("1", "1")).segments == ((ORIGIN2, (1, 1)),)
    assert relation_union(CANTOR).segments == ((ORIGIN2, (1, F(1, 2))), (ORIGIN2, (1, F(1, 3))))


def test_inverse_relation():
    diag = relation_union(SlopePair.parse("1", "1"))
    assert inverse_relation(diag) == diag
    rel = SegmentRelation(((ORIGIN2, (F(1), F(1, 2))),))
    assert inverse_relation(rel).segments == ((ORIGIN2, (F(1, 2), F(1))),)
    for pair in (HALF_THREE, CANTOR):
        r = relation_union(pair)
        assert inverse_relation(inverse_relation(r)) == r


def test_segment_relation_rejects_outside_square():
    with pytest.raises(InvalidInput):
        SegmentRelation(((ORIGIN2, (F(2), F(1))),))


def test_finite_mahavier_examples():
    arc = finite_mahavier(SlopePair.parse("1/2", "1/2"), 1)
    assert len(arc.branches) == 1
    assert arc.branches[0].endpoint == (1, F(1, 2))

    d1 = finite_mahavier(HALF_THREE, 1)
    assert [(b.word, b.param_max, b.endpoint) for b in d1.branches] == [
        ("R", 1, (1, F(1, 2))),
        ("P", F(1, 3), (F(1, 3), 1)),
    ]

    pp = finite_mahavier(HALF_THREE, 2).branch("PP")
    assert pp.param_max == F(1, 9)
    assert pp.endpoint == (F(1, 9), F(1, 3), 1)


def test_finite_mahavier_limits():
    with pytest.raises(InvalidInput):
        finite_mahavier(HALF_THREE, 0)
    with pytest.raises(BudgetExceeded):
        finite_mahavier(HALF_THREE, 21)
    with pytest.raises(BudgetExceeded):
        finite_mahavier(HALF_THREE, 5, cap=4)


def test_branches_in_lexicographic_order():
    bs = finite_mahavier(HALF_THREE, 3)
    assert [b.word for b in bs.branches] == ["".join(w) for w in product("RP", repeat=3)]


def brute_member(pair, p):
    """Oracle: try every word and solve for the parameter."""
    m = len(p) - 1
    if any(c < 0 or c > 1 for c in p):
        return False
    for word in product("RP", repeat=m):
        direction = [F(1)]
        for s in word:
            direction.append(direction[-1] * pair.slope(s))
        t = p[0]
        if all(t * d == c for d, c in zip(direction, p)) and all(t * d <= 1 for d in direction):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([HALF_THREE, CANTOR, SlopePair.parse("2/3", "5/2")]),
    st.integers(1, 5),
    st.integers(0, 10**6),
    st.integers(0, 16),
    st.booleans(),
)
def test_membership_contract(pair, depth, seed, j, perturb):
    bs = finite_mahavier(pair, depth)
    rng = random.Random(seed)
    b = bs.branches[rng.randrange(len(bs.branches))]
    p = list(b.point(b.param_max * F(j, 16)))
    if perturb:
        i = rng.randrange(len(p))
        p[i] = min(F(1), p[i] + F(1, 97))
    p = tuple(p)
    assert bs.contains(p) == in_relation_product(pair, p) == brute_member(pair, p)
    if not perturb:
        assert bs.contains(p)


def test_cube_metric_examples():
    p = (F(1, 3), F(1, 5))
    assert cube_metric(p, p) == 0
    assert cube_metric((F(1), F(0)), (F(0), F(0))) == 1
    assert cube_metric((F(0), F(1)), (F(0), F(0))) == F(1, 2)
    with pytest.raises(InvalidInput):
        cube_metric((F(0),), (F(0), F(0)))


def test_hausdorff_examples():
    a = PointCloud(((F(0),), (F(1),)))
    assert hausdorff(a, a) == 0
    assert hausdorff(PointCloud(((F(0),),)), PointCloud(((F(1),),))) == 1
    assert hausdorff(a, PointCloud(((F(1, 2),),))) == F(1, 2)
    with pytest.raises(InvalidInput):
        hausdorff(PointCloud(()), a)
    with pytest.raises(InvalidInput):
        hausdorff(a, PointCloud(((F(0), F(0)),)))


coords = st.fractions(min_value=0, max_value=1, max_denominator=12)


def clouds(dim):
    return st.lists(st.tuples(*[coords] * dim), min_size=1, max_size=12).map(lambda ps: PointCloud(tuple(ps)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(clouds(d), clouds(d), clouds(d))))
def test_hausdorff_axioms_and_oracle(abc):
    a, b, c = abc
    hab = hausdorff(a, b)
    assert hab == hausdorff_bruteforce(a, b)
    assert hab == hausdorff(b, a)
    assert hausdorff(a, a) == 0
    assert hab <= hausdorff(a, c) + hausdorff(c, b)
    if hab == 0:
        assert set(a.points) == set(b.points)


def test_hausdorff_matches_oracle_on_fan_clouds():
    up = finite_mahavier(HALF_THREE, 4)
    cloud = PointCloud(tuple(sample_points(up, 3)))
    trunc = PointCloud(tuple(dict.fromkeys(p[:-1] for p in cloud.points)))
    lifted = lift(trunc, HALF_THREE)
    assert hausdorff(lifted, cloud) == hausdorff_bruteforce(lifted, cloud)


def test_lift_uses_admissible_continuations_only():
    cloud = PointCloud(((F(1, 2), F(1, 2)),))
    lifted = lift(cloud, HALF_THREE)
    assert set(lifted.points) == {(F(1, 2), F(1, 2), F(1, 4))}  # 3 * 1/2 > 1
    bs = finite_mahavier(HALF_THREE, 3)
    for p in lift(PointCloud(tuple(sample_points(finite_mahavier(HALF_THREE, 2)))), HALF_THREE).points:
        assert bs.contains(p)


def test_shift_examples():
    d2 = finite_mahavier(HALF_THREE, 2)
    d1 = finite_mahavier(HALF_THREE, 1)
    rp = d2.branch("RP")
    for j in range(9):
        p = rp.point(rp.param_max * F(j, 8))
        q = p[1:]
        assert d1.contains(q)
        if j:
            assert d1.locate(q).word == "P"
    assert d2.origin[1:] == d1.origin


@pytest.mark.parametrize("pair", [HALF_THREE, SlopePair.parse("2/3", "5/2"), SlopePair.parse("1", "3")])
def test_shift_onto_when_a_slope_expands(pair):
    for m in range(2, 6):
        image = shift(finite_mahavier(pair, m))
        lower = finite_mahavier(pair, m - 1)
        assert [(b.word, b.direction, b.param_max) for b in image.branches] == [
            (b.word, b.direction, b.param_max) for b in lower.branches
        ]
        # every lower branch has an explicit preimage branch
        upper = finite_mahavier(pair, m)
        for b in lower.branches:
            assert any(
                upper.branch(s + b.word).endpoint[1:] == b.endpoint for s in "RP"
            )


def test_shift_cantor_case_is_into_not_onto():
    image = shift(finite_mahavier(CANTOR, 3))
    lower = finite_mahavier(CANTOR, 2)
    for b, c in zip(image.branches, lower.branches):
        assert b.word == c.word and b.param_max < c.param_max


def test_shift_requires_depth_two():
    with pytest.raises(InvalidInput):
        shift(finite_mahavier(HALF_THREE, 1))


def test_project_examples():
    d1 = finite_mahavier(HALF_THREE, 1)
    assert project(d1, 1, 2) == list(relation_union(HALF_THREE).segments)
    arc = finite_mahavier(SlopePair.parse("1/2", "1/2"), 4)
    assert len(project(arc, 1, 3)) == 1
    d3 = finite_mahavier(HALF_THREE, 3)
    segs = project(d3, 1, 4)
    assert len(segs) <= 8
    expected = {(ORIGIN2, (b.param_max, b.direction[3] * b.param_max)) for b in d3.branches}
    assert set(segs) == expected
    with pytest.raises(InvalidInput):
        project(d3, 2, 2)
    with pytest.raises(InvalidInput):
        project(d3, 1, 5)


def test_endpoints_examples():
    ends = endpoints(finite_mahavier(CANTOR, 2)).points
    assert len(set(ends)) == 4
    assert set(ends) == {(1, a, a * b) for a in (F(1, 2), F(1, 3)) for b in (F(1, 2), F(1, 3))}
    got = {b.word: b.endpoint for b in finite_mahavier(HALF_THREE, 2).branches}
    assert got == {
        "RR": (1, F(1, 2), F(1, 4)),
        "RP": (F(2, 3), F(1, 3), 1),
        "PR": (F(1, 3), 1, F(1, 2)),
        "PP": (F(1, 9), F(1, 3), 1),
    }
    for m in (1, 3, 6):
        assert len(endpoints(finite_mahavier(SlopePair.parse("3/4", "3/4"), m))) == 1
        assert len(set(endpoints(finite_mahavier(CANTOR, m)).points)) == 2**m


def test_branches_are_straight_and_meet_only_at_origin():
    bs = finite_mahavier(HALF_THREE, 5)
    for b in bs.branches:
        mid = b.point(b.param_max / 2)
        assert tuple(2 * c for c in mid) == b.endpoint
    assert branches_meet_only_at_origin(bs)
    b = bs.branches[3]
    assert branch_intersection(b, b) == b.endpoint


def test_certificate_examples():
    bs = finite_mahavier(HALF_THREE, 2)
    p = bs.branch("RR").point(F(1, 2))
    assert p == (F(1, 2), F(1, 4), F(1, 8))
    cert, word = endpoint_certificate(bs, p, 1)
    assert cert[0] == p[0]
    assert bs.contains(cert)
    assert cube_metric(p, cert) <= F(1, 2)
    vals = [p[0]]
    for s in word.word:
        vals.append(vals[-1] * HALF_THREE.slope(s))
    assert max(vals) >= F(99, 100) and all(v <= 1 for v in vals)

    cert, _ = endpoint_certificate(bs, p, 3)
    assert cert == p


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 1000), st.integers(0, 6))
def test_certificate_distance_bound(seed, j, n):
    bs = finite_mahavier(SlopePair.parse("2/3", "5/2"), 6)
    b = bs.branches[random.Random(seed).randrange(len(bs.branches))]
    p = b.point(b.param_max * F(j, 1000))
    cert, _ = endpoint_certificate(bs, p, n)
    assert cert[:n] == p[:n]
    assert bs.contains(cert)
    assert cube_metric(p, cert) <= F(1, 2**n)


def test_certificate_errors():
    bs = finite_mahavier(HALF_THREE, 3)
    with pytest.raises(InvalidInput):
        endpoint_certificate(bs, bs.origin, 2)
    with pytest.raises(InvalidInput):
        endpoint_certificate(bs, (F(1, 2), F(1, 2), F(1, 2), F(1, 2)), 2)
    cbs = finite_mahavier(CANTOR, 3)
    with pytest.raises(InvalidInput):
        endpoint_certificate(cbs, cbs.branches[0].endpoint, 1)


def test_branch_diameter_examples():
    arc = finite_mahavier(SlopePair.parse("1/2", "1/2"), 2)
    assert branch_diameter(arc.branches[0]) == 1


def test_case_unit_slope_diameters_and_equality():
    pair = SlopePair.parse("1", "3")
    bs = finite_mahavier(pair, 8)
    worst: dict[int, Fraction] = {}
    for b in bs.branches:
        n = b.word.count("P")
        diam = branch_diameter(b)
        assert diam <= d_bound(pair.rho, n)
        worst[n] = max(worst.get(n, F(0)), diam)
    for n in range(0, 9):
        assert worst[n] == d_bound(pair.rho, n)  # attained by P^n R^(m-n)
        assert branch_diameter(bs.branch("P" * n + "R" * (8 - n))) == d_bound(pair.rho, n)


def test_depth_convergence():
    for m in range(2, 6):
        up = finite_mahavier(HALF_THREE, m + 1)
        cloud = PointCloud(tuple(sample_points(up, 4)))
        trunc = PointCloud(tuple(dict.fromkeys(p[:-1] for p in cloud.points)))
        assert all(finite_mahavier(HALF_THREE, m).contains(p) for p in trunc.points)
        assert hausdorff(lift(trunc, HALF_THREE), cloud) <= F(1, 2 ** (m + 1))


def test_serializations():
    bs = finite_mahavier(HALF_THREE, 2)
    doc = branch_set_dict(bs)
    assert doc["pair"] == {"r": "1/2", "rho": "3"}
    assert doc["branches"][1] == {"word": "RP", "param_max": "2/3", "endpoint": ["2/3", "1/3", "1"]}
    json.dumps(doc)
    text = point_cloud_csv(endpoints(bs))
    assert text.splitlines()[0] == "x1,x2,x3,x1_float,x2_float,x3_float"
    assert text.splitlines()[2].startswith("2/3,1/3,1,")
    labeled = project_labeled(bs, 1, 2)
    svg = segments_svg(labeled)
    assert svg.count("<polyline") == len(labeled)
    assert 'viewBox="0 0 1 1"' in svg and "<title>RR</title>" in svg
    assert segments_csv(labeled).splitlines()[0].startswith("x0,y0,x1,y1")
