import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from treekkm import (
    CircularSociety,
    ClosedSet,
    CycleKKMCover,
    MetricCycle,
    NotSuperAgreeableError,
    ReductionNotApplicable,
    TreeError,
    TreePoint,
    majority_point,
    super_agreeable_majority,
    tree_reduction_majority,
    validate_cycle_cover,
)
from treekkm.cycle import depth_profile
from treekkm.oracles import cycle_grid_depth
from treekkm.random_instances import random_cycle, random_cycle_cover

from conftest import V


def square():
    return MetricCycle([1, 1, 1, 1])


def half_arcs(c):
    """D_i is the closed arc from v_{i-1} through v_i to v_{i+1}."""
    return CycleKKMCover(tuple(c.set_from_arcs([((i - 1) % 4, (i + 1) % 4)]) for i in range(4)))


# frozen hexagon cover in which some point lies in only two sets
HEXAGON_ARCS = [
    [(0, 1), (F(9, 2), 6)],
    [(0, F(7, 4)), (F(9, 2), 6)],
    [(0, 4), (F(11, 2), 6)],
    [(F(9, 4), F(9, 2))],
    [(4, F(11, 2))],
    [(F(9, 2), F(11, 2))],
]


def hexagon():
    c = MetricCycle([1] * 6)
    return c, CycleKKMCover(tuple(c.set_from_arcs(a) for a in HEXAGON_ARCS))


def test_cycle_basics():
    c = MetricCycle([1, 2, 3])
    assert c.circumference == 6
    assert c.distance(V(0), V(2)) == 3
    assert c.distance(V(0), c.edge_point(2, 2)) == 1
    assert c.point_at(F(7, 2)) == c.edge_point(2, F(1, 2))
    with pytest.raises(TreeError):
        MetricCycle([1, 1])


def test_arcs_wrap_around():
    c = square()
    s = c.set_from_arcs([(F(7, 2), F(1, 2))])
    assert V(0) in s and c.edge_point(3, F(3, 4)) in s and V(1) not in s
    assert c.arcs(s) == [(0, F(1, 2)), (F(7, 2), 4)]


def test_whole_cycle_cover():
    c = square()
    cover = CycleKKMCover((ClosedSet.full(c),) * 4)
    assert validate_cycle_cover(c, cover)
    mp = majority_point(c, cover)
    assert mp.depth == 4 and mp.point == V(0)


def test_square_half_arcs():
    c = square()
    cover = half_arcs(c)
    assert validate_cycle_cover(c, cover)
    mp = majority_point(c, cover)
    assert mp.depth == 3 == mp.bound
    for v in range(4):
        assert sorted(i for i, s in enumerate(cover.sets) if V(v) in s) == sorted({(v - 1) % 4, v, (v + 1) % 4})


def test_punctured_cover_is_rejected():
    c = square()
    hole = (0, F(1, 4), F(3, 4))
    cover = CycleKKMCover(tuple(s.minus_open(*hole) for s in half_arcs(c).sets))
    res = validate_cycle_cover(c, cover)
    assert not res and res.condition == "path-covering"
    with pytest.warns(UserWarning):
        majority_point(c, cover)


def test_reduction_not_applicable_on_square():
    c = square()
    with pytest.raises(ReductionNotApplicable):
        tree_reduction_majority(c, half_arcs(c))


def test_reduction_on_hexagon():
    c, cover = hexagon()
    assert validate_cycle_cover(c, cover)
    prof = depth_profile(c, cover.sets)
    assert min(d for _, d in prof.candidates()) <= 2
    res = tree_reduction_majority(c, cover)
    assert res.depth >= 4
    assert set(res.members) == {i for i, s in enumerate(cover.sets) if res.point in s}
    assert res.removed not in cover.sets[res.family[0]]


def test_reduction_rejects_invalid_cover():
    c = square()
    bad = CycleKKMCover(tuple(ClosedSet.from_points(c, [V(i)]) for i in range(4)))
    with pytest.raises(ValueError):
        tree_reduction_majority(c, bad)


def test_non_vertex_anchors():
    c = square()
    anchors = tuple(c.point_at(F(2 * i + 1, 2)) for i in range(4))
    sets = tuple(c.set_from_arcs([(F(2 * i - 1, 2) % 4, F(2 * i + 3, 2) % 4)]) for i in range(4))
    cover = CycleKKMCover(sets, anchors)
    assert validate_cycle_cover(c, cover)
    assert majority_point(c, cover).depth >= 3


def test_society_examples():
    c = square()
    everything = CircularSociety(c, (ClosedSet.full(c),) * 3)
    res = super_agreeable_majority(everything)
    assert len(res.approving) == 3
    sq = CircularSociety(c, half_arcs(c).sets, tuple(V(i) for i in range(4)), ("a", "b", "c", "d"))
    res = super_agreeable_majority(sq)
    assert len(res.approving) == 3 and res.bound == 3
    split = CircularSociety(c, (c.set_from_arcs([(0, F(1, 2))]), c.set_from_arcs([(2, F(5, 2))])),
                            (V(0), V(2)), ("left", "right"))
    with pytest.raises(NotSuperAgreeableError) as err:
        super_agreeable_majority(split)
    assert err.value.pair == (0, 1)


def test_voter_must_approve_own_position():
    c = square()
    s = CircularSociety(c, (c.set_from_arcs([(0, 1)]),), (V(2),))
    with pytest.raises(ValueError):
        super_agreeable_majority(s)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_majority_bound_and_sweep_completeness(seed):
    rng = random.Random(seed)
    c = random_cycle(rng, rng.randint(3, 30))
    cover = random_cycle_cover(rng, c)
    assert validate_cycle_cover(c, cover)
    mp = majority_point(c, cover)
    assert mp.depth >= mp.bound
    prof = depth_profile(c, cover.sets)
    grid_depth, _ = cycle_grid_depth(c, cover.sets, prof.resolution / 10)
    assert grid_depth <= mp.depth


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_reduction_agrees_with_sweep(seed):
    rng = random.Random(seed)
    c = random_cycle(rng, rng.randint(3, 12))
    cover = random_cycle_cover(rng, c, extras=0)
    try:
        res = tree_reduction_majority(c, cover)
    except ReductionNotApplicable:
        return
    assert res.depth >= res.bound
    assert set(res.members) <= {i for i, s in enumerate(cover.sets) if res.point in s}


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_voting_never_returns_a_minority(seed):
    rng = random.Random(seed)
    c = random_cycle(rng, rng.randint(3, 20))
    cover = random_cycle_cover(rng, c)
    res = super_agreeable_majority(CircularSociety(c, cover.sets, cover.anchors))
    assert 2 * len(res.approving) > res.voters


def _arc_covered_on_grid(c, sa, sb, x, y, step):
    """Sample the forward arc from position x to y and test membership directly."""
    C = c.circumference
    if y <= x:
        y += C
    k = 0
    while x + k * step <= y:
        p = c.point_at((x + k * step) % C)
        if p not in sa and p not in sb:
            return False
        k += 1
    return True


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_validation_matches_grid_check(seed):
    # quarter-grid arcs leave gaps of length >= 1/4, so an eighth grid sees them all
    rng = random.Random(seed)
    c = random_cycle(rng, rng.randint(3, 7))
    Q = int(c.circumference * 4)
    anchors, sets = [], []
    for _ in range(rng.randint(2, 5)):
        a = F(rng.randrange(Q), 4)
        arcs = [(a, a)] + [(F(rng.randrange(Q + 1), 4), F(rng.randrange(Q + 1), 4))
                           for _ in range(rng.randint(1, 3))]
        anchors.append(c.point_at(a))
        sets.append(c.set_from_arcs(arcs))
    cover = CycleKKMCover(tuple(sets), tuple(anchors))
    expected = True
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            x, y = c.position(anchors[i]), c.position(anchors[j])
            if x == y:
                continue
            fwd = _arc_covered_on_grid(c, sets[i], sets[j], x, y, F(1, 8))
            back = _arc_covered_on_grid(c, sets[i], sets[j], y, x, F(1, 8))
            expected &= fwd or back
    res = validate_cycle_cover(c, cover)
    assert bool(res) == expected
    if not res:
        i, j = res.pair
        assert res.witness not in sets[i] and res.witness not in sets[j]
