import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from treekkm import (
    ClosedSet,
    InvalidCoverError,
    KKMCover,
    MetricTree,
    TreeError,
    cover_from_connected_sets,
    intersect_all,
    is_proper,
    kkm_point_via_sperner,
    membership_labelling,
    validate_kkm_cover,
)
from treekkm.random_instances import random_tree, random_tree_cover

from conftest import V


def midpoint_cover(t, right_start=F(1, 2)):
    return KKMCover(
        (V(0), V(1)),
        (ClosedSet(t, [(0, 0, F(1, 2))]), ClosedSet(t, [(0, right_start, 1)])),
    )


def test_whole_tree_cover(path3):
    cover = KKMCover((V(0), V(2)), (ClosedSet.full(path3),) * 2)
    assert validate_kkm_cover(path3, cover)
    assert intersect_all(path3, cover) == ClosedSet.full(path3)
    lab = membership_labelling(path3, cover)
    assert all(lab.is_full(v) for v in range(3))


def test_midpoint_cover(unit_edge):
    cover = midpoint_cover(unit_edge)
    assert validate_kkm_cover(unit_edge, cover)
    mid = unit_edge.edge_point(0, F(1, 2))
    assert intersect_all(unit_edge, cover) == ClosedSet.from_points(unit_edge, [mid])
    lab = membership_labelling(unit_edge, cover)
    assert lab[0] == {0} and lab[1] == {1}


def test_midpoint_label_after_segmenting(unit_edge):
    mid = unit_edge.edge_point(0, F(1, 2))
    seg = unit_edge.segment(1, [mid])
    cover = midpoint_cover(unit_edge)
    labels = {v: {i for i, s in enumerate(cover.sets) if seg.points[v] in s} for v in range(seg.refined.n)}
    assert labels[seg.vertex_of(mid)] == {0, 1}
    assert labels[0] == {0} and labels[1] == {1}


def test_gap_is_reported(unit_edge):
    res = validate_kkm_cover(unit_edge, midpoint_cover(unit_edge, F(3, 4)))
    assert not res and res.condition == "path-covering" and res.pair == (0, 1)
    assert F(1, 2) < res.witness.offset < F(3, 4)
    with pytest.raises(InvalidCoverError):
        intersect_all(unit_edge, midpoint_cover(unit_edge, F(3, 4)))


def test_anchor_outside_its_set(unit_edge):
    cover = KKMCover((V(0), V(1)), (ClosedSet(unit_edge, [(0, F(1, 2), 1)]), ClosedSet.full(unit_edge)))
    res = validate_kkm_cover(unit_edge, cover)
    assert not res and res.condition == "containment" and res.pair == (0,)


def test_membership_needs_vertex_anchors(unit_edge):
    mid = unit_edge.edge_point(0, F(1, 2))
    cover = KKMCover((mid,), (ClosedSet.full(unit_edge),))
    with pytest.raises(TreeError):
        membership_labelling(unit_edge, cover)


def test_sperner_route_on_midpoint_cover(unit_edge):
    res = kkm_point_via_sperner(unit_edge, midpoint_cover(unit_edge), F(1, 4))
    assert res.point == unit_edge.edge_point(0, F(1, 2))
    assert res.trace[-1].found == res.point


def test_endpoint_only_refinement_finds_a_lattice_point():
    t = MetricTree(2, [(0, 1, 1)])
    third = t.edge_point(0, F(1, 3))
    cover = KKMCover((V(0), V(1)), (ClosedSet(t, [(0, 0, F(1, 3))]), ClosedSet(t, [(0, F(1, 3), 1)])))
    res = kkm_point_via_sperner(t, cover, F(1, 2), exact_edge=False)
    assert res.point == third
    assert not res.trace[-1].via_edge


def test_endpoint_only_refinement_can_stall(unit_edge):
    # 2**k + 1 equal parts never put a vertex at 1/2
    with pytest.raises(InvalidCoverError):
        kkm_point_via_sperner(unit_edge, midpoint_cover(unit_edge), F(1, 4), max_halvings=5, exact_edge=False)


def test_interior_intersection_found_in_first_round(path3):
    cover = KKMCover((V(0), V(2)), (ClosedSet(path3, [(0, 0, 1), (1, 0, F(3, 4))]),
                                    ClosedSet(path3, [(1, F(1, 4), 1)])))
    res = kkm_point_via_sperner(path3, cover)
    assert res.halvings == 0


def test_duplicate_anchors_merge(path3):
    cover = KKMCover((V(0), V(0), V(2)), (ClosedSet.full(path3), ClosedSet(path3, [(0, 0, 1)]),
                                          ClosedSet(path3, [(0, F(1, 2), 1), (1, 0, 1)])))
    assert validate_kkm_cover(path3, cover)
    res = kkm_point_via_sperner(path3, cover)
    assert all(res.point in s for s in cover.sets)


def test_pairwise_intersecting_connected_sets():
    # path 0-1-2-3-4 with four overlapping neighbourhoods
    t = MetricTree(5, [(i, i + 1, 1) for i in range(4)])
    sets = [
        ClosedSet(t, [(0, 0, 1), (1, 0, 1), (2, 0, F(1, 2))]),
        ClosedSet(t, [(1, F(1, 2), 1), (2, 0, 1)]),
        ClosedSet(t, [(2, 0, 1), (3, 0, F(1, 2))]),
        ClosedSet(t, [(1, F(3, 4), 1), (2, 0, 1), (3, 0, 1)]),
    ]
    cover = cover_from_connected_sets(t, sets)
    assert validate_kkm_cover(t, cover)
    common = intersect_all(t, cover)
    assert common and V(2) in common
    assert cover_from_connected_sets(t, [ClosedSet.full(t)]).anchors == (V(0),)


def test_connected_sets_errors(path3):
    a = ClosedSet(path3, [(0, 0, 1)])
    b = ClosedSet(path3, [(1, F(1, 2), 1)])
    with pytest.raises(InvalidCoverError) as err:
        cover_from_connected_sets(path3, [a, b])
    assert err.value.check.pair == (0, 1)
    split = ClosedSet(path3, [(0, 0, F(1, 2)), (1, F(1, 2), 1)])
    with pytest.raises(InvalidCoverError, match="not connected"):
        cover_from_connected_sets(path3, [split, ClosedSet.full(path3)])
    with pytest.raises(InvalidCoverError, match="empty"):
        cover_from_connected_sets(path3, [ClosedSet.empty(path3)])
    with pytest.raises(InvalidCoverError, match="cover"):
        cover_from_connected_sets(path3, [a])


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_membership_labelling_is_proper(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    cover = random_tree_cover(rng, t, rng.randint(1, 8))
    assert validate_kkm_cover(t, cover)
    assert is_proper(t, membership_labelling(t, cover))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_intersection_and_sperner_agree(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    cover = random_tree_cover(rng, t, rng.randint(1, 8), vertex_anchors=rng.random() < 0.5)
    common = intersect_all(t, cover)
    assert common
    for p in common.boundary_candidates():
        assert all(p in s for s in cover.sets)
    res = kkm_point_via_sperner(t, cover, F(1, rng.randint(1, 4)))
    assert res.point in common


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_invalid_covers_explain_themselves(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 15))
    cover = random_tree_cover(rng, t, rng.randint(2, 5), extras=0)
    victim = rng.randrange(len(cover))
    s = cover.sets[victim]
    eid = rng.randrange(len(t.edges))
    L = t.edges[eid].length
    sets = list(cover.sets)
    sets[victim] = s.minus_open(eid, L / 4, 3 * L / 4)
    damaged = KKMCover(cover.anchors, tuple(sets))
    res = validate_kkm_cover(t, damaged)
    common = damaged.sets[0]
    for x in damaged.sets[1:]:
        common = common & x
    if common.is_empty():
        assert not res and res.condition in ("containment", "path-covering")
    if res:
        assert common
