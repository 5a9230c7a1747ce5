import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from treekkm import MetricTree, TreeError, TreePoint, build_tree, component_side, distance, path, segment, subtree_spanned
from treekkm.oracles import PointDistance, reachability_side
from treekkm.random_instances import random_point, random_tree

from conftest import V


def test_smallest_tree():
    t = build_tree(2, [(0, 1, 1)])
    assert t.n == 2 and t.edges[0].length == 1


@pytest.mark.parametrize(
    "n, edges, msg",
    [
        (3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], "cycle"),
        (1, [], "at least two"),
        (4, [(0, 1, 1), (2, 3, 1)], "disconnected"),
        (2, [(0, 1, 0)], "non-positive"),
        (2, [(0, 1, -1)], "non-positive"),
        (2, [(0, 5, 1)], "outside"),
    ],
)
def test_build_errors(n, edges, msg):
    with pytest.raises(TreeError, match=msg):
        build_tree(n, edges)


def test_floats_refused():
    with pytest.raises(TypeError):
        build_tree(2, [(0, 1, 0.5)])


def test_points_are_canonical(unit_edge):
    assert unit_edge.edge_point(0, 0) == V(0)
    assert unit_edge.edge_point(0, 1) == V(1)
    assert unit_edge.edge_point(0, "1/2") == TreePoint(edge=0, offset=F(1, 2))
    with pytest.raises(TreeError):
        unit_edge.edge_point(0, 2)


def test_offsets_follow_first_endpoint():
    t = MetricTree(2, [(1, 0, 4)])
    assert t.point_between(0, 1, 1) == TreePoint(edge=0, offset=F(3))


def test_distance_examples(path3):
    assert distance(path3, V(1), V(1)) == 0
    assert distance(path3, V(0), V(2)) == 2
    assert distance(path3, path3.edge_point(0, F(1, 2)), V(2)) == F(3, 2)


def test_distance_rejects_foreign_points(path3):
    with pytest.raises(TreeError):
        distance(path3, V(7), V(0))
    with pytest.raises(TreeError):
        distance(path3, TreePoint(edge=0, offset=F(0)), V(0))


def test_path_examples(path3):
    p = path(path3, V(1), V(1))
    assert p.points == (V(1),) and p.length == 0
    star = MetricTree(3, [(0, 1, 1), (0, 2, 1)])
    assert path(star, V(1), V(2)).points == (V(1), V(0), V(2))


def test_path_inside_one_edge():
    t = MetricTree(2, [(0, 1, 3)])
    p = path(t, t.edge_point(0, 2), t.edge_point(0, 1))
    assert p.length == 1 and len(p.points) == 2


def test_component_side_examples(path3):
    assert component_side(path3, V(1), V(0)) != component_side(path3, V(1), V(2))
    assert component_side(path3, V(0), V(1)) == component_side(path3, V(0), V(2))
    with pytest.raises(TreeError):
        component_side(path3, V(1), V(1))


def test_component_side_interior_cut(path3):
    cut = path3.edge_point(0, F(1, 2))
    left = path3.edge_point(0, F(1, 4))
    assert component_side(path3, cut, left) == component_side(path3, cut, V(0))
    assert component_side(path3, cut, left) != component_side(path3, cut, V(2))


def test_segment_examples(unit_edge):
    s = segment(unit_edge, F(1, 2))
    assert s.size < F(1, 2)
    assert [e.length for e in s.refined.edges] == [F(1, 3)] * 3
    third = unit_edge.edge_point(0, F(1, 3))
    s2 = segment(unit_edge, 1, [third])
    assert s2.points[s2.vertex_of(third)] == third
    with pytest.raises(TreeError):
        segment(unit_edge, 0)


def test_segmentation_round_trip(rng):
    t = random_tree(rng, 12)
    s = t.segment(F(1, 3))
    for _ in range(50):
        p = random_point(rng, t, grid=12)
        assert s.to_original(s.to_refined(p)) == p


def test_subtree_spanned_examples():
    star = MetricTree(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    whole = subtree_spanned(star, range(4))
    assert whole.vertices == frozenset(range(4)) and len(whole.edges) == 3
    ab = subtree_spanned(star, {1, 2})
    assert ab.vertices == {0, 1, 2}
    tree, old = ab.to_tree()
    assert tree.n == 3 and sorted(old) == [0, 1, 2]
    with pytest.raises(TreeError):
        subtree_spanned(star, [])


def test_single_vertex_span_is_not_a_tree(path3):
    span = subtree_spanned(path3, {2})
    assert span.vertices == {2} and not span.edges and span.leaves() == [2]


# -- properties -------------------------------------------------------------


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_metric_axioms(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 25))
    pts = [random_point(rng, t) for _ in range(6)]
    for x in pts:
        assert t.distance(x, x) == 0
        for y in pts:
            d = t.distance(x, y)
            assert d == t.distance(y, x)
            assert (d == 0) == (x == y)
            for z in pts:
                assert t.distance(x, z) <= d + t.distance(y, z)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_distance_matches_bfs_oracle(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    oracle = PointDistance(t)
    for _ in range(20):
        x, y = random_point(rng, t), random_point(rng, t)
        assert t.distance(x, y) == oracle(x, y)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_path_additivity(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 30))
    x, y = random_point(rng, t), random_point(rng, t)
    p = t.path(x, y)
    assert p.length == t.distance(x, y)
    for q in p.points:
        assert t.distance(x, q) + t.distance(q, y) == p.length
    s = F(rng.randint(0, 8), 8) * p.length
    z = t.point_along(x, y, s)
    assert t.distance(x, z) == s and t.distance(z, y) == p.length - s


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_segmentation_is_isometric(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 15))
    must = [random_point(rng, t) for _ in range(3)]
    delta = F(1, rng.randint(1, 5))
    s = t.segment(delta, must)
    assert s.size < delta
    for p in must:
        s.vertex_of(p)
    for u in range(t.n):
        assert s.points[u] == V(u)
        for v in range(t.n):
            assert s.refined.distance(V(u), V(v)) == t.distance(V(u), V(v))
    for a in range(s.refined.n):
        b = rng.randrange(s.refined.n)
        assert s.refined.distance(V(a), V(b)) == t.distance(s.points[a], s.points[b])


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_span_leaves_are_anchors(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    A = set(rng.sample(range(t.n), rng.randint(1, t.n)))
    span = t.subtree_spanned(A)
    assert A <= span.vertices
    if len(span.vertices) > 1:
        assert set(span.leaves()) <= A
        assert len(span.edges) == len(span.vertices) - 1


def test_component_side_matches_reachability():
    rng = random.Random(5)
    for _ in range(30):
        t = random_tree(rng, rng.randint(2, 200))
        cut = random_point(rng, t)
        probes = [p for p in (random_point(rng, t) for _ in range(12)) if p != cut]
        sides = [t.component_side(cut, p) for p in probes]
        reach = [reachability_side(t, cut, p) for p in probes]
        for i in range(len(probes)):
            for j in range(len(probes)):
                assert (sides[i] == sides[j]) == (reach[i] == reach[j])
