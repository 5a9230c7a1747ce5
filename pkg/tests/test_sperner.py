import random

import pytest
from hypothesis import given, settings, strategies as st

from treekkm import (
    FixedVertex,
    ImproperLabellingError,
    Labelling,
    MetricTree,
    SpanningEdge,
    TreeError,
    discrete_fixed_point,
    find_fully_labelled_edge,
    is_proper,
    labelling_from_vertex_map,
    successor,
    vertex_map_from_labelling,
)
from treekkm.oracles import bfs_vertex_path, exhaustive_discrete_fp, scan_fully_labelled
from treekkm.random_instances import random_fpf_map, random_proper_labelling, random_tree
from treekkm.sperner import is_fully_labelled


def integer_path(N):
    t = MetricTree(N + 1, [(n, n + 1, 1) for n in range(N)])
    lab = Labelling.make(range(N + 1), {n: range(n + 1) for n in range(N + 1)})
    return t, lab


def test_everything_labelled_is_proper(path3):
    lab = Labelling.make(range(3), {v: range(3) for v in range(3)})
    assert is_proper(path3, lab)


def test_missing_labels_on_both_sides(path3):
    lab = Labelling.make([0, 2], {0: [0], 1: [], 2: [2]})
    res = is_proper(path3, lab)
    assert not res and res.vertex == 1


def test_label_must_label_itself(path3):
    lab = Labelling.make([0, 2], {0: [], 1: [0, 2], 2: [2]})
    res = is_proper(path3, lab)
    assert not res and res.vertex == 0


def test_labels_outside_universe():
    with pytest.raises(ImproperLabellingError):
        Labelling.make([0], {1: [0, 1]})


def test_integer_truncation_is_proper():
    t, lab = integer_path(30)
    assert is_proper(t, lab)


def test_successor_examples(path3):
    lab = Labelling.make([0, 2], {0: [0], 1: [0, 2], 2: [2]})
    assert successor(path3, lab, 0) == 1
    with pytest.raises(ImproperLabellingError):
        successor(path3, lab, 1)


def test_single_edge_witness(unit_edge):
    lab = Labelling.make([0, 1], {0: [0], 1: [1]})
    assert find_fully_labelled_edge(unit_edge, lab).edge == (0, 1)


def test_integer_truncation_edge():
    t, lab = integer_path(12)
    w = find_fully_labelled_edge(t, lab)
    assert w.edge == (11, 12) and w.via_full_vertex == 12


def test_improper_input_rejected(path3):
    lab = Labelling.make([0, 2], {0: [0], 1: [], 2: [2]})
    with pytest.raises(ImproperLabellingError):
        find_fully_labelled_edge(path3, lab)


def test_vertex_map_labelling_example(path3):
    lab = labelling_from_vertex_map(path3, {0: 2, 1: 2, 2: 0})
    assert lab[0] == {0} and lab[1] == {0, 1} and lab[2] == {2}
    with pytest.raises(TreeError):
        labelling_from_vertex_map(path3, {0: 0, 1: 2, 2: 0})


def test_star_map_labelling_is_proper():
    star = MetricTree(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    lab = labelling_from_vertex_map(star, {0: 1, 1: 2, 2: 3, 3: 1})
    assert is_proper(star, lab)


def test_discrete_fixed_point_examples(unit_edge, path3):
    assert isinstance(discrete_fixed_point(path3, {0: 0, 1: 1, 2: 2}), FixedVertex)
    assert discrete_fixed_point(unit_edge, {0: 1, 1: 0}) == SpanningEdge((0, 1))
    with pytest.raises(TreeError):
        discrete_fixed_point(unit_edge, {0: 1})


def test_reverse_construction(path3):
    full = Labelling.make([0, 2], {0: [0, 2], 1: [0], 2: [2]})
    assert vertex_map_from_labelling(path3, full).full_vertex == 0
    bad = Labelling.make(range(3), {0: [0], 1: [1], 2: [2]})
    with pytest.raises(ImproperLabellingError):
        vertex_map_from_labelling(path3, bad)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_walk_finds_a_scanned_edge(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 80))
    lab = random_proper_labelling(rng, t)
    assert is_proper(t, lab)
    w = find_fully_labelled_edge(t, lab)
    assert is_fully_labelled(lab, w.edge)
    assert w.edge in scan_fully_labelled(t, lab)
    assert len(w.trace) <= 2 * t.n
    assert len(set(w.trace)) == len(w.trace)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_successor_points_at_every_missing_label(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    lab = random_proper_labelling(rng, t)
    for v in range(t.n):
        if lab.is_full(v):
            continue
        s = successor(t, lab, v)
        for a in lab.missing(v):
            assert bfs_vertex_path(t, v, a)[1] == s


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_discrete_fp_against_exhaustive_scan(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 60)
    t = random_tree(rng, n)
    f = random_fpf_map(rng, n)
    assert is_proper(t, labelling_from_vertex_map(t, f))
    w = discrete_fixed_point(t, f)
    assert w in exhaustive_discrete_fp(t, f)
    x, y = w.edge
    route = bfs_vertex_path(t, f[x], f[y])
    assert any({p, q} == {x, y} for p, q in zip(route, route[1:]))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_round_trip_through_vertex_maps(seed):
    rng = random.Random(seed)
    t = random_tree(rng, rng.randint(2, 40))
    lab = random_proper_labelling(rng, t, size=t.n)
    rc = vertex_map_from_labelling(t, lab)
    if rc.full_vertex is not None:
        assert lab.is_full(rc.full_vertex)
    else:
        assert is_fully_labelled(lab, rc.edge(t))
