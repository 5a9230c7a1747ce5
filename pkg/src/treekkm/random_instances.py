"""
Seeded generators of random trees, labellings, covers, maps and cycles.

Lengths and breakpoints are drawn from small dyadic grids so that exact
arithmetic stays cheap and instances stay easy to read.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .closed_set import ClosedSet
from .cycle import CycleKKMCover, MetricCycle
from .fixedpoint import PLMap
from .kkm import KKMCover
from .metric_tree import MetricTree, TreePoint
from .sperner import Labelling

LENGTHS = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))


def random_tree(rng: random.Random, n: int, lengths: Sequence[Fraction] = LENGTHS) -> MetricTree:
    """Uniform random attachment tree with shuffled labels and edge orientations."""
    perm = list(range(n))
    rng.shuffle(perm)
    edges = []
    for i in range(1, n):
        u, v = perm[i], perm[rng.randrange(i)]
        if rng.random() < 0.5:
            u, v = v, u
        edges.append((u, v, rng.choice(lengths)))
    rng.shuffle(edges)
    return MetricTree(n, edges)


def random_point(rng: random.Random, t, grid: int = 4) -> TreePoint:
    """A vertex, or a point on an edge at a multiple of ``1/grid``."""
    if rng.random() < 0.4:
        return TreePoint(vertex=rng.randrange(t.n))
    eid = rng.randrange(len(t.edges))
    L = t.edges[eid].length
    steps = int(L * grid)
    return t.edge_point(eid, Fraction(rng.randint(0, steps), grid))


def random_proper_labelling(rng: random.Random, t: MetricTree, size: Optional[int] = None) -> Labelling:
    """Each vertex misses a random part of the labels lying beyond one random neighbour."""
    k = size or rng.randint(1, t.n)
    universe = frozenset(rng.sample(range(t.n), k))
    labels = {}
    for v in range(t.n):
        w = rng.choice(t.neighbours(v))
        beyond = sorted(universe & t.component_vertices(v, w))
        missing = {a for a in beyond if rng.random() < 0.7}
        labels[v] = universe - missing
    return Labelling(universe, labels)


def random_fpf_map(rng: random.Random, n: int) -> dict[int, int]:
    """A vertex map without fixed vertices."""
    return {v: rng.choice([w for w in range(n) if w != v]) for v in range(n)}


def random_tree_cover(rng: random.Random, t: MetricTree, k: int, vertex_anchors: bool = True,
                      extras: int = 2) -> KKMCover:
    """Valid cover: every anchor path is split at a random quarter point between the two sets."""
    if vertex_anchors:
        anchors = [TreePoint(vertex=v) for v in rng.sample(range(t.n), min(k, t.n))]
    else:
        anchors = list({random_point(rng, t) for _ in range(k)})
    pieces: list[list] = [[] for _ in anchors]
    for i, a in enumerate(anchors):
        for j in range(i + 1, len(anchors)):
            b = anchors[j]
            d = t.distance(a, b)
            s = Fraction(rng.randint(0, int(d * 4)), 4)
            p = t.point_along(a, b, s)
            pieces[i] += t.pieces(a, p)
            pieces[j] += t.pieces(p, b)
        for _ in range(rng.randint(0, extras)):
            q = random_point(rng, t)
            r = random_point(rng, t)
            pieces[i] += t.pieces(q, r)
    sets = []
    for a, ps in zip(anchors, pieces):
        s = ClosedSet(t, ps) | ClosedSet.from_points(t, [a])
        sets.append(s)
    return KKMCover(tuple(anchors), tuple(sets))


def random_pl_map(rng: random.Random, t: MetricTree) -> PLMap:
    return PLMap(tuple(random_point(rng, t) for _ in range(t.n)))


def random_cycle(rng: random.Random, n: int, lengths: Sequence[Fraction] = LENGTHS) -> MetricCycle:
    return MetricCycle([rng.choice(lengths) for _ in range(n)])


def random_cycle_cover(rng: random.Random, c: MetricCycle, extras: int = 2) -> CycleKKMCover:
    """Valid vertex-anchored cover: one arc per vertex, widened until every pair passes.

    Arc ends sit on a quarter grid; a few extra arcs are thrown in afterwards,
    which can only help the covering rule.
    """
    C = c.circumference
    Q = int(C * 4)  # work in quarter units
    pos = [int(s * 4) for s in c.starts]
    left = [rng.randint(0, Q // 4) for _ in range(c.n)]
    right = [rng.randint(0, Q // 4) for _ in range(c.n)]
    for v in range(c.n):
        for w in range(c.n):
            if v == w:
                continue
            fwd = (pos[w] - pos[v]) % Q
            back = Q - fwd
            if right[v] + left[w] >= fwd or right[w] + left[v] >= back:
                continue
            if rng.random() < 0.5:
                right[v] = fwd - left[w]
            else:
                left[v] = back - right[w]
    sets = []
    for v in range(c.n):
        if left[v] + right[v] >= Q:
            arcs = [(0, C)]
        else:
            arcs = [(Fraction((pos[v] - left[v]) % Q, 4), Fraction((pos[v] + right[v]) % Q, 4))]
        for _ in range(rng.randint(0, extras)):
            s = Fraction(rng.randrange(Q), 4)
            arcs.append((s, min(C, s + Fraction(rng.randint(0, 8), 4))))
        sets.append(c.set_from_arcs(arcs))
    return CycleKKMCover(tuple(sets))
