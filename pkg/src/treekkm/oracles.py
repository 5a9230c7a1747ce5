"""
Brute-force verifiers.

Everything here works from definitions only: breadth-first search instead of
rooted-tree bookkeeping, exhaustive scans instead of walks, dense grids
instead of interval arithmetic.  They are slow on purpose and meant for
cross-checking the main algorithms on small instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .closed_set import ClosedSet
from .metric_tree import MetricGraph, MetricTree, Rational, TreePoint, as_fraction
from .sperner import FixedVertex, Labelling, SpanningEdge


def scan_fully_labelled(t: MetricGraph, lab: Labelling) -> list[tuple[int, int]]:
    """Every edge whose endpoint labels jointly cover the universe."""
    out = []
    for e in t.edges:
        if (lab[e.u] | lab[e.v]) >= lab.universe:
            out.append((min(e.u, e.v), max(e.u, e.v)))
    return sorted(out)


# -- search primitives ---------------------------------------------------------


def bfs_reach(g: MetricGraph, start: int, banned_vertex: Optional[int] = None,
              banned_edge: Optional[int] = None) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, eid in g.adjacency[v]:
            if eid == banned_edge or w == banned_vertex or w in seen:
                continue
            seen.add(w)
            queue.append(w)
    return seen


def bfs_distances(g: MetricGraph, start: int) -> dict[int, Fraction]:
    """Single-source vertex distances on a tree (each vertex reached once)."""
    dist = {start: Fraction(0)}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, eid in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + g.edges[eid].length
                queue.append(w)
    return dist


def bfs_vertex_path(g: MetricGraph, a: int, b: int) -> list[int]:
    prev = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w, _ in g.adjacency[v]:
            if w not in prev:
                prev[w] = v
                queue.append(w)
    out = [b]
    while out[-1] != a:
        out.append(prev[out[-1]])
    return out[::-1]


class PointDistance:
    """Tree distance between arbitrary points, from cached BFS tables."""

    def __init__(self, t: MetricTree):
        self.t = t
        self._tables: dict[int, dict[int, Fraction]] = {}

    def vertex(self, u: int, v: int) -> Fraction:
        if u not in self._tables:
            self._tables[u] = bfs_distances(self.t, u)
        return self._tables[u][v]

    def __call__(self, x: TreePoint, y: TreePoint) -> Fraction:
        if x.vertex is None and y.vertex is None and x.edge == y.edge:
            return abs(x.offset - y.offset)
        return min(
            dx + self.vertex(vx, vy) + dy
            for vx, dx in self.t.ends(x)
            for vy, dy in self.t.ends(y)
        )


# -- components ------------------------------------------------------------------


def reachability_side(t: MetricTree, cut: TreePoint, probe: TreePoint) -> frozenset[int]:
    """Vertices reachable from ``probe`` once ``cut`` is deleted; the empty set
    means the probe's piece of the cut edge holds no vertex at all (impossible
    for a point cut) and is never returned."""
    if cut == probe:
        raise ValueError("probe equals cut")
    if cut.vertex is not None:
        if probe.vertex is not None:
            seeds = [probe.vertex]
        else:
            e = t.edges[probe.edge]
            seeds = [w for w in (e.u, e.v) if w != cut.vertex]
        reach: set[int] = set()
        for s in seeds:
            reach |= bfs_reach(t, s, banned_vertex=cut.vertex)
        return frozenset(reach)
    e = t.edges[cut.edge]
    if probe.vertex is not None:
        seed = probe.vertex
    elif probe.edge == cut.edge:
        seed = e.u if probe.offset < cut.offset else e.v
    else:
        seed = t.edges[probe.edge].u
    return frozenset(bfs_reach(t, seed, banned_edge=cut.edge))


# -- grids ------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSample:
    """All vertices plus equally spaced points at most ``resolution`` apart on every edge."""

    graph: MetricGraph
    resolution: Fraction
    points: tuple[TreePoint, ...]

    @classmethod
    def build(cls, g: MetricGraph, resolution: Rational) -> "GridSample":
        res = as_fraction(resolution)
        if res <= 0:
            raise ValueError("resolution must be positive")
        pts = [TreePoint(vertex=v) for v in range(g.n)]
        for eid, e in enumerate(g.edges):
            m = ceil(e.length / res)
            pts.extend(TreePoint(edge=eid, offset=e.length * k / m) for k in range(1, m))
        return cls(g, res, tuple(pts))


def grid_membership_audit(s: ClosedSet, predicate: Callable[[TreePoint], bool],
                          sample: GridSample) -> list[TreePoint]:
    """Sample points where exact membership and the defining predicate disagree."""
    return [p for p in sample.points if (p in s) != bool(predicate(p))]


def pl_image(t: MetricTree, images: Sequence[TreePoint], x: TreePoint,
             dist: Optional[PointDistance] = None) -> TreePoint:
    """Evaluate a vertex-image PL map by walking the BFS route between the images."""
    if x.vertex is not None:
        return images[x.vertex]
    dist = dist or PointDistance(t)
    e = t.edges[x.edge]
    fu, fv = images[e.u], images[e.v]
    span = dist(fu, fv)
    if span == 0:
        return fu
    s = span * x.offset / e.length
    # route: fu -> (an end of fu's cell) -> ... -> (an end of fv's cell) -> fv
    if fu.vertex is None and fv.vertex is None and fu.edge == fv.edge:
        off = fu.offset + (s if fv.offset > fu.offset else -s)
        return t.edge_point(fu.edge, off)
    best = None
    for a, da in t.ends(fu):
        for b, db in t.ends(fv):
            total = da + dist.vertex(a, b) + db
            if total == span and best is None:
                best = (a, da, b)
    a, da, b = best
    if s <= da:
        return t.point_between(a, _other_end(t, fu, a), da - s) if fu.vertex is None else fu
    s -= da
    route = bfs_vertex_path(t, a, b)
    for p, q in zip(route, route[1:]):
        L = t.edges[t.edge_id(p, q)].length
        if s <= L:
            return t.point_between(p, q, s)
        s -= L
    return t.point_between(b, _other_end(t, fv, b), s) if fv.vertex is None else fv


def _other_end(t: MetricTree, p: TreePoint, v: int) -> int:
    e = t.edges[p.edge]
    return e.v if e.u == v else e.u


def move_away_predicate(t: MetricTree, images: Sequence[TreePoint], a: TreePoint,
                        dist: Optional[PointDistance] = None) -> Callable[[TreePoint], bool]:
    """The defining inequality ``d(x, a) <= d(f(x), a)`` evaluated directly."""
    dist = dist or PointDistance(t)
    return lambda x: dist(x, a) <= dist(pl_image(t, images, x, dist), a)


# -- discrete fixed points -------------------------------------------------------


def exhaustive_discrete_fp(t: MetricTree, f: Mapping[int, int]):
    """Every fixed vertex and every edge separating the images of its ends."""
    out: list = [FixedVertex(v) for v in range(t.n) if f[v] == v]
    for eid, e in enumerate(t.edges):
        side = bfs_reach(t, e.u, banned_edge=eid)
        if (f[e.u] in side) != (f[e.v] in side):
            out.append(SpanningEdge((min(e.u, e.v), max(e.u, e.v))))
    return out


# -- cycles -----------------------------------------------------------------------


def cycle_grid_depth(c, sets: Sequence[ClosedSet], resolution: Rational) -> tuple[int, Fraction]:
    """Maximum coverage depth over a uniform grid of positions, with one argmax.

    Positions and arcs are scaled to integers so the count is exact.
    """
    res = as_fraction(resolution)
    arcs = [c.arcs(s) for s in sets]
    denoms = [res.denominator, c.circumference.denominator]
    for al in arcs:
        for a, b in al:
            denoms += [a.denominator, b.denominator]
    scale = lcm(*denoms)
    step = int(res * scale)
    total = int(c.circumference * scale)
    grid = np.arange(0, total, step, dtype=np.int64)
    depth = np.zeros(len(grid), dtype=np.int64)
    for al in arcs:
        for a, b in al:
            lo = np.searchsorted(grid, int(a * scale), side="left")
            hi = np.searchsorted(grid, int(b * scale), side="right")
            depth[lo:hi] += 1
    k = int(np.argmax(depth))
    return int(depth[k]), Fraction(int(grid[k]), scale)
