"""
Exact metric trees.

A metric tree is a combinatorial tree whose edges are realised as segments of
given positive rational length.  Points of the underlying space are either
vertices or an offset along an edge, measured from the edge's first endpoint.
All arithmetic uses :class:`fractions.Fraction`, so distances are exact.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, NamedTuple, Optional, Sequence, Union

Rational = Union[int, Fraction, str]


def as_fraction(value: Rational) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction (floats refused)."""
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} not accepted; use 'p/q'")
    return Fraction(value)


class TreeError(ValueError):
    """Raised for malformed trees, cycles and foreign points."""


class Edge(NamedTuple):
    u: int
    v: int
    length: Fraction


@dataclass(frozen=True)
class TreePoint:
    """A point of a metric graph: a vertex, or ``offset`` along ``edge``.

    Build points through :meth:`MetricGraph.vertex_point` and
    :meth:`MetricGraph.edge_point`, which canonicalise edge endpoints to the
    vertex form.  Direct construction is only safe for interior offsets.
    """

    vertex: Optional[int] = None
    edge: Optional[int] = None
    offset: Fraction = Fraction(0)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.vertex is not None:
            return f"TreePoint(vertex={self.vertex})"
        return f"TreePoint(edge={self.edge}, offset={self.offset})"


class MetricGraph:
    """Vertices ``0..n-1`` and rational-length edges; shared by trees and cycles."""

    def __init__(self, n: int, edges: Iterable[Sequence]):
        self.n = int(n)
        es = []
        for item in edges:
            u, v, length = item
            es.append(Edge(int(u), int(v), as_fraction(length)))
        self.edges: tuple[Edge, ...] = tuple(es)
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise TreeError(f"edge {tuple(e[:2])} references a vertex outside 0..{self.n - 1}")
            if e.length <= 0:
                raise TreeError(f"edge {tuple(e[:2])} has non-positive length {e.length}")
        self.adjacency: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            self.adjacency[e.u].append((e.v, i))
            if e.v != e.u:
                self.adjacency[e.v].append((e.u, i))
        for nbrs in self.adjacency:
            nbrs.sort()
        self._edge_ids: dict[frozenset, int] = {}
        for i, e in enumerate(self.edges):
            self._edge_ids.setdefault(frozenset((e.u, e.v)), i)

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n, self.edges))

    # -- points ---------------------------------------------------------

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._edge_ids[frozenset((u, v))]
        except KeyError:
            raise TreeError(f"no edge between {u} and {v}") from None

    def length(self, edge: int) -> Fraction:
        return self.edges[edge].length

    def vertex_point(self, v: int) -> TreePoint:
        if not 0 <= v < self.n:
            raise TreeError(f"vertex {v} not in graph")
        return TreePoint(vertex=v)

    def edge_point(self, edge: int, offset: Rational) -> TreePoint:
        """Canonical point at ``offset`` from the first endpoint of ``edge``."""
        if not 0 <= edge < len(self.edges):
            raise TreeError(f"edge {edge} not in graph")
        e = self.edges[edge]
        t = as_fraction(offset)
        if t < 0 or t > e.length:
            raise TreeError(f"offset {t} outside [0, {e.length}] on edge {edge}")
        if t == 0:
            return TreePoint(vertex=e.u)
        if t == e.length:
            return TreePoint(vertex=e.v)
        return TreePoint(edge=edge, offset=t)

    def point_between(self, a: int, b: int, offset: Rational) -> TreePoint:
        """Point at ``offset`` from vertex ``a`` towards its neighbour ``b``."""
        eid = self.edge_id(a, b)
        t = as_fraction(offset)
        if self.edges[eid].u == a:
            return self.edge_point(eid, t)
        return self.edge_point(eid, self.edges[eid].length - t)

    def check_point(self, p: TreePoint) -> None:
        if p.vertex is not None:
            if not 0 <= p.vertex < self.n:
                raise TreeError(f"{p!r} is not on this graph")
            return
        if p.edge is None or not 0 <= p.edge < len(self.edges):
            raise TreeError(f"{p!r} is not on this graph")
        if not 0 < p.offset < self.edges[p.edge].length:
            raise TreeError(f"{p!r} is not in canonical form")

    def representations(self, p: TreePoint) -> list[tuple[int, Fraction]]:
        """All ``(edge, offset)`` pairs naming ``p``."""
        if p.vertex is None:
            return [(p.edge, p.offset)]
        reps = []
        for _, eid in self.adjacency[p.vertex]:
            e = self.edges[eid]
            if e.u == p.vertex:
                reps.append((eid, Fraction(0)))
            if e.v == p.vertex:
                reps.append((eid, e.length))
        return reps

    def point_key(self, p: TreePoint) -> tuple[int, Fraction]:
        """Lexicographic order on points: smallest edge id, then smallest offset."""
        return min(self.representations(p))

    def ends(self, p: TreePoint) -> list[tuple[int, Fraction]]:
        """Vertices bounding the cell of ``p`` with the distance to each."""
        if p.vertex is not None:
            return [(p.vertex, Fraction(0))]
        e = self.edges[p.edge]
        return [(e.u, p.offset), (e.v, e.length - p.offset)]


class MetricTree(MetricGraph):
    """A finite metric tree on vertices ``0..n-1``.

    >>> t = MetricTree(3, [(0, 1, 1), (1, 2, 1)])
    >>> t.distance(t.vertex_point(0), t.vertex_point(2))
    Fraction(2, 1)
    """

    def __init__(self, n: int, edges: Iterable[Sequence]):
        super().__init__(n, edges)
        if self.n < 2:
            raise TreeError("a tree needs at least two vertices")
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                raise TreeError(f"cycle detected at edge {(e.u, e.v)}")
            parent[ru] = rv
        if len(self.edges) != self.n - 1:
            raise TreeError("graph is disconnected")
        self._root()
        self._dist_cache: dict[tuple[int, int], Fraction] = {}

    def _root(self) -> None:
        n = self.n
        self.parent = [-1] * n
        self.parent_edge = [-1] * n
        self.level = [0] * n
        self.depth = [Fraction(0)] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.tin = [0] * n
        self.tout = [0] * n
        self.order: list[int] = []
        # iterative DFS from vertex 0
        stack = [(0, iter(self.adjacency[0]))]
        self.tin[0] = 0
        self.order.append(0)
        while stack:
            v, it = stack[-1]
            advanced = False
            for w, eid in it:
                if w == self.parent[v]:
                    continue
                self.parent[w] = v
                self.parent_edge[w] = eid
                self.level[w] = self.level[v] + 1
                self.depth[w] = self.depth[v] + self.edges[eid].length
                self.children[v].append(w)
                self.tin[w] = len(self.order)
                self.order.append(w)
                stack.append((w, iter(self.adjacency[w])))
                advanced = True
                break
            if not advanced:
                self.tout[v] = len(self.order)
                stack.pop()
        self._child_tin = [[self.tin[c] for c in ch] for ch in self.children]

    # -- combinatorics ----------------------------------------------------

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adjacency[v]) == 1]

    def neighbours(self, v: int) -> list[int]:
        return [w for w, _ in self.adjacency[v]]

    def in_subtree(self, root: int, v: int) -> bool:
        """True if ``v`` lies in the subtree hanging below ``root`` (vertex 0 is the global root)."""
        return self.tin[root] <= self.tin[v] < self.tout[root]

    def next_hop(self, v: int, w: int) -> int:
        """The neighbour of ``v`` on the path from ``v`` to ``w != v``."""
        if v == w:
            raise TreeError("next_hop needs two distinct vertices")
        if self.in_subtree(v, w):
            idx = bisect_right(self._child_tin[v], self.tin[w]) - 1
            return self.children[v][idx]
        return self.parent[v]

    def component_vertices(self, v: int, towards: int) -> frozenset[int]:
        """Vertex set of the component of ``T minus v`` that contains neighbour ``towards``."""
        if self.parent[towards] == v:
            return frozenset(self.order[self.tin[towards]:self.tout[towards]])
        if self.parent[v] != towards:
            raise TreeError(f"{towards} is not a neighbour of {v}")
        inside = self.order[self.tin[v]:self.tout[v]]
        return frozenset(range(self.n)).difference(inside)

    def lca(self, u: int, v: int) -> int:
        while self.level[u] > self.level[v]:
            u = self.parent[u]
        while self.level[v] > self.level[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def vertex_path(self, u: int, v: int) -> list[int]:
        """Vertices on the unique path from ``u`` to ``v``, inclusive."""
        w = self.lca(u, v)
        up = []
        while u != w:
            up.append(u)
            u = self.parent[u]
        down = []
        while v != w:
            down.append(v)
            v = self.parent[v]
        return up + [w] + down[::-1]

    def vertex_distance(self, u: int, v: int) -> Fraction:
        if u == v:
            return Fraction(0)
        key = (u, v) if u < v else (v, u)
        d = self._dist_cache.get(key)
        if d is None:
            d = self.depth[u] + self.depth[v] - 2 * self.depth[self.lca(u, v)]
            self._dist_cache[key] = d
        return d

    # -- metric -----------------------------------------------------------

    def distance(self, x: TreePoint, y: TreePoint) -> Fraction:
        if x.vertex is None and y.vertex is None and x.edge == y.edge:
            return abs(x.offset - y.offset)
        if x.vertex is not None and y.vertex is not None:
            return self.vertex_distance(x.vertex, y.vertex)
        return min(
            dx + self.vertex_distance(a, b) + dy
            for a, dx in self.ends(x)
            for b, dy in self.ends(y)
        )

    def _route(self, x: TreePoint, y: TreePoint) -> tuple[Optional[int], Optional[int]]:
        """Exit vertex from x's cell and entry vertex into y's cell on the geodesic."""
        best = None
        for a, dx in self.ends(x):
            for b, dy in self.ends(y):
                d = dx + self.vertex_distance(a, b) + dy
                if best is None or d < best[0]:
                    best = (d, a, b)
        return best[1], best[2]

    def path(self, x: TreePoint, y: TreePoint) -> "TreePath":
        """The unique geodesic from ``x`` to ``y``."""
        self.check_point(x)
        self.check_point(y)
        if x == y:
            return TreePath((x,), Fraction(0))
        if x.vertex is None and y.vertex is None and x.edge == y.edge:
            return TreePath((x, y), abs(x.offset - y.offset))
        a, b = self._route(x, y)
        # a point on an edge whose endpoint is the other point: route trivially
        pts = [x]
        for v in self.vertex_path(a, b):
            p = TreePoint(vertex=v)
            if p != pts[-1]:
                pts.append(p)
        if y != pts[-1]:
            pts.append(y)
        total = sum((self.distance(p, q) for p, q in zip(pts, pts[1:])), Fraction(0))
        return TreePath(tuple(pts), total)

    def pieces(self, x: TreePoint, y: TreePoint) -> list[tuple[int, Fraction, Fraction]]:
        """The geodesic from ``x`` to ``y`` as ``(edge, lo, hi)`` cells, ``lo < hi``."""
        pts = self.path(x, y).points
        out = []
        for p, q in zip(pts, pts[1:]):
            out.append(self._cell(p, q))
        return out

    def _cell(self, p: TreePoint, q: TreePoint) -> tuple[int, Fraction, Fraction]:
        if p.vertex is None and q.vertex is None:
            lo, hi = sorted((p.offset, q.offset))
            return p.edge, lo, hi
        if p.vertex is not None and q.vertex is not None:
            eid = self.edge_id(p.vertex, q.vertex)
            return eid, Fraction(0), self.edges[eid].length
        inner, vert = (p, q) if p.vertex is None else (q, p)
        e = self.edges[inner.edge]
        if vert.vertex == e.u:
            return inner.edge, Fraction(0), inner.offset
        return inner.edge, inner.offset, e.length

    def point_along(self, x: TreePoint, y: TreePoint, s: Rational) -> TreePoint:
        """The point at arc length ``s`` from ``x`` along the geodesic to ``y``."""
        s = as_fraction(s)
        self.check_point(x)
        self.check_point(y)
        total = self.distance(x, y)
        if s < 0 or s > total:
            raise TreeError(f"arc length {s} outside [0, {total}]")
        if s == total:
            return y
        if x.vertex is None and y.vertex is None and x.edge == y.edge:
            return self.edge_point(x.edge, x.offset + (s if y.offset > x.offset else -s))
        a, b = self._route(x, y)
        if x.vertex is None:
            # leave x's edge through a
            e = self.edges[x.edge]
            lead = x.offset if a == e.u else e.length - x.offset
            if s <= lead:
                return self.edge_point(x.edge, x.offset - s if a == e.u else x.offset + s)
            s -= lead
        route = self.vertex_path(a, b)
        for p, q in zip(route, route[1:]):
            L = self.edges[self.edge_id(p, q)].length
            if s <= L:
                return self.point_between(p, q, s)
            s -= L
        e = self.edges[y.edge]
        return self.point_between(b, e.v if b == e.u else e.u, s)

    def representation_on(self, p: TreePoint, edge: int) -> Fraction:
        """Offset of ``p`` along ``edge`` (``p`` must lie on the closed edge)."""
        if p.vertex is None:
            if p.edge != edge:
                raise TreeError(f"{p!r} is not on edge {edge}")
            return p.offset
        e = self.edges[edge]
        if p.vertex == e.u:
            return Fraction(0)
        if p.vertex == e.v:
            return e.length
        raise TreeError(f"{p!r} is not on edge {edge}")

    def component_side(self, cut: TreePoint, probe: TreePoint) -> int:
        """Label of the component of ``tree minus cut`` that contains ``probe``.

        The label is the vertex adjacent to ``cut`` through which the component
        is entered, so two probes share a label iff their path avoids ``cut``.
        """
        self.check_point(cut)
        self.check_point(probe)
        if cut == probe:
            raise TreeError("probe coincides with the cut point")
        if cut.vertex is None:
            e = self.edges[cut.edge]
            if probe.vertex is None and probe.edge == cut.edge:
                return e.u if probe.offset < cut.offset else e.v
            return self._route(cut, probe)[0]
        c = cut.vertex
        if probe.vertex is not None:
            return self.next_hop(c, probe.vertex)
        e = self.edges[probe.edge]
        if c == e.u:
            return e.v
        if c == e.v:
            return e.u
        return self.next_hop(c, e.u)

    def edge_separates(self, edge: int, p: TreePoint, q: TreePoint) -> bool:
        """True if ``p`` and ``q`` are vertices in different components of ``tree minus edge``."""
        e = self.edges[edge]
        child = e.v if self.parent[e.v] == e.u else e.u
        return self.in_subtree(child, p.vertex) != self.in_subtree(child, q.vertex)

    # -- constructions ----------------------------------------------------

    def segment(self, delta: Rational, must_include: Iterable[TreePoint] = ()) -> "Segmentation":
        """A subdivision with every sub-edge shorter than ``delta``.

        Each edge is first cut at the interior ``must_include`` points and each
        piece of length ``L`` is then split into ``floor(L/delta) + 1`` equal parts.
        """
        delta = as_fraction(delta)
        if delta <= 0:
            raise TreeError("segmentation size must be positive")
        forced: dict[int, set[Fraction]] = {}
        for p in must_include:
            self.check_point(p)
            if p.vertex is None:
                forced.setdefault(p.edge, set()).add(p.offset)
        new_edges = []
        points: list[TreePoint] = [TreePoint(vertex=v) for v in range(self.n)]
        cuts: list[list[Fraction]] = []
        chain: list[list[int]] = []
        for eid, e in enumerate(self.edges):
            marks = [Fraction(0)] + sorted(forced.get(eid, ())) + [e.length]
            offs = [Fraction(0)]
            for lo, hi in zip(marks, marks[1:]):
                k = floor((hi - lo) / delta) + 1
                offs.extend(lo + (hi - lo) * j / k for j in range(1, k + 1))
            verts = [e.u]
            for t in offs[1:-1]:
                verts.append(len(points))
                points.append(TreePoint(edge=eid, offset=t))
            verts.append(e.v)
            for (a, b), (ta, tb) in zip(zip(verts, verts[1:]), zip(offs, offs[1:])):
                new_edges.append((a, b, tb - ta))
            cuts.append(offs)
            chain.append(verts)
        refined = MetricTree(len(points), new_edges)
        return Segmentation(self, refined, tuple(points), cuts, chain)

    def subtree_spanned(self, anchors: Iterable[int]) -> "Subtree":
        """Minimal subtree containing the vertex set ``anchors``."""
        keep = set(anchors)
        if not keep:
            raise TreeError("cannot span an empty vertex set")
        for a in keep:
            if not 0 <= a < self.n:
                raise TreeError(f"vertex {a} not in tree")
        alive = set(range(self.n))
        degree = [len(self.adjacency[v]) for v in range(self.n)]
        queue = deque(v for v in range(self.n) if degree[v] <= 1 and v not in keep)
        while queue:
            v = queue.popleft()
            if v not in alive:
                continue
            alive.discard(v)
            for w, _ in self.adjacency[v]:
                if w in alive:
                    degree[w] -= 1
                    if degree[w] <= 1 and w not in keep:
                        queue.append(w)
        edges = frozenset(
            i for i, e in enumerate(self.edges) if e.u in alive and e.v in alive
        )
        return Subtree(self, frozenset(alive), edges)


@dataclass(frozen=True)
class TreePath:
    """Geodesic as endpoints plus traversed vertices, with its total length."""

    points: tuple[TreePoint, ...]
    length: Fraction

    @property
    def start(self) -> TreePoint:
        return self.points[0]

    @property
    def end(self) -> TreePoint:
        return self.points[-1]


@dataclass(frozen=True)
class Subtree:
    """A connected vertex/edge subset of ``parent``."""

    parent: MetricTree
    vertices: frozenset[int]
    edges: frozenset[int]

    def leaves(self) -> list[int]:
        deg = {v: 0 for v in self.vertices}
        for i in self.edges:
            e = self.parent.edges[i]
            deg[e.u] += 1
            deg[e.v] += 1
        return sorted(v for v, d in deg.items() if d <= 1)

    def to_tree(self) -> tuple[MetricTree, list[int]]:
        """Relabel as a standalone tree; returns it with the new-to-old vertex map."""
        old = sorted(self.vertices)
        new_id = {v: i for i, v in enumerate(old)}
        es = [self.parent.edges[i] for i in sorted(self.edges)]
        tree = MetricTree(len(old), [(new_id[e.u], new_id[e.v], e.length) for e in es])
        return tree, old


@dataclass(frozen=True)
class Segmentation:
    """A subdivision ``refined`` of ``original`` on the same underlying space.

    Vertices ``0..original.n-1`` keep their ids; ``points[i]`` is the original
    point that refined vertex ``i`` stands for.
    """

    original: MetricTree
    refined: MetricTree
    points: tuple[TreePoint, ...]
    cuts: list = field(repr=False)
    chain: list = field(repr=False)

    @property
    def size(self) -> Fraction:
        return max(e.length for e in self.refined.edges)

    def vertex_of(self, p: TreePoint) -> int:
        """Refined vertex id at original point ``p``; raises if ``p`` is not a vertex there."""
        if p.vertex is not None:
            return p.vertex
        offs = self.cuts[p.edge]
        i = bisect_left(offs, p.offset)
        if i < len(offs) and offs[i] == p.offset:
            return self.chain[p.edge][i]
        raise TreeError(f"{p!r} is not a vertex of the segmentation")

    def to_refined(self, p: TreePoint) -> TreePoint:
        if p.vertex is not None:
            return p
        offs = self.cuts[p.edge]
        i = bisect_left(offs, p.offset)
        if offs[i] == p.offset:
            return TreePoint(vertex=self.chain[p.edge][i])
        a, b = self.chain[p.edge][i - 1], self.chain[p.edge][i]
        return self.refined.point_between(a, b, p.offset - offs[i - 1])

    def to_original(self, p: TreePoint) -> TreePoint:
        if p.vertex is not None:
            return self.points[p.vertex]
        e = self.refined.edges[p.edge]
        pu, pv = self.points[e.u], self.points[e.v]
        eid = self._original_edge(pu, pv)
        tu = self.original.representation_on(pu, eid)
        tv = self.original.representation_on(pv, eid)
        return self.original.edge_point(eid, tu + (tv - tu) * p.offset / e.length)

    def original_edge(self, refined_edge: int) -> int:
        e = self.refined.edges[refined_edge]
        return self._original_edge(self.points[e.u], self.points[e.v])

    def _original_edge(self, pu: TreePoint, pv: TreePoint) -> int:
        if pu.vertex is None:
            return pu.edge
        if pv.vertex is None:
            return pv.edge
        return self.original.edge_id(pu.vertex, pv.vertex)


# -- functional surface ------------------------------------------------------


def build_tree(n: int, edges: Iterable[Sequence]) -> MetricTree:
    """Validate and build a metric tree on vertices ``0..n-1``."""
    return MetricTree(n, edges)


def distance(t: MetricTree, x: TreePoint, y: TreePoint) -> Fraction:
    t.check_point(x)
    t.check_point(y)
    return t.distance(x, y)


def path(t: MetricTree, x: TreePoint, y: TreePoint) -> TreePath:
    return t.path(x, y)


def component_side(t: MetricTree, cut: TreePoint, probe: TreePoint) -> int:
    return t.component_side(cut, probe)


def segment(t: MetricTree, delta: Rational, must_include: Iterable[TreePoint] = ()) -> Segmentation:
    return t.segment(delta, must_include)


def subtree_spanned(t: MetricTree, anchors: Iterable[int]) -> Subtree:
    return t.subtree_spanned(anchors)
